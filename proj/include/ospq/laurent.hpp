#pragma once

#include "ospq/rational.hpp"

#include <algorithm>
#include <vector>

namespace ospq {

// Laurent polynomial in one variable over the Gaussian rationals.
// Stored dense: coeff[k] is the coefficient of s^(lo+k); coeff is empty for 0,
// otherwise its first and last entries are nonzero.
class LaurentPoly {
  public:
    LaurentPoly() = default;
    LaurentPoly(const GaussRat& c) { if (!c.is_zero()) { lo_ = 0; coeff_ = {c}; } }
    LaurentPoly(long n) : LaurentPoly(GaussRat(n)) {}

    static LaurentPoly monomial(const GaussRat& c, long exp) {
        LaurentPoly p;
        if (!c.is_zero()) { p.lo_ = exp; p.coeff_ = {c}; }
        return p;
    }

    bool is_zero() const { return coeff_.empty(); }
    long low() const { return lo_; }                       // valuation at s=0
    long high() const { return lo_ + (long)coeff_.size() - 1; }
    long degree_span() const { return is_zero() ? -1 : high() - low(); }

    GaussRat at(long exp) const {
        if (is_zero() || exp < lo_ || exp > high()) return GaussRat();
        return coeff_[exp - lo_];
    }

    GaussRat leading() const { return is_zero() ? GaussRat() : coeff_.back(); }
    GaussRat trailing() const { return is_zero() ? GaussRat() : coeff_.front(); }

    LaurentPoly shifted(long k) const {
        LaurentPoly p(*this);
        if (!p.is_zero()) p.lo_ += k;
        return p;
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        long lo = std::min(a.lo_, b.lo_), hi = std::max(a.high(), b.high());
        std::vector<GaussRat> c(hi - lo + 1);
        for (size_t k = 0; k < a.coeff_.size(); ++k) c[a.lo_ - lo + k] += a.coeff_[k];
        for (size_t k = 0; k < b.coeff_.size(); ++k) c[b.lo_ - lo + k] += b.coeff_[k];
        return from_dense(std::move(c), lo);
    }
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }
    LaurentPoly operator-() const {
        LaurentPoly p(*this);
        for (auto& c : p.coeff_) c = -c;
        return p;
    }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.is_zero() || b.is_zero()) return LaurentPoly();
        std::vector<GaussRat> c(a.coeff_.size() + b.coeff_.size() - 1);
        for (size_t k = 0; k < a.coeff_.size(); ++k) {
            if (a.coeff_[k].is_zero()) continue;
            for (size_t l = 0; l < b.coeff_.size(); ++l)
                if (!b.coeff_[l].is_zero()) c[k + l] += a.coeff_[k] * b.coeff_[l];
        }
        return from_dense(std::move(c), a.lo_ + b.lo_);
    }

    LaurentPoly& operator+=(const LaurentPoly& o) { *this = *this + o; return *this; }
    LaurentPoly& operator*=(const LaurentPoly& o) { *this = *this * o; return *this; }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.lo_ == b.lo_ && a.coeff_ == b.coeff_ && true;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    // Polynomial division on the s^low-stripped parts: *this = q*d + r, deg r < deg d.
    // Requires d nonzero.
    void divmod(const LaurentPoly& d, LaurentPoly& q, LaurentPoly& r) const {
        if (d.is_zero()) throw std::domain_error("LaurentPoly: division by zero");
        LaurentPoly num = this->shifted(-lo_), den = d.shifted(-d.lo_);
        if (is_zero()) num = LaurentPoly();
        std::vector<GaussRat> rem = num.coeff_;
        long rem_deg = (long)rem.size() - 1;
        long den_deg = (long)den.coeff_.size() - 1;
        GaussRat lead_inv = den.coeff_.back().inv();
        std::vector<GaussRat> quot(std::max<long>(rem_deg - den_deg + 1, 0));
        for (long k = rem_deg; k >= den_deg; --k) {
            if (rem[k].is_zero()) continue;
            GaussRat f = rem[k] * lead_inv;
            quot[k - den_deg] = f;
            for (long l = 0; l <= den_deg; ++l) rem[k - den_deg + l] -= f * den.coeff_[l];
        }
        q = from_dense(std::move(quot), lo_ - d.lo_);
        r = from_dense(std::move(rem), is_zero() ? 0 : lo_);
    }

    // Exact division; throws if the remainder is nonzero.
    LaurentPoly divexact(const LaurentPoly& d) const {
        LaurentPoly q, r;
        divmod(d, q, r);
        if (!r.is_zero()) throw std::domain_error("LaurentPoly: inexact division");
        return q;
    }

    // Monic gcd of the polynomial parts (s-powers stripped).
    static LaurentPoly gcd(LaurentPoly a, LaurentPoly b) {
        a = a.shifted(a.is_zero() ? 0 : -a.lo_);
        b = b.shifted(b.is_zero() ? 0 : -b.lo_);
        while (!b.is_zero()) {
            LaurentPoly q, r;
            a.divmod(b, q, r);
            a = b;
            b = r.is_zero() ? r : r.shifted(-r.lo_);
        }
        if (a.is_zero()) return a;
        GaussRat inv = a.leading().inv();
        for (auto& c : a.coeff_) c *= inv;
        return a;
    }

    LaurentPoly derivative() const {
        if (is_zero()) return LaurentPoly();
        std::vector<GaussRat> c(coeff_.size());
        for (size_t k = 0; k < coeff_.size(); ++k) c[k] = coeff_[k] * GaussRat(lo_ + (long)k);
        return from_dense(std::move(c), lo_ - 1);
    }

    // Horner evaluation, with the caller supplying arithmetic for the target ring.
    template <typename T, typename Mul, typename Add>
    T eval(const T& x, const T& zero, Mul mul, Add addc) const {
        T acc = zero;
        for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it) {
            acc = mul(acc, x);
            acc = addc(acc, *it);
        }
        return acc;  // caller multiplies by x^lo_
    }

    const std::vector<GaussRat>& coeffs() const { return coeff_; }

    std::string str(const std::string& var = "s") const {
        if (is_zero()) return "0";
        std::string out;
        for (long k = (long)coeff_.size() - 1; k >= 0; --k) {
            const GaussRat& c = coeff_[k];
            if (c.is_zero()) continue;
            long e = lo_ + k;
            std::string term;
            std::string cs = c.str();
            bool needs_paren = cs.find('+') != std::string::npos ||
                               cs.find('-', 1) != std::string::npos;
            if (e == 0) term = needs_paren ? "(" + cs + ")" : cs;
            else {
                std::string pow = (e == 1) ? var : var + "^" + std::to_string(e);
                if (cs == "1") term = pow;
                else if (cs == "-1") term = "-" + pow;
                else term = (needs_paren ? "(" + cs + ")" : cs) + "*" + pow;
            }
            if (!out.empty() && term[0] != '-') out += "+";
            out += term;
        }
        return out;
    }

  private:
    static LaurentPoly from_dense(std::vector<GaussRat> c, long lo) {
        size_t b = 0, e = c.size();
        while (b < e && c[b].is_zero()) ++b;
        while (e > b && c[e - 1].is_zero()) --e;
        LaurentPoly p;
        if (b < e) {
            p.lo_ = lo + (long)b;
            p.coeff_.assign(c.begin() + b, c.begin() + e);
        }
        return p;
    }

    long lo_ = 0;
    std::vector<GaussRat> coeff_;  // empty iff zero
};

}  // namespace ospq
