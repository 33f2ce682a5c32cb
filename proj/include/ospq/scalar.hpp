#pragma once

#include "ospq/qspec.hpp"

#include <limits>
#include <optional>

namespace ospq {

// Raised when a generic scalar is evaluated at a root of unity where its
// denominator vanishes to higher order than its numerator.
struct PoleError : std::domain_error {
    int order;
    explicit PoleError(int ord)
        : std::domain_error("pole of order " + std::to_string(ord) + " at the evaluation point"),
          order(ord) {}
};

// Exact element of the active ground field. Generic mode: a reduced ratio of
// Laurent polynomials in s = q^(1/2) over Q(i), denominator monic with lowest
// exponent 0. Root mode: an element of Q(zeta_M) attached to its RootCtx.
class Scalar {
  public:
    Scalar() = default;  // generic 0

    static Scalar zero(const QSpec& spec) {
        return spec.is_generic() ? Scalar() : from_cyclo(spec.ctx()->zero(), spec.ctx());
    }
    static Scalar one(const QSpec& spec) { return integer(1, spec); }
    static Scalar integer(long n, const QSpec& spec) {
        if (spec.is_generic()) return from_poly(LaurentPoly(n));
        CycloVec v = spec.ctx()->zero();
        v[0] = n;
        return from_cyclo(std::move(v), spec.ctx());
    }
    static Scalar rational(const mpq_class& q, const QSpec& spec) {
        if (spec.is_generic()) return from_poly(LaurentPoly(GaussRat(q)));
        CycloVec v = spec.ctx()->zero();
        v[0] = q;
        return from_cyclo(std::move(v), spec.ctx());
    }

    // s^k, with s = q^(1/2)
    static Scalar s_pow(long k, const QSpec& spec) {
        if (spec.is_generic()) return from_poly(LaurentPoly::monomial(GaussRat(1), k));
        const auto& ctx = spec.ctx();
        return from_cyclo(ctx->zeta_power(k * ctx->s_exponent()), ctx);
    }
    static Scalar q_pow(long k, const QSpec& spec) { return s_pow(2 * k, spec); }
    static Scalar unit_i(const QSpec& spec) {
        if (spec.is_generic()) return from_poly(LaurentPoly(GaussRat::unit_i()));
        const auto& ctx = spec.ctx();
        return from_cyclo(ctx->zeta_power(ctx->i_exponent()), ctx);
    }

    static Scalar from_poly(LaurentPoly num) {
        Scalar x;
        x.num_ = std::move(num);
        x.den_ = LaurentPoly(1);
        return x;
    }
    static Scalar ratio(const LaurentPoly& num, const LaurentPoly& den) {
        if (den.is_zero()) throw std::domain_error("Scalar: zero denominator");
        Scalar x;
        x.num_ = num;
        x.den_ = den;
        x.reduce();
        return x;
    }
    static Scalar from_cyclo(CycloVec v, std::shared_ptr<const RootCtx> ctx) {
        Scalar x;
        x.ctx_ = std::move(ctx);
        x.cv_ = std::move(v);
        return x;
    }

    bool is_generic() const { return ctx_ == nullptr; }
    bool is_zero() const { return is_generic() ? num_.is_zero() : ctx_->is_zero(cv_); }
    bool is_one() const { return *this == one_like(*this); }

    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }
    const CycloVec& cyclo() const { return cv_; }
    const std::shared_ptr<const RootCtx>& ctx() const { return ctx_; }

    // A default-constructed Scalar is the neutral zero: it combines with
    // either mode (maps and containers default-construct entries).
    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.is_generic() != b.is_generic()) {
            if (a.is_generic() && a.is_zero()) return b;
            if (b.is_generic() && b.is_zero()) return a;
            mode_error();
        }
        if (a.is_generic()) return ratio(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
        return from_cyclo(a.ctx_->add(a.cv_, b.cv_), a.ctx_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
    Scalar operator-() const {
        Scalar x(*this);
        if (is_generic()) x.num_ = -x.num_;
        else x.cv_ = ctx_->neg(x.cv_);
        return x;
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.is_generic() != b.is_generic()) {
            if (a.is_generic() && a.is_zero()) return b.zero_like();
            if (b.is_generic() && b.is_zero()) return a.zero_like();
            mode_error();
        }
        if (a.is_generic()) {
            if (a.is_zero() || b.is_zero()) return Scalar();
            return ratio(a.num_ * b.num_, a.den_ * b.den_);
        }
        return from_cyclo(a.ctx_->mul(a.cv_, b.cv_), a.ctx_);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }

    Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
    Scalar& operator-=(const Scalar& o) { *this = *this - o; return *this; }
    Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }

    Scalar inv() const {
        if (is_zero()) throw std::domain_error("Scalar: division by zero");
        if (is_generic()) return ratio(den_, num_);
        return from_cyclo(ctx_->inv(cv_), ctx_);
    }

    Scalar zero_like() const {
        return is_generic() ? Scalar() : from_cyclo(ctx_->zero(), ctx_);
    }

    Scalar pow(long k) const {
        if (k < 0) return inv().pow(-k);
        Scalar acc = one_like(*this), base = *this;
        while (k) {
            if (k & 1) acc *= base;
            base *= base;
            k >>= 1;
        }
        return acc;
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.is_generic() != b.is_generic()) {
            if (a.is_generic() && a.is_zero()) return b.is_zero();
            if (b.is_generic() && b.is_zero()) return a.is_zero();
            mode_error();
        }
        if (a.is_generic()) return a.num_ == b.num_ && a.den_ == b.den_;
        return a.cv_ == b.cv_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    std::string str() const {
        if (!is_generic()) {
            LaurentPoly p;
            for (long k = (long)cv_.size() - 1; k >= 0; --k)
                p += LaurentPoly::monomial(GaussRat(cv_[k]), k);
            return p.str("z");
        }
        if (den_ == LaurentPoly(1)) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

  private:
    static Scalar one_like(const Scalar& a) {
        return a.is_generic() ? from_poly(LaurentPoly(1)) : from_cyclo(a.ctx_->one(), a.ctx_);
    }
    [[noreturn]] static void mode_error() {
        throw std::logic_error("Scalar: mixed generic/root arithmetic");
    }

    // canonical form: gcd(num_poly, den) = 1, den a monic polynomial with
    // nonzero constant term (s-powers of den absorbed into num)
    void reduce() {
        if (num_.is_zero()) { den_ = LaurentPoly(1); return; }
        num_ = num_.shifted(-den_.low());
        den_ = den_.shifted(-den_.low());
        LaurentPoly g = LaurentPoly::gcd(num_, den_);
        if (g.degree_span() > 0) {
            long v = num_.low();
            num_ = num_.shifted(-v).divexact(g).shifted(v);
            den_ = den_.divexact(g);
        }
        GaussRat lead = den_.leading();
        if (!lead.is_one()) {
            GaussRat li = lead.inv();
            num_ = num_ * LaurentPoly(li);
            den_ = den_ * LaurentPoly(li);
        }
    }

    LaurentPoly num_, den_ = LaurentPoly(1);
    CycloVec cv_;
    std::shared_ptr<const RootCtx> ctx_;
};

namespace detail {

// Evaluate a Laurent polynomial at s = zeta^(s_exp) inside Q(zeta_M),
// embedding i as zeta^(M/4).
inline CycloVec eval_at_root(const LaurentPoly& p, const RootCtx& ctx) {
    CycloVec acc = ctx.zero();
    if (p.is_zero()) return acc;
    CycloVec s = ctx.zeta_power(ctx.s_exponent());
    CycloVec iu = ctx.zeta_power(ctx.i_exponent());
    const auto& coeffs = p.coeffs();
    for (long k = (long)coeffs.size() - 1; k >= 0; --k) {
        acc = ctx.mul(acc, s);
        const GaussRat& c = coeffs[k];
        if (!c.is_zero()) {
            CycloVec cc = ctx.zero();
            cc[0] = c.re;
            if (c.im != 0) {
                CycloVec im_part = iu;
                for (auto& x : im_part) x *= c.im;
                cc = ctx.add(cc, im_part);
            }
            acc = ctx.add(acc, cc);
        }
    }
    return ctx.mul(acc, ctx.zeta_power(p.low() * ctx.s_exponent()));
}

// Order of vanishing of p at s = zeta^(s_exp); -1 encodes p == 0.
inline long root_valuation(LaurentPoly p, const RootCtx& ctx, CycloVec* lead = nullptr,
                           long max_order = 1000) {
    if (p.is_zero()) return -1;
    mpq_class fact = 1;
    for (long k = 0; k <= max_order; ++k) {
        CycloVec v = eval_at_root(p, ctx);
        if (!ctx.is_zero(v)) {
            if (lead) {
                for (auto& c : v) c /= fact;  // p^(k)(z)/k!
                *lead = v;
            }
            return k;
        }
        p = p.derivative();
        if (p.is_zero()) return -1;  // p was identically 0 after shifts; unreachable for p != 0
        fact *= (k + 1);
    }
    throw std::logic_error("root_valuation: order bound exceeded");
}

}  // namespace detail

// num/den valuation of a generic scalar at the root (negative = pole order).
// Zero scalars have no finite valuation; returned as a large sentinel.
inline long valuation_at_root(const Scalar& x, const QSpec& spec) {
    if (!x.is_generic() || !spec.is_root())
        throw std::invalid_argument("valuation_at_root: needs generic scalar and root spec");
    if (x.is_zero()) return std::numeric_limits<long>::max() / 2;
    const RootCtx& ctx = *spec.ctx();
    long a = detail::root_valuation(x.num(), ctx);
    long b = detail::root_valuation(x.den(), ctx);
    return a - b;
}

// Value of lim (s - zeta_s)^shift * x(s) at the root. shift = 0 is plain
// evaluation; throws PoleError when the limit is infinite.
inline Scalar specialize_shifted(const Scalar& x, const QSpec& spec, long shift) {
    if (!x.is_generic() || !spec.is_root())
        throw std::invalid_argument("specialize: needs generic scalar and root spec");
    const auto& ctxp = spec.ctx();
    const RootCtx& ctx = *ctxp;
    if (x.is_zero()) return Scalar::zero(spec);
    CycloVec glead, hlead;
    long a = detail::root_valuation(x.num(), ctx, &glead);
    long b = detail::root_valuation(x.den(), ctx, &hlead);
    long v = a - b + shift;
    if (v > 0) return Scalar::zero(spec);
    if (v < 0) throw PoleError((int)-v);
    return Scalar::from_cyclo(ctx.mul(glead, ctx.inv(hlead)), ctxp);
}

inline Scalar specialize(const Scalar& x, const QSpec& spec) { return specialize_shifted(x, spec, 0); }

inline std::optional<Scalar> try_specialize(const Scalar& x, const QSpec& spec,
                                            int* pole_order = nullptr) {
    try {
        return specialize(x, spec);
    } catch (const PoleError& p) {
        if (pole_order) *pole_order = p.order;
        return std::nullopt;
    }
}

// [a]_q = (s^2a - s^-2a)/(s^2 - s^-2) for half-integer a given as 2a.
inline Scalar q_number_twice(long twice_a, const QSpec& spec) {
    Scalar num = Scalar::s_pow(twice_a, spec) - Scalar::s_pow(-twice_a, spec);
    Scalar den = Scalar::s_pow(2, spec) - Scalar::s_pow(-2, spec);
    return num * den.inv();
}

inline Scalar q_number(long a, const QSpec& spec) { return q_number_twice(2 * a, spec); }

// A base together with an explicitly chosen square root of it, both as
// generic-field scalars so binomials can be specialized after cancellation.
struct SqrtBase {
    Scalar base;
    Scalar root;

    static SqrtBase q() {
        QSpec g = QSpec::generic();
        return {Scalar::q_pow(1, g), Scalar::s_pow(1, g)};
    }
    // branch (-q^-1)^(1/2) = i * s^-1
    static SqrtBase minus_q_inv() {
        QSpec g = QSpec::generic();
        return {-Scalar::q_pow(-1, g), Scalar::unit_i(g) * Scalar::s_pow(-1, g)};
    }
};

// [p] in base b (the square root of the binomial base): (b^p - b^-p)/(b - b^-1)
inline Scalar bracket_in_root(long p, const Scalar& b) {
    Scalar den = b - b.inv();
    if (den.is_zero()) throw std::domain_error("q_binomial: base root b has b = b^-1");
    return (b.pow(p) - b.pow(-p)) / den;
}

// Gaussian binomial [n r] in the given base: [n]_b! b^((n-r)r) / ([r]_b! [n-r]_b!)
// computed in the generic field and specialized afterwards in root mode, so
// vanishing factorials downstairs cancel exactly.
inline Scalar q_binomial(long n, long r, const SqrtBase& base, const QSpec& spec) {
    if (r < 0 || r > n) throw std::invalid_argument("q_binomial: need 0 <= r <= n");
    if (base.base.is_zero() || base.root.is_zero())
        throw std::invalid_argument("q_binomial: zero base");
    if (!base.base.is_generic())
        throw std::invalid_argument("q_binomial: base must be generic-field");
    if (!(base.root * base.root == base.base))
        throw std::invalid_argument("q_binomial: declared root does not square to the base");
    const Scalar& b = base.root;
    QSpec gen = QSpec::generic();
    Scalar num = Scalar::one(gen), den = Scalar::one(gen);
    for (long p = 1; p <= n; ++p) num *= bracket_in_root(p, b);
    for (long p = 1; p <= r; ++p) den *= bracket_in_root(p, b);
    for (long p = 1; p <= n - r; ++p) den *= bracket_in_root(p, b);
    Scalar out = num / den * b.pow((n - r) * r);
    return spec.is_root() ? specialize(out, spec) : out;
}

inline Scalar q_binomial(long n, long r, const QSpec& spec) {
    return q_binomial(n, r, SqrtBase::minus_q_inv(), spec);
}

}  // namespace ospq
