#pragma once

#include "ospq/laurent.hpp"

#include <memory>
#include <numeric>
#include <optional>
#include <vector>

namespace ospq {

// Element of Q(zeta_M): coefficient vector of length deg(Phi_M).
using CycloVec = std::vector<mpq_class>;

// Shared data for one root-of-unity evaluation point.
//
// q is the canonical primitive solution of q^N = sign: q = zeta_{2N} for
// sign = -1 and q = zeta_N for sign = +1 (N odd). Everything is embedded in
// Q(zeta_M) with M = lcm(4, 2d), d = ord(q), so that s = q^{1/2} and i live
// in the same field: s = zeta_M^{M/2d}, i = zeta_M^{M/4}.
struct RootCtx {
    int N = 0;
    int sign = 0;
    long d = 0;     // multiplicative order of q
    long ncal = 0;  // N-cal: order of -q; nilpotency degree of e, f
    long M = 0;
    long deg = 0;   // deg Phi_M
    std::vector<mpq_class> phi;          // Phi_M, monic, length deg+1
    std::vector<CycloVec> zeta_pow;      // zeta^k reduced, k = 0..M-1
    std::vector<CycloVec> red;           // zeta^(deg+k) reduced, k = 0..deg-2

    long s_exponent() const { return M / (2 * d); }  // s = zeta^(M/2d)
    long i_exponent() const { return M / 4; }

    CycloVec zero() const { return CycloVec(deg, 0); }
    CycloVec one() const {
        CycloVec v(deg, 0);
        v[0] = 1;
        return v;
    }

    bool is_zero(const CycloVec& v) const {
        for (const auto& c : v) if (c != 0) return false;
        return true;
    }

    CycloVec add(const CycloVec& a, const CycloVec& b) const {
        CycloVec r(deg);
        for (long k = 0; k < deg; ++k) r[k] = a[k] + b[k];
        return r;
    }
    CycloVec sub(const CycloVec& a, const CycloVec& b) const {
        CycloVec r(deg);
        for (long k = 0; k < deg; ++k) r[k] = a[k] - b[k];
        return r;
    }
    CycloVec neg(const CycloVec& a) const {
        CycloVec r(deg);
        for (long k = 0; k < deg; ++k) r[k] = -a[k];
        return r;
    }

    CycloVec mul(const CycloVec& a, const CycloVec& b) const {
        std::vector<mpq_class> prod(2 * deg - 1, 0);
        for (long k = 0; k < deg; ++k) {
            if (a[k] == 0) continue;
            for (long l = 0; l < deg; ++l)
                if (b[l] != 0) prod[k + l] += a[k] * b[l];
        }
        CycloVec r(prod.begin(), prod.begin() + deg);
        for (long k = deg; k < 2 * deg - 1; ++k) {
            if (prod[k] == 0) continue;
            const CycloVec& rk = red[k - deg];
            for (long l = 0; l < deg; ++l) r[l] += prod[k] * rk[l];
        }
        return r;
    }

    // Inverse via extended Euclid against Phi_M (irreducible over Q).
    CycloVec inv(const CycloVec& a) const {
        if (is_zero(a)) throw std::domain_error("cyclotomic: division by zero");
        // r0 = Phi, r1 = a as polynomials; track t with t*a = r (mod Phi)
        std::vector<mpq_class> r0 = phi, r1(a), t0(deg + 1, 0), t1(deg + 1, 0);
        r1.resize(deg + 1, 0);
        t1[0] = 1;
        auto degree = [](const std::vector<mpq_class>& p) {
            for (long k = (long)p.size() - 1; k >= 0; --k)
                if (p[k] != 0) return k;
            return -1L;
        };
        while (true) {
            long d1 = degree(r1);
            if (d1 < 0) throw std::domain_error("cyclotomic: division by zero");
            if (d1 == 0) break;
            long d0 = degree(r0);
            while (d0 >= d1) {
                mpq_class f = r0[d0] / r1[d1];
                for (long k = 0; k <= d1; ++k) r0[d0 - d1 + k] -= f * r1[k];
                // t0 -= f * x^(d0-d1) * t1
                for (long k = 0; k <= (long)deg - (d0 - d1); ++k)
                    t0[k + d0 - d1] -= f * t1[k];
                d0 = degree(r0);
            }
            std::swap(r0, r1);
            std::swap(t0, t1);
        }
        mpq_class c = r1[degree(r1)];
        CycloVec out(deg);
        for (long k = 0; k < deg; ++k) out[k] = t1[k] / c;
        return out;
    }

    CycloVec zeta_power(long k) const {
        k %= M;
        if (k < 0) k += M;
        return zeta_pow[k];
    }
};

// Evaluation context: generic indeterminate q, or q a fixed primitive root of
// unity. Value type; root-of-unity data is shared.
class QSpec {
  public:
    QSpec() = default;  // generic

    static QSpec generic() { return QSpec(); }

    // q^N = sign with q primitive for that relation. (N even, sign=+1) is not
    // primitive and normalizes to (N/2, -1); q = +-1 is rejected.
    static QSpec root(int N, int sign) {
        if (sign != 1 && sign != -1) throw std::invalid_argument("QSpec: sign must be +-1");
        if (N < 1) throw std::invalid_argument("QSpec: N must be positive");
        while (sign == 1 && N % 2 == 0) { N /= 2; sign = -1; }
        if (N == 1 && sign == 1) throw std::invalid_argument("QSpec: q=1 excluded");
        if (N == 1 && sign == -1) throw std::invalid_argument("QSpec: q=-1 excluded");
        QSpec spec;
        spec.ctx_ = build_ctx(N, sign);
        return spec;
    }

    bool is_generic() const { return ctx_ == nullptr; }
    bool is_root() const { return ctx_ != nullptr; }
    const std::shared_ptr<const RootCtx>& ctx() const { return ctx_; }

    int N() const { return require()->N; }
    int sign() const { return require()->sign; }
    long order_of_q() const { return require()->d; }
    long ncal() const { return require()->ncal; }  // order of -q

    friend bool operator==(const QSpec& a, const QSpec& b) {
        if (a.is_generic() != b.is_generic()) return false;
        if (a.is_generic()) return true;
        return a.ctx_->N == b.ctx_->N && a.ctx_->sign == b.ctx_->sign;
    }
    friend bool operator!=(const QSpec& a, const QSpec& b) { return !(a == b); }

    std::string str() const {
        if (is_generic()) return "generic";
        return "q^" + std::to_string(N()) + "=" + (sign() > 0 ? "+1" : "-1");
    }

  private:
    const std::shared_ptr<const RootCtx>& require() const {
        if (!ctx_) throw std::logic_error("QSpec: root-of-unity data requested in generic mode");
        return ctx_;
    }

    // Phi_n by removing the proper-divisor cyclotomic factors from x^n - 1.
    static std::vector<mpq_class> cyclotomic(long n) {
        std::vector<mpq_class> num(n + 1, 0);
        num[0] = -1;
        num[n] = 1;
        for (long d = 1; d < n; ++d) {
            if (n % d != 0) continue;
            std::vector<mpq_class> phid = cyclotomic(d);
            // exact polynomial division num /= phid
            long nd = (long)num.size() - 1, dd = (long)phid.size() - 1;
            while (nd >= 0 && num[nd] == 0) --nd;
            std::vector<mpq_class> quot(nd - dd + 1, 0);
            for (long k = nd; k >= dd; --k) {
                if (num[k] == 0) continue;
                mpq_class f = num[k] / phid[dd];
                quot[k - dd] = f;
                for (long l = 0; l <= dd; ++l) num[k - dd + l] -= f * phid[l];
            }
            num = quot;
            num.resize(quot.size(), 0);
        }
        return num;
    }

    static std::shared_ptr<const RootCtx> build_ctx(int N, int sign) {
        auto ctx = std::make_shared<RootCtx>();
        ctx->N = N;
        ctx->sign = sign;
        ctx->d = (sign == -1) ? 2L * N : N;
        long M = std::lcm(4L, 2 * ctx->d);
        ctx->M = M;
        ctx->phi = cyclotomic(M);
        ctx->deg = (long)ctx->phi.size() - 1;
        // zeta powers, reducing by Phi_M on the way up
        ctx->zeta_pow.resize(M);
        ctx->zeta_pow[0] = ctx->one();
        for (long k = 1; k < M; ++k) {
            CycloVec prev = ctx->zeta_pow[k - 1];
            CycloVec cur(ctx->deg, 0);
            mpq_class top = prev[ctx->deg - 1];
            for (long l = ctx->deg - 1; l >= 1; --l) cur[l] = prev[l - 1];
            cur[0] = 0;
            if (top != 0)
                for (long l = 0; l < ctx->deg; ++l) cur[l] -= top * ctx->phi[l];
            ctx->zeta_pow[k] = cur;
        }
        ctx->red.resize(std::max<long>(ctx->deg - 1, 0));
        for (long k = 0; k < ctx->deg - 1; ++k) {
            // zeta^(deg+k) = zeta^((deg+k) mod M) as reduced vector
            ctx->red[k] = ctx->zeta_pow[(ctx->deg + k) % M];
        }
        // order of -q: -q = zeta^(M/2 + M/d)
        long e = (M / 2 + M / ctx->d) % M;
        ctx->ncal = M / std::gcd(M, e);
        return ctx;
    }

    std::shared_ptr<const RootCtx> ctx_;
};

}  // namespace ospq
