#pragma once

#include "ospq/matrix.hpp"

#include <sstream>
#include <string>

namespace ospq {

// Symbolic name of a summand: V_r, Vbar_r, or I^(R){k,R-k}.
struct RepLabel {
    enum class Kind { V, VBar, I };
    Kind kind = Kind::V;
    long dim = 0;
    long k = 0;        // larger constituent, Kind::I only
    long shift2 = 0;   // k-eigenvalue offset as an s-exponent; 0 for centered pieces

    static RepLabel V(long r) { return {Kind::V, r, 0, 0}; }
    static RepLabel VBar(long r) { return {Kind::VBar, r, 0, 0}; }
    static RepLabel I(long R, long k, long shift2 = 0) { return {Kind::I, R, k, shift2}; }

    bool operator==(const RepLabel& o) const {
        return kind == o.kind && dim == o.dim && k == o.k;
    }
    bool operator<(const RepLabel& o) const {
        return std::tuple((int)kind, dim, k) < std::tuple((int)o.kind, o.dim, o.k);
    }

    std::string str() const {
        std::ostringstream os;
        switch (kind) {
            case Kind::V: os << "V" << dim; break;
            case Kind::VBar: os << "Vbar" << dim; break;
            case Kind::I: os << "I(" << dim << "){" << k << "," << dim - k << "}"; break;
        }
        if (shift2 != 0) os << "@s^" << shift2;
        return os.str();
    }
};

// Basis state bookkeeping: t = 2*hbar; whether the extra lambda shift with
// q^lambda = i is present is a module-wide flag (stored on the rep).
struct BasisState {
    long t = 0;
    int parity = 0;
};

struct GradedRep {
    QSpec spec;
    int lambda = 0;  // 1 when weights are hbar + lambda
    std::vector<BasisState> states;
    Mat E, F, K, Kinv;
    std::string name;
    std::vector<std::vector<long>> prov;  // factor provenance for tensor products

    long dim() const { return (long)states.size(); }
    Scalar k_eigenvalue(long i) const { return K(i, i); }
};

// [a]_q for a = t/2, or [a + lambda]_q = i (q^a + q^-a)/(q - q^-1) when the
// lambda shift is on.
inline Scalar bracket_twice(long t, int lambda, const QSpec& spec) {
    if (!lambda) return q_number_twice(t, spec);
    Scalar num = Scalar::unit_i(spec) * (Scalar::s_pow(t, spec) + Scalar::s_pow(-t, spec));
    Scalar den = Scalar::s_pow(2, spec) - Scalar::s_pow(-2, spec);
    return num / den;
}

// alpha^j_h with four_j = 4j, two_h = 2h (lambda part of h implied by parity
// of four_j): sum_{i=h..2j} (-1)^(i-h) [i]_q. Defined for -2j < h <= 2j.
inline Scalar alpha_coeff(long four_j, long two_h, const QSpec& spec) {
    if (two_h <= -four_j || two_h > four_j || ((two_h ^ four_j) & 1))
        throw std::invalid_argument("alpha_coeff: h out of range");
    int lambda = (int)(four_j & 1);
    Scalar acc = Scalar::zero(spec);
    int sign = 1;
    for (long t = two_h; t <= four_j; t += 2, sign = -sign) {
        Scalar term = bracket_twice(t, lambda, spec);
        acc += sign > 0 ? term : -term;
    }
    return acc;
}

// Largest permissible irrep dimension at a root of unity: r <= ncal within
// the requested parity class (odd-dimensional reps unless even_sector).
inline long r_max(const QSpec& spec, bool even_sector = false) {
    long n = spec.ncal();
    if (even_sector) return (n % 2 == 0) ? n : n - 1;
    return (n % 2 == 0) ? n - 1 : n;
}

struct JmaxInfo {
    long four_j;  // 4*j_max
    long rmax;    // 4*j_max + 1
};

inline JmaxInfo jmax(const QSpec& spec, bool even_sector = false) {
    long rm = r_max(spec, even_sector);
    return {rm - 1, rm};
}

// Lowest weight irrep V_r in the Eq.-(40)-style normalization: below weight
// one the lowering coefficient carries alpha, at and above it the raising one
// does; even-dimensional reps carry the raising coefficient 1 throughout.
// Past r_max the same formulas produce the non-exactly-reducible Vbar_r.
inline GradedRep build_irrep(long r, const QSpec& spec) {
    if (r < 1) throw std::invalid_argument("build_irrep: r >= 1 required");
    GradedRep rep;
    rep.spec = spec;
    rep.lambda = (int)(r % 2 == 0);
    rep.states.resize(r);
    for (long k = 0; k < r; ++k) rep.states[k] = {-(r - 1) + 2 * k, (int)(k % 2)};
    rep.E = Mat(r, r, spec);
    rep.F = Mat(r, r, spec);
    rep.K = Mat(r, r, spec);
    rep.Kinv = Mat(r, r, spec);
    Scalar iu = Scalar::unit_i(spec);
    for (long k = 0; k < r; ++k) {
        long t = rep.states[k].t;
        Scalar ke = Scalar::s_pow(t, spec);
        if (rep.lambda) ke = iu * ke;
        rep.K(k, k) = ke;
        rep.Kinv(k, k) = ke.inv();
    }
    long four_j = r - 1;
    for (long k = 1; k < r; ++k) {
        // rung between states k-1 and k, alpha argument is the upper weight
        long t_up = rep.states[k].t;
        Scalar a = alpha_coeff(four_j, t_up, spec);
        Scalar beta, gamma;
        if (a.is_zero()) {
            // the ladder breaks in both directions at a vanishing rung; this
            // keeps e and f N-cal-nilpotent past r_max
            beta = gamma = Scalar::zero(spec);
        } else if (rep.lambda) {
            beta = Scalar::one(spec);
            gamma = a;
        } else if (t_up >= 2) {
            beta = a;
            gamma = Scalar::one(spec);
        } else {
            beta = Scalar::one(spec);
            gamma = a;
        }
        rep.E(k, k - 1) = beta;
        rep.F(k - 1, k) = gamma;
    }
    bool bar = spec.is_root() && r > r_max(spec, rep.lambda == 1);
    rep.name = (bar ? "Vbar" : "V") + std::to_string(r);
    return rep;
}

struct CheckReport {
    bool ok = true;
    std::string detail;

    void fail(const std::string& msg) {
        if (ok) { ok = false; detail = msg; }
    }
};

// [H - 1/2]_q as a matrix: (K q^-1/2 - K^-1 q^1/2)/(q - q^-1)
inline Mat h_minus_half(const GradedRep& rep) {
    const QSpec& spec = rep.spec;
    Scalar den = (Scalar::s_pow(2, spec) - Scalar::s_pow(-2, spec)).inv();
    return den * (Scalar::s_pow(-1, spec) * rep.K - Scalar::s_pow(1, spec) * rep.Kinv);
}

inline Mat scasimir_matrix(const GradedRep& rep) {
    const QSpec& spec = rep.spec;
    Scalar c = Scalar::s_pow(1, spec) + Scalar::s_pow(-1, spec);
    return c * (rep.E * rep.F) - h_minus_half(rep);
}

inline Mat casimir_matrix(const GradedRep& rep) {
    Mat s = scasimir_matrix(rep);
    return s * s;
}

// c_r: [r/2]_q^2 for odd r, [r/2 + lambda]_q^2 for even r.
inline Scalar casimir_eigenvalue(long r, const QSpec& spec) {
    if (r < 1) throw std::invalid_argument("casimir_eigenvalue: r >= 1");
    Scalar b = bracket_twice(r, (int)(r % 2 == 0), spec);
    return b * b;
}

// Exact check of the defining relations, centrality of the Casimir, and the
// enlarged-center relations at roots of unity.
inline CheckReport verify_algebra(const GradedRep& rep) {
    CheckReport rpt;
    const QSpec& spec = rep.spec;
    Scalar q = Scalar::q_pow(1, spec), qi = Scalar::q_pow(-1, spec);
    long n = rep.dim();
    auto expect_zero = [&](const Mat& m, const std::string& what) {
        if (rpt.ok)
            for (long i = 0; i < n && rpt.ok; ++i)
                for (long j = 0; j < n; ++j)
                    if (!m(i, j).is_zero()) {
                        rpt.fail(what + " violated at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
                        break;
                    }
    };
    expect_zero(rep.F * rep.K - q * (rep.K * rep.F), "f k = q k f");
    expect_zero(rep.F * rep.Kinv - qi * (rep.Kinv * rep.F), "f k^-1 = q^-1 k^-1 f");
    expect_zero(rep.E * rep.K - qi * (rep.K * rep.E), "e k = q^-1 k e");
    expect_zero(rep.E * rep.Kinv - q * (rep.Kinv * rep.E), "e k^-1 = q k^-1 e");
    Scalar den = (Scalar::s_pow(2, spec) - Scalar::s_pow(-2, spec)).inv();
    expect_zero(anticommutator(rep.E, rep.F) - den * (rep.K - rep.Kinv), "{e,f} = [H]_q");
    expect_zero(rep.K * rep.Kinv - Mat::identity(n, spec), "k k^-1 = 1");
    if (rpt.ok) {
        Mat c = casimir_matrix(rep);
        expect_zero(commutator(c, rep.E), "[c,e] = 0");
        expect_zero(commutator(c, rep.F), "[c,f] = 0");
        expect_zero(commutator(c, rep.K), "[c,k] = 0");
    }
    if (spec.is_root() && rpt.ok) {
        long ncal = spec.ncal();
        expect_zero(rep.E.pow(ncal), "e^N-cal = 0");
        expect_zero(rep.F.pow(ncal), "f^N-cal = 0");
        Mat kn = rep.K.pow(ncal);
        for (long i = 0; i < n && rpt.ok; ++i) {
            for (long j = 0; j < n; ++j)
                if (i != j && !kn(i, j).is_zero()) rpt.fail("k^N-cal not diagonal");
            Scalar d = kn(i, i);
            if (d != Scalar::one(spec) && d != Scalar::integer(-1, spec))
                rpt.fail("k^N-cal entry not +-1 at " + std::to_string(i));
        }
    }
    return rpt;
}

// Graded trace of k.
inline Scalar sdim_q(const GradedRep& rep) {
    Scalar acc = Scalar::zero(rep.spec);
    for (long i = 0; i < rep.dim(); ++i) {
        Scalar kv = rep.K(i, i);
        acc += rep.states[i].parity ? -kv : kv;
    }
    return acc;
}

// Closed-form sdim of V_r (lowest weight parity 0).
inline Scalar sdim_closed(long r, const QSpec& spec) {
    Scalar num = Scalar::s_pow(r, spec);
    if (r % 2 == 0) num = -num;
    num = num + Scalar::s_pow(-r, spec);
    Scalar den = Scalar::s_pow(1, spec) + Scalar::s_pow(-1, spec);
    Scalar out = num / den;
    if (r % 2 == 0) out = Scalar::unit_i(spec) * out;  // trace over hbar + lambda weights
    return out;
}

struct AlphaClassification {
    bool irreducible = true;
    std::vector<long> zero_rungs;     // two_h values with alpha = 0
    std::vector<long> segment_dims;   // ladder segments cut at the zero rungs
};

// Statement-I scan: where alpha vanishes, and the irreducible ladder segments
// those zeros cut out (the substructure realized inside fusion products,
// where e and f break in both directions at every zero rung).
inline AlphaClassification classify_by_alpha(long r, const QSpec& spec) {
    if (!spec.is_root()) throw std::invalid_argument("classify_by_alpha: root mode only");
    AlphaClassification out;
    long four_j = r - 1;
    long seg = 1;
    for (long k = 1; k < r; ++k) {
        long two_h = -(r - 1) + 2 * k;  // weight of the upper state of rung k
        if (alpha_coeff(four_j, two_h, spec).is_zero()) {
            out.irreducible = false;
            out.zero_rungs.push_back(two_h);
            out.segment_dims.push_back(seg);
            seg = 1;
        } else {
            ++seg;
        }
    }
    out.segment_dims.push_back(seg);
    if (out.irreducible) out.segment_dims = {r};
    return out;
}

// Finite-difference realization on the graded polynomial space
// {1, theta, x, x theta, ...}; used as an independent cross-check of
// build_irrep. States ordered by weight, m even <-> x^(m/2).
inline GradedRep poly_rep(long r, const QSpec& spec) {
    if (r < 1) throw std::invalid_argument("poly_rep: r >= 1 required");
    GradedRep rep;
    rep.spec = spec;
    rep.lambda = (int)(r % 2 == 0);
    rep.states.resize(r);
    for (long m = 0; m < r; ++m) rep.states[m] = {-(r - 1) + 2 * m, (int)(m % 2)};
    rep.E = Mat(r, r, spec);
    rep.F = Mat(r, r, spec);
    rep.K = Mat(r, r, spec);
    rep.Kinv = Mat(r, r, spec);
    int lam = rep.lambda;
    // twice(2j) = r - 1 (odd r);  2j = (r-1)/2 - lambda (even r, so that the
    // lowest k-eigenvalue is i q^{-(r-1)/2})
    long t2j = r - 1;
    auto br = [&](long tt, int with_lambda_sign) {
        // [tt/2 + sign*lambda]; for odd reps lambda is absent
        if (!lam || with_lambda_sign == 0) return q_number_twice(tt, spec);
        Scalar b = bracket_twice(tt, 1, spec);
        return with_lambda_sign > 0 ? b : -b;  // [a - lambda] = -[a + lambda]
    };
    for (long m = 0; m < r; ++m) {
        long t = rep.states[m].t;
        Scalar ke = Scalar::s_pow(t, spec);
        if (lam) ke = Scalar::unit_i(spec) * ke;
        rep.K(m, m) = ke;
        rep.Kinv(m, m) = ke.inv();
        long p = m / 2;
        if (m % 2 == 0) {
            // x^p:  f -> [p] x^(p-1) theta,  e -> ([p]([p+1-2j]-[p-2j]) - [2j]) x^p theta
            if (m > 0) rep.F(m - 1, m) = q_number(p, spec);
            if (m + 1 < r) {
                Scalar co = q_number(p, spec) *
                                (br(2 * p + 2 - t2j, +1) - br(2 * p - t2j, +1)) -
                            br(t2j, -1);
                rep.E(m + 1, m) = co;
            }
        } else {
            // x^p theta:  f -> x^p,  e -> ([p+1-2j]-[p-2j]) x^(p+1)
            rep.F(m - 1, m) = Scalar::one(spec);
            if (m + 1 < r)
                rep.E(m + 1, m) = br(2 * p + 2 - t2j, +1) - br(2 * p - t2j, +1);
        }
    }
    rep.name = "poly" + std::to_string(r);
    return rep;
}

// Entry-by-entry match of poly_rep against build_irrep under a diagonal
// change of basis. Works whenever every rung coefficient is invertible
// (generic q, or permissible r at a root).
inline CheckReport poly_action_check(long r, const QSpec& spec) {
    CheckReport rpt;
    GradedRep a = poly_rep(r, spec), b = build_irrep(r, spec);
    if (a.K != b.K) { rpt.fail("k-eigenvalue mismatch"); return rpt; }
    Vec d(r, Scalar::one(spec));
    for (long k = 1; k < r; ++k) {
        const Scalar &ea = a.E(k, k - 1), &eb = b.E(k, k - 1);
        if (eb.is_zero() || ea.is_zero()) {
            if (ea.is_zero() != eb.is_zero()) {
                rpt.fail("raising coefficient zero-pattern differs at rung " + std::to_string(k));
                return rpt;
            }
            // zero rung: scale is not pinned here; keep previous
            d[k] = d[k - 1];
            continue;
        }
        d[k] = d[k - 1] * ea / eb;
    }
    for (long k = 1; k < r; ++k) {
        Scalar fa = a.F(k - 1, k), fb = b.F(k - 1, k) * d[k - 1] / d[k];
        if (fa != fb) {
            rpt.fail("lowering action differs on monomial " + std::to_string(k));
            return rpt;
        }
        Scalar ea = a.E(k, k - 1), eb = b.E(k, k - 1) * d[k] / d[k - 1];
        if (ea != eb) {
            rpt.fail("raising action differs on monomial " + std::to_string(k - 1));
            return rpt;
        }
    }
    return rpt;
}

// q <-> q^-1 field automorphism (s -> 1/s), generic scalars only.
inline Scalar subst_s_inv(const Scalar& x) {
    if (!x.is_generic()) throw std::invalid_argument("subst_s_inv: generic only");
    auto flip = [](const LaurentPoly& p) {
        LaurentPoly out;
        const auto& c = p.coeffs();
        for (long k = 0; k < (long)c.size(); ++k)
            out += LaurentPoly::monomial(c[k], -(p.low() + k));
        return out;
    };
    if (x.is_zero()) return x;
    return Scalar::ratio(flip(x.num()), flip(x.den()));
}

// i -> -i field automorphism (Galois conjugation over Q(s)).
inline Scalar conj_i(const Scalar& x) {
    if (!x.is_generic()) throw std::invalid_argument("conj_i: generic only");
    auto cj = [](const LaurentPoly& p) {
        LaurentPoly out;
        const auto& c = p.coeffs();
        for (long k = 0; k < (long)c.size(); ++k)
            out += LaurentPoly::monomial(c[k].conj(), p.low() + k);
        return out;
    };
    if (x.is_zero()) return x;
    return Scalar::ratio(cj(x.num()), cj(x.den()));
}

}  // namespace ospq
