#pragma once

#include "ospq/modulean.hpp"

#include <cstdlib>
#include <map>

namespace ospq {

// Multiset of summand labels with multiplicities.
struct Decomposition {
    QSpec spec;
    std::map<RepLabel, long> terms;
    std::string provenance;
    // split-form annotations: ancestor label for pieces of a split I^(pR)
    std::vector<std::pair<RepLabel, RepLabel>> split_ancestry;

    void add(const RepLabel& l, long mult = 1) {
        if (mult != 0) terms[l] += mult;
        if (terms.count(l) && terms[l] == 0) terms.erase(l);
    }

    long total_dim() const {
        long d = 0;
        for (auto& [l, m] : terms) d += l.dim * m;
        return d;
    }

    std::string str() const {
        std::string out;
        for (auto& [l, m] : terms) {
            if (!out.empty()) out += " + ";
            if (m != 1) out += std::to_string(m) + "*";
            out += l.str();
        }
        return out.empty() ? "0" : out;
    }
};

// legal dimensions of the indecomposables: R-script = 2 Ncal, multiples p R
struct IndecDims {
    long ncal;   // nilpotency degree of e, f
    long Rdim;   // minimal indecomposable dimension
};

inline IndecDims indec_dims(const QSpec& spec) {
    if (!spec.is_root()) throw std::invalid_argument("indec_dims: root mode only");
    return {spec.ncal(), 2 * spec.ncal()};
}

inline Decomposition fuse_generic(long r1, long r2) {
    if (r1 < 1 || r2 < 1) throw std::invalid_argument("fuse_generic: dims >= 1");
    Decomposition out;
    out.spec = QSpec::generic();
    out.provenance = "generic ladder rule";
    for (long r = std::labs(r1 - r2) + 1; r <= r1 + r2 - 1; r += 2) out.add(RepLabel::V(r));
    return out;
}

// Eq.-(56)-style data: the ladder cut of Vbar_r at a root.
struct BarSplit {
    long p;     // copies of the largest segment
    long rp;    // their dimension
    std::vector<long> segments;
};

inline BarSplit bar_split(long r, const QSpec& spec) {
    auto cls = classify_by_alpha(r, spec);
    long ncal = spec.ncal();
    BarSplit out;
    out.segments = cls.segment_dims;
    out.p = r / ncal;
    out.rp = ncal - r + ncal * out.p;
    return out;
}

// Shared merging walk: process dimensions above r_max downward, splitting the
// zero-sdim ones along their ladder segments and merging the others with an
// available partner V_(pR - r).
inline Decomposition merge_walk(std::map<long, long> dims, const QSpec& spec,
                                const std::string& provenance) {
    IndecDims idim = indec_dims(spec);
    Decomposition out;
    out.spec = spec;
    out.provenance = provenance;
    Scalar mq = -Scalar::q_pow(1, spec), one = Scalar::one(spec);
    while (!dims.empty()) {
        long r = dims.rbegin()->first;
        long count = dims.rbegin()->second;
        if (count <= 0) { dims.erase(r); continue; }
        bool permissible = r <= r_max(spec, r % 2 == 0);
        if (permissible) {
            out.add(RepLabel::V(r), count);
            dims.erase(r);
            continue;
        }
        if ((mq.pow(r) - one).is_zero()) {
            // sdim vanishes: Vbar_r falls apart into its ladder segments
            BarSplit bs = bar_split(r, spec);
            for (long seg : bs.segments) dims[seg] += count;
            dims.erase(r);
            continue;
        }
        // merge with one partner V_(pR - r) per copy; a self-pairing partner
        // cannot occur (p R = 2r forces sdim = 0, handled above)
        long partner = -1, p = 1;
        for (; p * idim.Rdim <= 2 * r + 2 * idim.Rdim; ++p) {
            long cand = p * idim.Rdim - r;
            if (cand < 1) continue;
            if (cand == r) throw std::logic_error("merge_walk: unexpected self-pairing");
            auto it = dims.find(cand);
            if (it != dims.end() && it->second > 0) { partner = cand; break; }
        }
        if (partner < 0)
            throw std::logic_error("merge_walk: no partner available for Vbar_" +
                                   std::to_string(r) + " (" + provenance + ")");
        long mergers = std::min(count, dims[partner]);
        out.add(RepLabel::I(p * idim.Rdim, r), mergers);
        dims[r] -= mergers;
        dims[partner] -= mergers;
        if (dims[r] <= 0) dims.erase(r);
        if (dims.count(partner) && dims[partner] <= 0) dims.erase(partner);
    }
    return out;
}

// permissibility gate of the pair rule
inline bool is_permissible(long r, const QSpec& spec) {
    return r <= r_max(spec, r % 2 == 0);
}

struct NotPermissible : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline Decomposition fuse_root(long r1, long r2, const QSpec& spec) {
    if (!spec.is_root()) throw std::invalid_argument("fuse_root: root mode only");
    if (!is_permissible(r1, spec) || !is_permissible(r2, spec))
        throw NotPermissible("fuse_root: V_" + std::to_string(r1) + " x V_" +
                             std::to_string(r2) + " has a non-permissible factor at " +
                             spec.str());
    std::map<long, long> dims;
    for (long r = std::labs(r1 - r2) + 1; r <= r1 + r2 - 1; r += 2) dims[r] += 1;
    return merge_walk(std::move(dims), spec,
                      "pair rule V" + std::to_string(r1) + " x V" + std::to_string(r2));
}

// Path counting in the trident Bratteli lattice: from spin j the fusion with
// spin j0 reaches |j - j0| .. j + j0 in half-integer steps. Spins as 2j
// integers.
inline long bratteli_multiplicity(long n, long twice_j, long twice_j0 = 1) {
    if (n < 1 || twice_j < 0) return 0;
    std::map<long, long> cur = {{twice_j0, 1L}};
    for (long step = 1; step < n; ++step) {
        std::map<long, long> next;
        for (auto& [tj, m] : cur)
            for (long t = std::labs(tj - twice_j0); t <= tj + twice_j0; ++t) next[t] += m;
        cur = std::move(next);
    }
    auto it = cur.find(twice_j);
    return it == cur.end() ? 0 : it->second;
}

// n-fold power of V_r: the generic multiplicities walked down the
// exceptional-value scheme. Fully supported for r = 3.
inline Decomposition fuse_power(long r, long n, const QSpec& spec) {
    if (n < 1) throw std::invalid_argument("fuse_power: n >= 1");
    if (spec.is_generic() || n == 1) {
        Decomposition out;
        out.spec = spec;
        out.provenance = "generic power multiplicities";
        if (n == 1) { out.add(RepLabel::V(r)); return out; }
        if (r != 3) throw std::invalid_argument("fuse_power: generic closed form for r = 3 only");
        for (long tj = (n % 2 == 0) ? 0 : 1; tj <= n; tj += 1) {
            long m = bratteli_multiplicity(n, tj);
            if (m > 0) out.add(RepLabel::V(2 * tj + 1), m);
        }
        return out;
    }
    if (r != 3) throw std::invalid_argument("fuse_power: r = 3 at roots of unity");
    std::map<long, long> dims;
    for (long tj = 0; tj <= n; ++tj) {
        long m = bratteli_multiplicity(n, tj);
        if (m > 0) dims[2 * tj + 1] += m;
    }
    Decomposition walked =
        merge_walk(std::move(dims), spec, "power scheme (x" + std::to_string(n) + " V3)");
    // report p > 1 labels in split form, remembering the ancestor
    Decomposition out;
    out.spec = spec;
    out.provenance = walked.provenance;
    IndecDims idim = indec_dims(spec);
    for (auto& [l, m] : walked.terms) {
        if (l.kind == RepLabel::Kind::I && l.dim > idim.Rdim) {
            BarSplit bs = bar_split(l.k, spec);
            RepLabel piece = RepLabel::I(idim.Rdim, idim.Rdim - bs.rp, 1);
            out.add(piece, m * bs.p);
            out.split_ancestry.push_back({piece, l});
        } else {
            out.add(l, m);
        }
    }
    return out;
}

// Eq.-(57) splitting: I^(pR){k, pR-k} = p copies of I^(R){R - r_p, r_p}.
inline Decomposition split_indec(long R, long k, const QSpec& spec) {
    IndecDims idim = indec_dims(spec);
    if (R % idim.Rdim != 0 || k <= R - k || R - k < 1)
        throw std::invalid_argument("split_indec: illegal label I(" + std::to_string(R) + "){" +
                                    std::to_string(k) + "," + std::to_string(R - k) + "} at " +
                                    spec.str());
    Decomposition out;
    out.spec = spec;
    long p = R / idim.Rdim;
    if (p == 1) {
        out.add(RepLabel::I(R, k));
        out.provenance = "indecomposable (p = 1)";
        return out;
    }
    BarSplit bs = bar_split(k, spec);
    if (bs.p != p)
        throw std::logic_error("split_indec: segment count disagrees with p");
    RepLabel piece = RepLabel::I(idim.Rdim, idim.Rdim - bs.rp, 1);
    out.add(piece, p);
    out.split_ancestry.push_back({piece, RepLabel::I(R, k)});
    out.provenance = "split of I(" + std::to_string(R) + "){" + std::to_string(k) + "," +
                     std::to_string(R - k) + "}; pieces isomorphic up to a k-eigenvalue shift";
    return out;
}

// I^(R){k,R-k} (x) V_3 and I (x) I through the generic two- resp. four-term
// expansion walked down the merge rule; equals the boxed case rule of the
// paper for the p = 1 shapes.
inline Decomposition fuse_indec_v3(long R, long k, const QSpec& spec) {
    IndecDims idim = indec_dims(spec);
    if (R != idim.Rdim || k <= R - k || R - k < 1)
        throw std::invalid_argument("fuse_indec_v3: need a legal p = 1 label");
    std::map<long, long> dims;
    for (long part : {k, R - k})
        for (long r = std::labs(part - 3) + 1; r <= part + 2; r += 2) dims[r] += 1;
    return merge_walk(std::move(dims), spec,
                      "I(" + std::to_string(R) + "){" + std::to_string(k) + "," +
                          std::to_string(R - k) + "} x V3");
}

inline Decomposition fuse_indec_indec(long R1, long k1, long R2, long k2, const QSpec& spec) {
    IndecDims idim = indec_dims(spec);
    if (R1 != idim.Rdim || R2 != idim.Rdim)
        throw std::invalid_argument("fuse_indec_indec: p = 1 labels only");
    std::map<long, long> dims;
    for (long a : {k1, R1 - k1})
        for (long b : {k2, R2 - k2})
            for (long r = std::labs(a - b) + 1; r <= a + b - 1; r += 2) dims[r] += 1;
    return merge_walk(std::move(dims), spec,
                      "I{" + std::to_string(k1) + "," + std::to_string(R1 - k1) + "} x I{" +
                          std::to_string(k2) + "," + std::to_string(R2 - k2) + "}");
}

// canonical split form for comparisons: expand every I^(pR), p > 1, and drop
// eigenvalue-shift annotations
inline std::map<RepLabel, long> canonical_split_form(const Decomposition& d) {
    std::map<RepLabel, long> out;
    if (d.spec.is_generic()) {
        for (auto& [l, m] : d.terms) {
            RepLabel plain = l;
            plain.shift2 = 0;
            out[plain] += m;
        }
        return out;
    }
    IndecDims idim = indec_dims(d.spec);
    for (auto& [l, m] : d.terms) {
        RepLabel plain = l;
        plain.shift2 = 0;
        if (plain.kind == RepLabel::Kind::I && plain.dim > idim.Rdim) {
            Decomposition s = split_indec(plain.dim, plain.k, d.spec);
            for (auto& [pl, pm] : s.terms) {
                RepLabel key = pl;
                key.shift2 = 0;
                out[key] += pm * m;
            }
        } else {
            out[plain] += m;
        }
    }
    return out;
}

inline std::map<RepLabel, long> canonical_split_form(const std::vector<Summand>& dec,
                                                     const QSpec& spec) {
    Decomposition d;
    d.spec = spec;
    for (const auto& s : dec) d.add(s.label);
    return canonical_split_form(d);
}

// sl_t(2) correspondence: t^(2N) = (-1)^N q^N fixes the order data of
// t = i q^(1/2) and dim I^(R) = 2 N_t.
struct Sl2Correspondence {
    long Nt;
    long two_Nt;
    long Rdim;
    bool dims_match;
    long rmax_osp;
    long rmax_sl;  // N_t: the largest sl_t(2) irrep dimension at the root
};

inline Sl2Correspondence sl2_dim_correspondence(const QSpec& spec) {
    if (!spec.is_root()) throw std::invalid_argument("sl2_dim_correspondence: root mode only");
    // t = i s: compute its multiplicative order inside the cyclotomic field
    Scalar t = Scalar::unit_i(spec) * Scalar::s_pow(1, spec);
    long order = 1;
    Scalar acc = t;
    Scalar one = Scalar::one(spec);
    while (acc != one) {
        acc *= t;
        ++order;
        if (order > 16 * spec.ctx()->M) throw std::logic_error("sl2: order search overflow");
    }
    Sl2Correspondence out;
    // N_t = N'/2 for even N', N' for odd N', where t^(N') = 1
    out.Nt = (order % 2 == 0) ? order / 2 : order;
    out.two_Nt = 2 * out.Nt;
    out.Rdim = indec_dims(spec).Rdim;
    out.dims_match = out.two_Nt == out.Rdim;
    out.rmax_osp = r_max(spec, false);
    out.rmax_sl = out.Nt;
    return out;
}

// Eq.-(50) pair test: sdim_q(Vbar_k) + sdim_q(V_(R-k)) with the relative
// lowest-weight parity factor (-1)^(2(j2-j1)).
inline bool merged_pair_sdim_check(long k, long R, const QSpec& spec) {
    Scalar a = sdim_closed(k, spec);
    Scalar b = sdim_closed(R - k, spec);
    if (((k - (R - k)) / 2) % 2 != 0) b = -b;
    return (a + b).is_zero();
}

}  // namespace ospq
