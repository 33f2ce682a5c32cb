#pragma once

#include "ospq/tensor.hpp"

#include <map>
#include <numeric>

namespace ospq {

// ---------------------------------------------------------------------------
// sparse exact linear solver (rref with full reduction, free variables = 0)
// ---------------------------------------------------------------------------

class SparseSolver {
  public:
    explicit SparseSolver(const QSpec& spec) : spec_(spec) {}

    using Row = std::map<long, Scalar>;  // var -> coeff; key -1 holds the rhs

    // Add equation sum coeff*var = rhs. Returns false when inconsistent.
    bool add(Row row, const Scalar& rhs) {
        if (!rhs.is_zero()) row[-1] = rhs;
        reduce(row);
        auto piv = first_var(row);
        if (piv < 0) return row.find(-1) == row.end();  // 0 = rhs
        Scalar inv = row[piv].inv();
        for (auto& [k, v] : row) v = inv * v;
        for (auto& [p, r] : rows_) {
            auto it = r.find(piv);
            if (it == r.end()) continue;
            Scalar f = it->second;
            axpy(r, row, f);
        }
        rows_[piv] = std::move(row);
        return true;
    }

    // Particular solution vector of the given width.
    Vec solution(long nvars) const {
        Vec x(nvars, Scalar::zero(spec_));
        for (const auto& [piv, row] : rows_) {
            auto it = row.find(-1);
            if (it != row.end()) x[piv] = it->second;
        }
        return x;
    }

    long rank() const { return (long)rows_.size(); }

  private:
    static long first_var(const Row& row) {
        for (const auto& [k, v] : row)
            if (k >= 0) return k;
        return -1;
    }

    void reduce(Row& row) const {
        // repeatedly eliminate the leading variable while a pivot row exists
        while (true) {
            long piv = -1;
            for (const auto& [k, v] : row) {
                if (k < 0) continue;
                if (rows_.count(k)) { piv = k; break; }
                break;  // leading var has no pivot row: reduced
            }
            if (piv < 0) break;
            Scalar f = row[piv];
            axpy(row, rows_.at(piv), f);
        }
    }

    static void axpy(Row& r, const Row& src, const Scalar& f) {
        for (const auto& [k, v] : src) {
            Scalar& dst = r[k];
            dst -= f * v;
            if (dst.is_zero()) r.erase(k);
        }
    }

    QSpec spec_;
    std::map<long, Row> rows_;
};

// ---------------------------------------------------------------------------
// class-graded module view
// ---------------------------------------------------------------------------

// A module with a basis that is pure with respect to the pair
// (k-eigenvalue, parity). Rows are kept in the coordinates of the original
// GradedRep so submodule witnesses survive the recursion.
struct Module {
    QSpec spec;
    Mat E, F;                  // action in the module basis
    std::vector<Scalar> keig;  // K is diagonal here
    std::vector<int> parity;
    std::vector<Vec> amb;      // each basis vector in ambient coordinates

    long dim() const { return (long)keig.size(); }

    bool same_class(long i, long j) const {
        return parity[i] == parity[j] && keig[i] == keig[j];
    }

    // deterministic class partition in order of first appearance
    std::vector<std::vector<long>> classes() const {
        std::vector<std::vector<long>> out;
        for (long i = 0; i < dim(); ++i) {
            bool placed = false;
            for (auto& c : out)
                if (same_class(c.front(), i)) { c.push_back(i); placed = true; break; }
            if (!placed) out.push_back({i});
        }
        return out;
    }
};

inline Module module_of(const GradedRep& rep) {
    Module m;
    m.spec = rep.spec;
    m.E = rep.E;
    m.F = rep.F;
    long n = rep.dim();
    m.keig.resize(n);
    m.parity.resize(n);
    m.amb.resize(n);
    for (long i = 0; i < n; ++i) {
        m.keig[i] = rep.K(i, i);
        m.parity[i] = rep.states[i].parity;
        m.amb[i] = Vec(n, Scalar::zero(rep.spec));
        m.amb[i][i] = Scalar::one(rep.spec);
        for (long j = 0; j < n; ++j)
            if (i != j && !rep.K(i, j).is_zero())
                throw std::invalid_argument("module_of: K must be diagonal");
    }
    return m;
}

// Restrict the module to an invariant subspace given by class-pure rref rows
// (coordinates in m's basis). Throws if the span is not invariant.
inline Module restrict_module(const Module& m, const std::vector<Vec>& rows) {
    SpanBuilder span((long)m.dim(), m.spec);
    for (const auto& r : rows) span.add(r);
    if (span.dim() != (long)rows.size())
        throw std::logic_error("restrict_module: rows not independent");
    Module out;
    out.spec = m.spec;
    long k = span.dim();
    const auto& base = span.rows();
    out.keig.resize(k);
    out.parity.resize(k);
    out.amb.resize(k);
    for (long i = 0; i < k; ++i) {
        long support = -1;
        for (long j = 0; j < m.dim(); ++j)
            if (!base[i][j].is_zero()) {
                if (support >= 0 && !m.same_class(support, j))
                    throw std::logic_error("restrict_module: row mixes classes");
                support = j;
            }
        out.keig[i] = m.keig[support];
        out.parity[i] = m.parity[support];
        Vec av(m.amb[0].size(), Scalar::zero(m.spec));
        for (long j = 0; j < m.dim(); ++j)
            if (!base[i][j].is_zero())
                for (size_t t = 0; t < av.size(); ++t)
                    if (!m.amb[j][t].is_zero()) av[t] += base[i][j] * m.amb[j][t];
        out.amb[i] = std::move(av);
    }
    out.E = Mat(k, k, m.spec);
    out.F = Mat(k, k, m.spec);
    for (long i = 0; i < k; ++i) {
        for (const Mat* op : {&m.E, &m.F}) {
            Vec img = op->apply(base[i]);
            auto co = span.coordinates(img);
            if (!co) throw std::logic_error("restrict_module: subspace not invariant");
            Mat& dst = (op == &m.E) ? out.E : out.F;
            for (long j = 0; j < k; ++j) dst(j, i) = (*co)[j];
        }
    }
    return out;
}

// Split a coordinate vector into its class-pure components (nonzero only).
inline std::vector<Vec> class_components(const Module& m, const Vec& v) {
    auto cls = m.classes();
    std::vector<Vec> out;
    for (const auto& c : cls) {
        Vec part(m.dim(), Scalar::zero(m.spec));
        bool nz = false;
        for (long i : c)
            if (!v[i].is_zero()) { part[i] = v[i]; nz = true; }
        if (nz) out.push_back(std::move(part));
    }
    return out;
}

// Smallest e,f,k-invariant subspace containing v; rref rows, class-pure.
inline std::vector<Vec> cyclic_rows(const Module& m, const Vec& v) {
    SpanBuilder span(m.dim(), m.spec);
    std::vector<Vec> queue = class_components(m, v);
    for (auto& w : queue) span.add(w);
    while (!queue.empty()) {
        Vec w = std::move(queue.back());
        queue.pop_back();
        for (const Mat* op : {&m.E, &m.F}) {
            Vec img = op->apply(w);
            for (auto& part : class_components(m, img))
                if (span.add(part)) queue.push_back(part);
        }
    }
    return span.rows();
}

struct SubmoduleWitness {
    std::vector<Vec> rows;    // module coordinates, rref
    std::string generators;   // provenance note
};

inline SubmoduleWitness cyclic_submodule(const Module& m, const Vec& v,
                                         const std::string& note = "") {
    return {cyclic_rows(m, v), note};
}

// ---------------------------------------------------------------------------
// lowest / highest weight vectors
// ---------------------------------------------------------------------------

// Kernel of op restricted to each class, deterministic class order; vectors
// are returned in module coordinates.
inline std::vector<Vec> weight_kernel(const Module& m, const Mat& op) {
    std::vector<Vec> out;
    for (const auto& c : m.classes()) {
        Mat sub(m.dim(), (long)c.size(), m.spec);
        for (size_t j = 0; j < c.size(); ++j)
            for (long i = 0; i < m.dim(); ++i) sub(i, (long)j) = op(i, c[j]);
        Mat ker = kernel_basis(sub);
        for (long r = 0; r < ker.rows(); ++r) {
            Vec v(m.dim(), Scalar::zero(m.spec));
            for (size_t j = 0; j < c.size(); ++j) v[c[j]] = ker(r, (long)j);
            out.push_back(std::move(v));
        }
    }
    return out;
}

inline std::vector<Vec> lowest_weight_vectors(const Module& m) { return weight_kernel(m, m.F); }
inline std::vector<Vec> highest_weight_vectors(const Module& m) { return weight_kernel(m, m.E); }

inline std::vector<Vec> lowest_weight_vectors(const GradedRep& rep) {
    return lowest_weight_vectors(module_of(rep));
}
inline std::vector<Vec> highest_weight_vectors(const GradedRep& rep) {
    return highest_weight_vectors(module_of(rep));
}

// ---------------------------------------------------------------------------
// equivariant idempotent / direct summand test
// ---------------------------------------------------------------------------

struct Retraction {
    bool exists = false;
    // Y maps module coordinates of the parent onto W-coordinates; P = embed*Y
    // is the equivariant idempotent with image W.
    Mat Y;           // k_W x k_P
    Mat idempotent;  // k_P x k_P
    std::vector<Vec> complement;  // rref rows spanning ker Y (parent coords)
};

// Solve for a module retraction Y: P -> W with Y|W = id. W is given by
// class-pure rref rows in P-coordinates. The solution space is cut down by
// k-class matching: Y can only connect basis vectors of equal class.
inline Retraction equivariant_retraction(const Module& P, const std::vector<Vec>& wrows) {
    Retraction out;
    if (wrows.empty()) throw std::invalid_argument("equivariant_retraction: empty subspace");
    Module W = restrict_module(P, wrows);
    long n = P.dim(), k = W.dim();
    // variables y(v,w) for class-compatible pairs
    std::vector<std::vector<std::pair<long, long>>> vars_of_v(n);  // (w, var id)
    long nvars = 0;
    for (long v = 0; v < n; ++v)
        for (long w = 0; w < k; ++w)
            if (P.parity[v] == W.parity[w] && P.keig[v] == W.keig[w])
                vars_of_v[v].push_back({w, nvars++});
    auto var_id = [&](long v, long w) -> long {
        for (auto& [ww, id] : vars_of_v[v])
            if (ww == w) return id;
        return -1;
    };

    SparseSolver solver(P.spec);
    // intertwining with E and F
    for (int which = 0; which < 2; ++which) {
        const Mat& Gp = which ? P.F : P.E;
        const Mat& Gw = which ? W.F : W.E;
        for (long v = 0; v < n; ++v) {
            for (long wp = 0; wp < k; ++wp) {
                SparseSolver::Row row;
                // sum_u Gp(u,v) y(u,wp) - sum_w Gw(wp,w) y(v,w) = 0
                for (long u = 0; u < n; ++u) {
                    if (Gp(u, v).is_zero()) continue;
                    long id = var_id(u, wp);
                    if (id >= 0) {
                        Scalar& c = row[id];
                        c += Gp(u, v);
                        if (c.is_zero()) row.erase(id);
                    }
                }
                for (auto& [w, id] : vars_of_v[v]) {
                    if (Gw(wp, w).is_zero()) continue;
                    Scalar& c = row[id];
                    c -= Gw(wp, w);
                    if (c.is_zero()) row.erase(id);
                }
                if (!row.empty() && !solver.add(std::move(row), Scalar::zero(P.spec)))
                    return out;
            }
        }
    }
    // anchoring: Y(w_j) = e_j
    for (long j = 0; j < k; ++j) {
        for (long wp = 0; wp < k; ++wp) {
            SparseSolver::Row row;
            for (long v = 0; v < n; ++v) {
                if (wrows[j][v].is_zero()) continue;
                long id = var_id(v, wp);
                if (id >= 0) {
                    Scalar& c = row[id];
                    c += wrows[j][v];
                    if (c.is_zero()) row.erase(id);
                }
            }
            Scalar rhs = (wp == j) ? Scalar::one(P.spec) : Scalar::zero(P.spec);
            if (row.empty()) {
                if (!rhs.is_zero()) return out;
                continue;
            }
            if (!solver.add(std::move(row), rhs)) return out;
        }
    }

    Vec sol = solver.solution(nvars);
    out.Y = Mat(k, n, P.spec);
    for (long v = 0; v < n; ++v)
        for (auto& [w, id] : vars_of_v[v]) out.Y(w, v) = sol[id];
    Mat embed(n, k, P.spec);
    for (long j = 0; j < k; ++j)
        for (long v = 0; v < n; ++v) embed(v, j) = wrows[j][v];
    out.idempotent = embed * out.Y;
    // certificate checks: projector, equivariance, image
    const Mat& Pr = out.idempotent;
    if (Pr * Pr != Pr) return out;
    if (!commutator(Pr, P.E).is_zero() || !commutator(Pr, P.F).is_zero()) return out;
    for (long j = 0; j < k; ++j) {
        Vec img = Pr.apply(wrows[j]);
        if (img != wrows[j]) return out;
    }
    Mat kerY = kernel_basis(out.Y);
    if (kerY.rows() + k != n) return out;
    out.complement.reserve(kerY.rows());
    for (long r = 0; r < kerY.rows(); ++r) out.complement.push_back(kerY.row(r));
    out.exists = true;
    return out;
}

// ---------------------------------------------------------------------------
// Casimir data
// ---------------------------------------------------------------------------

inline Mat module_scasimir(const Module& m) {
    const QSpec& spec = m.spec;
    long n = m.dim();
    Scalar c = Scalar::s_pow(1, spec) + Scalar::s_pow(-1, spec);
    Mat s = c * (m.E * m.F);
    Scalar den = (Scalar::s_pow(2, spec) - Scalar::s_pow(-2, spec)).inv();
    for (long i = 0; i < n; ++i)
        s(i, i) -= den * (Scalar::s_pow(-1, spec) * m.keig[i] -
                          Scalar::s_pow(1, spec) * m.keig[i].inv());
    return s;
}

inline Mat module_casimir(const Module& m) {
    Mat s = module_scasimir(m);
    return s * s;
}

// candidate Casimir eigenvalues c_r for summands of a module whose weights
// carry the given lambda flag; deduplicated, smallest r as representative
inline std::vector<std::pair<long, Scalar>> casimir_candidates(long dim, int lambda,
                                                               const QSpec& spec) {
    std::vector<std::pair<long, Scalar>> out;
    for (long r = lambda ? 2 : 1; r <= dim; r += 2) {
        Scalar c = casimir_eigenvalue(r, spec);
        bool seen = false;
        for (auto& [r0, c0] : out)
            if (c0 == c) { seen = true; break; }
        if (!seen) out.push_back({r, c});
    }
    return out;
}

struct JordanBlockData {
    long rep_dim;          // representative r of the eigenvalue c_r
    Scalar eigenvalue;
    long space_dim;        // generalized eigenspace dimension
    long nilpotency;       // smallest m with (C - c)^m = 0 on the space
    std::vector<long> block_sizes;  // Jordan block sizes, descending
};

namespace detail {

// Kernel rows of (C - c)^m, raising m until the kernel stabilizes. Powers of
// the shifted matrix are only formed when the first kernel is incomplete, so
// the generic (rational function) path stays cheap.
struct GeneralizedKernel {
    std::vector<Vec> rows;
    std::vector<long> kernel_dims;  // dim ker (C-c)^m for m = 1..nilpotency
};

inline GeneralizedKernel generalized_kernel(const Module& m, const Mat& C, const Scalar& c,
                                            long expected = -1) {
    long n = m.dim();
    Mat A = C;
    for (long i = 0; i < n; ++i) A(i, i) -= c;
    GeneralizedKernel out;
    Mat power = A;
    while (true) {
        std::vector<Vec> rows = weight_kernel(m, power);
        long kd = (long)rows.size();
        if (!out.kernel_dims.empty() && kd == out.kernel_dims.back()) break;
        out.kernel_dims.push_back(kd);
        out.rows = std::move(rows);
        if (kd == n || kd == expected) break;
        power = power * A;
    }
    return out;
}

}  // namespace detail

// Exact generalized eigenspace dimensions and Jordan structure of the Casimir
// operator over the candidate eigenvalue list.
inline std::vector<JordanBlockData> casimir_structure(const Module& m, int lambda) {
    Mat C = module_casimir(m);
    long n = m.dim();
    std::vector<JordanBlockData> out;
    // first pass: plain kernels; if they already fill the space the operator
    // is diagonalizable and no powers are needed
    auto candidates = casimir_candidates(n, lambda, m.spec);
    std::vector<long> first_dims(candidates.size(), 0);
    long total1 = 0;
    for (size_t i = 0; i < candidates.size(); ++i) {
        Mat A = C;
        for (long k = 0; k < n; ++k) A(k, k) -= candidates[i].second;
        first_dims[i] = (long)weight_kernel(m, A).size();
        total1 += first_dims[i];
    }
    long total = 0;
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (first_dims[i] == 0) continue;
        std::vector<long> kdims;
        if (total1 == n) kdims = {first_dims[i]};
        else kdims = detail::generalized_kernel(m, C, candidates[i].second).kernel_dims;
        JordanBlockData data;
        data.rep_dim = candidates[i].first;
        data.eigenvalue = candidates[i].second;
        data.space_dim = kdims.back();
        data.nilpotency = (long)kdims.size();
        // #blocks of size >= m is kdims[m-1] - kdims[m-2]
        std::vector<long> atleast;
        for (size_t k = 0; k < kdims.size(); ++k)
            atleast.push_back(kdims[k] - (k ? kdims[k - 1] : 0));
        for (size_t k = 0; k < atleast.size(); ++k) {
            long count = atleast[k] - (k + 1 < atleast.size() ? atleast[k + 1] : 0);
            for (long b = 0; b < count; ++b) data.block_sizes.push_back((long)k + 1);
        }
        std::sort(data.block_sizes.rbegin(), data.block_sizes.rend());
        total += data.space_dim;
        out.push_back(std::move(data));
    }
    if (total != n)
        throw std::logic_error("casimir_structure: eigenvalues outside the candidate list");
    return out;
}

inline std::vector<JordanBlockData> casimir_structure(const GradedRep& rep) {
    return casimir_structure(module_of(rep), rep.lambda % 2);
}

// Generalized eigenspace rows per candidate, class-pure.
inline std::vector<std::pair<Scalar, std::vector<Vec>>> casimir_split(const Module& m,
                                                                      int lambda) {
    Mat C = module_casimir(m);
    long n = m.dim();
    auto candidates = casimir_candidates(n, lambda, m.spec);
    std::vector<std::pair<Scalar, std::vector<Vec>>> out;
    long total = 0;
    // plain kernels first; escalate to powers only for the shortfall
    std::vector<std::vector<Vec>> first(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        Mat A = C;
        for (long k = 0; k < n; ++k) A(k, k) -= candidates[i].second;
        first[i] = weight_kernel(m, A);
        total += (long)first[i].size();
    }
    if (total == n) {
        for (size_t i = 0; i < candidates.size(); ++i)
            if (!first[i].empty()) out.push_back({candidates[i].second, std::move(first[i])});
        return out;
    }
    total = 0;
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (first[i].empty()) continue;
        auto gk = detail::generalized_kernel(m, C, candidates[i].second);
        total += (long)gk.rows.size();
        out.push_back({candidates[i].second, std::move(gk.rows)});
    }
    if (total != n) throw std::logic_error("casimir_split: incomplete split");
    return out;
}

// ---------------------------------------------------------------------------
// full decomposition into indecomposable summands (the oracle)
// ---------------------------------------------------------------------------

struct Summand {
    Module piece;             // basis rows in ambient coordinates via piece.amb
    Scalar casimir_value;
    long nilpotency = 1;
    RepLabel label;
};

// Restrict a commuting operator to an invariant subspace spanned by rref rows.
inline Mat restrict_matrix(const Module& m, const std::vector<Vec>& rows, const Mat& T) {
    SpanBuilder span(m.dim(), m.spec);
    for (const auto& r : rows) span.add(r);
    long k = (long)rows.size();
    Mat out(k, k, m.spec);
    const auto& base = span.rows();
    for (long i = 0; i < k; ++i) {
        Vec img = T.apply(base[i]);
        auto co = span.coordinates(img);
        if (!co) throw std::logic_error("restrict_matrix: subspace not invariant");
        for (long j = 0; j < k; ++j) out(j, i) = (*co)[j];
    }
    return out;
}

// The parity-twisted Scasimir sigma * S: an exact module endomorphism whose
// square is the Casimir; its partial (tensor-prefix) versions separate
// summands that a fully degenerate Casimir cannot.
inline Mat sigma_scasimir(const GradedRep& rep) {
    Mat s = scasimir_matrix(rep);
    for (long i = 0; i < rep.dim(); ++i)
        if (rep.states[i].parity & 1)
            for (long j = 0; j < rep.dim(); ++j)
                if (!s(i, j).is_zero()) s(i, j) = -s(i, j);
    return s;
}

// A tensor product together with the commuting endomorphisms collected from
// the partial products along the chain.
struct ProductBuild {
    GradedRep rep;
    std::vector<Mat> comm_endos;
};

inline ProductBuild chain_start(const GradedRep& a) { return {a, {}}; }

inline ProductBuild chain_extend(const ProductBuild& acc, const GradedRep& b) {
    ProductBuild out;
    out.rep = tensor(acc.rep, b);
    Mat one_b = Mat::identity(b.dim(), b.spec);
    for (const Mat& t : acc.comm_endos)
        out.comm_endos.push_back(graded_kron(t, one_b, acc.rep.states, b.states));
    if (acc.rep.dim() > 1)
        out.comm_endos.push_back(
            graded_kron(sigma_scasimir(acc.rep), one_b, acc.rep.states, b.states));
    for (const Mat& t : out.comm_endos)
        if (!commutator(t, out.rep.E).is_zero() || !commutator(t, out.rep.F).is_zero() ||
            !commutator(t, out.rep.K).is_zero())
            throw std::logic_error("chain_extend: partial Scasimir fails to commute");
    return out;
}

inline ProductBuild tensor_power_chain(const GradedRep& a, long n, long dim_guard = 2000) {
    ProductBuild acc = chain_start(a);
    for (long k = 1; k < n; ++k) {
        if (acc.rep.dim() * a.dim() > dim_guard)
            throw std::invalid_argument("tensor_power_chain: size guard exceeded");
        acc = chain_extend(acc, a);
    }
    return acc;
}

namespace detail {

inline bool peel_block(const Module& B, const Scalar& cval, const std::vector<Mat>& endos,
                       std::vector<Module>& pieces);

inline void recurse_pair(const Module& B, const Scalar& cval, const std::vector<Mat>& endos,
                         const std::vector<Vec>& wrows, const std::vector<Vec>& urows,
                         std::vector<Module>& pieces) {
    // A summand need not be invariant under the other commuting operators;
    // the compression P T P along the complementary pair is again a module
    // endomorphism, so push that down instead.
    SpanBuilder joint(B.dim(), B.spec);
    std::vector<int> owner;  // 0 = W, 1 = U, in joint insertion order
    std::vector<const std::vector<Vec>*> parts = {&wrows, &urows};
    std::vector<std::vector<long>> posn(2);
    {
        // joint.add keeps rows sorted by pivot; track membership by pivot
        std::map<long, int> pivot_owner;
        for (int p = 0; p < 2; ++p)
            for (const Vec& r : *parts[p]) {
                if (!joint.add(r))
                    throw std::logic_error("recurse_pair: dependent summand rows");
                for (long pv : joint.pivots())
                    if (!pivot_owner.count(pv)) { pivot_owner[pv] = p; break; }
            }
        owner.resize(joint.dim());
        for (size_t i = 0; i < joint.pivots().size(); ++i)
            owner[i] = pivot_owner.at(joint.pivots()[i]);
    }
    if (joint.dim() != B.dim())
        throw std::logic_error("recurse_pair: summand pair does not fill the block");
    for (int p = 0; p < 2; ++p) {
        const std::vector<Vec>& rows = *parts[p];
        if (rows.empty()) continue;
        Module piece = restrict_module(B, rows);
        // compress each endo: express T(row_i) in the joint basis and keep
        // the coordinates that fall inside this part
        std::vector<long> mine;
        for (long j = 0; j < joint.dim(); ++j)
            if (owner[j] == p) mine.push_back(j);
        SpanBuilder own(B.dim(), B.spec);
        for (const Vec& r : rows) own.add(r);
        std::vector<Mat> sub;
        for (const Mat& t : endos) {
            Mat tc((long)rows.size(), (long)rows.size(), B.spec);
            bool ok = true;
            for (size_t i = 0; i < rows.size() && ok; ++i) {
                Vec img = t.apply(own.rows()[i]);
                auto co = joint.coordinates(img);
                if (!co) { ok = false; break; }
                // map joint coordinates of this part onto own coordinates:
                // both bases are rref rows of the same span, match by pivot
                Vec proj(B.dim(), Scalar::zero(B.spec));
                for (size_t j = 0; j < mine.size(); ++j) {
                    const Vec& jr = joint.rows()[mine[j]];
                    const Scalar& cj = (*co)[mine[j]];
                    if (cj.is_zero()) continue;
                    for (long k = 0; k < B.dim(); ++k)
                        if (!jr[k].is_zero()) proj[k] += cj * jr[k];
                }
                auto oc = own.coordinates(proj);
                if (!oc) { ok = false; break; }
                for (size_t j = 0; j < rows.size(); ++j) tc((long)j, (long)i) = (*oc)[j];
            }
            if (ok) sub.push_back(std::move(tc));
        }
        if (!peel_block(piece, cval, sub, pieces)) pieces.push_back(std::move(piece));
    }
}

// Fitting split along an endomorphism: B = ker(T - lambda)^m (+) im(T - lambda)^m
// once the powers stabilize. Returns true when a proper split was found.
inline bool fitting_split(const Module& B, const Scalar& cval, const std::vector<Mat>& endos,
                          const Mat& T, std::vector<Module>& pieces) {
    long n = B.dim();
    // eigenvalue candidates: diagonal entries on singleton classes first,
    // then all diagonal entries (exact duplicates skipped)
    std::vector<Scalar> lambdas;
    auto push_unique = [&](const Scalar& v) {
        for (const Scalar& x : lambdas)
            if (x == v) return;
        lambdas.push_back(v);
    };
    for (long i = 0; i < n; ++i) push_unique(T(i, i));
    for (const Scalar& lam : lambdas) {
        Mat A = T;
        for (long i = 0; i < n; ++i) A(i, i) -= lam;
        // stabilize the power
        Mat power = A;
        long prev = -1;
        while (true) {
            long kd = (long)weight_kernel(B, power).size();
            if (kd == prev) break;
            prev = kd;
            if (kd == n) break;
            power = power * A;
        }
        if (prev <= 0 || prev >= n) continue;
        std::vector<Vec> wrows = weight_kernel(B, power);
        // image rows: class-pure columns of the stabilized power
        SpanBuilder im(n, B.spec);
        for (long j = 0; j < n; ++j) {
            Vec col(n, Scalar::zero(B.spec));
            for (long i = 0; i < n; ++i) col[i] = power(i, j);
            for (auto& part : class_components(B, col)) im.add(part);
        }
        if ((long)wrows.size() + im.dim() != n) continue;  // not a clean Fitting pair
        recurse_pair(B, cval, endos, wrows, im.rows(), pieces);
        return true;
    }
    return false;
}

// Last resort for small multiplicity blocks: solve for the full module
// endomorphism algebra and split through any non-nilpotent non-invertible
// element (or a diagonal shift of one).
inline bool endomorphism_fitting(const Module& B, const Scalar& cval,
                                 const std::vector<Mat>& endos, std::vector<Module>& pieces,
                                 long dim_cap = 40) {
    long n = B.dim();
    if (n > dim_cap) return false;
    // variables Y(a,b) over equal-class pairs
    std::vector<std::vector<std::pair<long, long>>> vars(n);
    long nvars = 0;
    for (long a = 0; a < n; ++a)
        for (long b = 0; b < n; ++b)
            if (B.same_class(a, b)) vars[a].push_back({b, nvars++});
    auto vid = [&](long a, long b) -> long {
        for (auto& [bb, id] : vars[a])
            if (bb == b) return id;
        return -1;
    };
    Mat A(2 * n * n, nvars, B.spec);
    long erow = 0;
    for (const Mat* G : {&B.E, &B.F})
        for (long wp = 0; wp < n; ++wp)
            for (long v = 0; v < n; ++v, ++erow)
                for (long u = 0; u < n; ++u) {
                    // (Y G - G Y)(wp, v) = sum_u y(wp,u) G(u,v) - G(wp,u) y(u,v)
                    if (!(*G)(u, v).is_zero()) {
                        long id = vid(wp, u);
                        if (id >= 0) A(erow, id) += (*G)(u, v);
                    }
                    if (!(*G)(wp, u).is_zero()) {
                        long id = vid(u, v);
                        if (id >= 0) A(erow, id) -= (*G)(wp, u);
                    }
                }
    Mat ker = kernel_basis(A);
    std::vector<Mat> basis;
    for (long r = 0; r < ker.rows(); ++r) {
        Mat Y(n, n, B.spec);
        for (long a = 0; a < n; ++a)
            for (auto& [b, id] : vars[a]) Y(a, b) = ker(r, id);
        basis.push_back(std::move(Y));
    }
    if (basis.size() <= 1) return false;  // scalars only: indecomposable
    std::vector<Mat> cands = basis;
    for (size_t i = 0; i < basis.size() && cands.size() < 160; ++i)
        for (size_t j = i + 1; j < basis.size() && cands.size() < 160; ++j) {
            cands.push_back(basis[i] * basis[j]);
            cands.push_back(basis[i] + basis[j]);
        }
    for (const Mat& Y : cands)
        if (fitting_split(B, cval, endos, Y, pieces)) return true;
    return false;
}

// Peel one direct summand off B, recursing on both halves. Order of attack:
// lowest-weight cyclic submodules with an equivariant retraction, Fitting
// splits along the supplied commuting endomorphisms, quotient-layer seeds
// (generators of I-pieces are not lowest weight vectors), and finally the
// full endomorphism algebra on small blocks.
inline bool peel_block(const Module& B, const Scalar& cval, const std::vector<Mat>& endos,
                       std::vector<Module>& pieces) {
    if (B.dim() == 0) return true;
    std::vector<Vec> seeds = lowest_weight_vectors(B);
    for (const Vec& v : seeds) {
        std::vector<Vec> w = cyclic_rows(B, v);
        if ((long)w.size() == B.dim()) continue;
        Retraction ret = equivariant_retraction(B, w);
        if (ret.exists) {
            recurse_pair(B, cval, endos, w, ret.complement, pieces);
            return true;
        }
    }
    for (const Mat& t : endos)
        if (fitting_split(B, cval, endos, t, pieces)) return true;
    // quotient layers over the lowest-weight closure
    SpanBuilder lspan(B.dim(), B.spec);
    for (const Vec& v : seeds)
        for (const Vec& row : cyclic_rows(B, v)) lspan.add(row);
    while (lspan.dim() < B.dim()) {
        std::vector<bool> is_pivot(B.dim(), false);
        for (long p : lspan.pivots()) is_pivot[p] = true;
        std::vector<long> qcoord;
        for (long j = 0; j < B.dim(); ++j)
            if (!is_pivot[j]) qcoord.push_back(j);
        long qd = (long)qcoord.size();
        Module Q;
        Q.spec = B.spec;
        Q.keig.resize(qd);
        Q.parity.resize(qd);
        Q.amb.resize(qd);
        Q.E = Mat(qd, qd, B.spec);
        Q.F = Mat(qd, qd, B.spec);
        for (long a = 0; a < qd; ++a) {
            Q.keig[a] = B.keig[qcoord[a]];
            Q.parity[a] = B.parity[qcoord[a]];
            Q.amb[a] = Vec(1, Scalar::zero(B.spec));  // quotient has no ambient meaning
            for (const Mat* op : {&B.E, &B.F}) {
                Vec img(B.dim(), Scalar::zero(B.spec));
                for (long i = 0; i < B.dim(); ++i) img[i] = (*op)(i, qcoord[a]);
                img = lspan.reduce(img);
                Mat& dst = (op == &B.E) ? Q.E : Q.F;
                for (long b = 0; b < qd; ++b) dst(b, a) = img[qcoord[b]];
            }
        }
        bool progressed = false;
        for (const Vec& qv : lowest_weight_vectors(Q)) {
            // canonical lift: residue representative reduced against L, which
            // may have grown during this loop (then the seed is spent)
            Vec lift(B.dim(), Scalar::zero(B.spec));
            for (long a = 0; a < qd; ++a) lift[qcoord[a]] = qv[a];
            lift = lspan.reduce(lift);
            if (vec_is_zero(lift)) continue;
            std::vector<Vec> w = cyclic_rows(B, lift);
            if ((long)w.size() < B.dim()) {
                Retraction ret = equivariant_retraction(B, w);
                if (ret.exists) {
                    recurse_pair(B, cval, endos, w, ret.complement, pieces);
                    return true;
                }
            }
            for (const Vec& row : w)
                if (lspan.add(row)) progressed = true;
        }
        if (!progressed) break;
    }
    return endomorphism_fitting(B, cval, endos, pieces);
}

}  // namespace detail

namespace detail {

// standard k-eigenvalue ladder i^(r even) s^t, t = -(r-1)..(r-1) step 2
inline std::vector<Scalar> model_eigs_V(long r, const QSpec& spec) {
    std::vector<Scalar> out;
    Scalar iu = Scalar::unit_i(spec);
    for (long t = -(r - 1); t <= r - 1; t += 2) {
        Scalar e = Scalar::s_pow(t, spec);
        if (r % 2 == 0) e = iu * e;
        out.push_back(e);
    }
    return out;
}

inline std::vector<Scalar> model_eigs_I(long R, long k, const QSpec& spec) {
    std::vector<Scalar> out = model_eigs_V(k, spec);
    for (const Scalar& e : model_eigs_V(R - k, spec)) out.push_back(e);
    return out;
}

// multiset equality have == rho * model for some scalar rho; centered means
// rho = +-1, the sign being the e -> -e, k -> 1/k automorphism branch
inline bool match_up_to_shift(const std::vector<Scalar>& have, const std::vector<Scalar>& model,
                              const QSpec& spec, bool& centered) {
    if (have.size() != model.size()) return false;
    std::vector<Scalar> candidates = {Scalar::one(spec), Scalar::integer(-1, spec)};
    for (const Scalar& h : have) candidates.push_back(h / model[0]);
    for (size_t ci = 0; ci < candidates.size(); ++ci) {
        const Scalar& rho = candidates[ci];
        std::vector<Scalar> pool = have;
        bool ok = true;
        for (const Scalar& m : model) {
            Scalar want = rho * m;
            bool found = false;
            for (auto it = pool.begin(); it != pool.end(); ++it)
                if (*it == want) { pool.erase(it); found = true; break; }
            if (!found) { ok = false; break; }
        }
        if (ok) { centered = ci < 2; return true; }
    }
    return false;
}

}  // namespace detail

// Determine the RepLabel of an indecomposable piece from its exact shape:
// dimension, lowest/highest weight counts, Casimir Jordan data, and the
// k-eigenvalue multiset up to an overall shift.
inline RepLabel classify_summand(const Module& piece, const Scalar& cval) {
    long d = piece.dim();
    const QSpec& spec = piece.spec;
    long lw = (long)lowest_weight_vectors(piece).size();
    long hw = (long)highest_weight_vectors(piece).size();
    Mat N = module_casimir(piece);
    for (long i = 0; i < d; ++i) N(i, i) -= cval;
    long nrank = rank(N);

    if (nrank == 0) {
        bool centered = true;
        if (detail::match_up_to_shift(piece.keig, detail::model_eigs_V(d, spec), spec, centered)) {
            RepLabel l = (lw == 1 && hw == 1) ? RepLabel::V(d) : RepLabel::VBar(d);
            if (!centered) l.shift2 = 1;
            return l;
        }
    } else {
        // I^(R){k,R-k}: the nilpotent part of the Casimir couples exactly the
        // R-k doubled weights, so k = R - rank(C - c)
        long k = d - nrank;
        if (k > d - k && d - k >= 1 && lw >= 2 && hw >= 2) {
            bool centered = true;
            if (detail::match_up_to_shift(piece.keig, detail::model_eigs_I(d, k, spec), spec,
                                          centered)) {
                RepLabel l = RepLabel::I(d, k);
                if (!centered) l.shift2 = 1;
                return l;
            }
        }
    }
    throw std::logic_error("classify_summand: unrecognized shape (dim " + std::to_string(d) +
                           ", lw " + std::to_string(lw) + ", hw " + std::to_string(hw) +
                           ", nilrank " + std::to_string(nrank) + ")");
}

// Fully split a representation into indecomposable direct summands, with the
// Casimir generalized eigenspaces as the first cut. Extra commuting
// endomorphisms (partial Scasimirs from a ProductBuild chain) sharpen the
// splitting of multiplicity blocks.
inline std::vector<Summand> decompose_module(const GradedRep& rep,
                                             const std::vector<Mat>& comm_endos,
                                             long dim_guard = 2000) {
    if (rep.dim() > dim_guard) throw std::invalid_argument("decompose_module: size guard");
    Module top = module_of(rep);
    std::vector<Summand> out;
    for (auto& [cval, rows] : casimir_split(top, rep.lambda % 2)) {
        Module block = restrict_module(top, rows);
        std::vector<Mat> endos;
        endos.reserve(comm_endos.size());
        for (const Mat& t : comm_endos) endos.push_back(restrict_matrix(top, rows, t));
        std::vector<Module> pieces;
        if (!detail::peel_block(block, cval, endos, pieces)) pieces.push_back(block);
        for (Module& piece : pieces) {
            Summand s;
            // nilpotency on the piece
            Mat C = module_casimir(piece);
            for (long i = 0; i < piece.dim(); ++i) C(i, i) -= cval;
            long nil = 1;
            Mat power = C;
            while (rank(power) > 0 && nil <= piece.dim()) { power = power * C; ++nil; }
            s.nilpotency = nil;
            s.casimir_value = cval;
            s.label = classify_summand(piece, cval);
            s.piece = std::move(piece);
            out.push_back(std::move(s));
        }
    }
    std::sort(out.begin(), out.end(), [](const Summand& a, const Summand& b) {
        return a.label < b.label;
    });
    return out;
}

inline std::vector<Summand> decompose_module(const GradedRep& rep, long dim_guard = 2000) {
    return decompose_module(rep, {}, dim_guard);
}

inline std::vector<Summand> decompose_module(const ProductBuild& pb, long dim_guard = 2000) {
    return decompose_module(pb.rep, pb.comm_endos, dim_guard);
}

inline std::vector<RepLabel> decomposition_labels(const std::vector<Summand>& dec) {
    std::vector<RepLabel> out;
    out.reserve(dec.size());
    for (const auto& s : dec) out.push_back(s.label);
    return out;
}

// Equivariant idempotents onto each summand along the others: P_i = U^-1 D_i U
// with U the stacked summand bases. They sum to the identity and are pairwise
// orthogonal by construction; equivariance is checked by the caller's tests.
inline std::vector<Mat> summand_idempotents(const GradedRep& rep,
                                            const std::vector<Summand>& summands) {
    long n = rep.dim();
    const QSpec& spec = rep.spec;
    Mat U(n, n, spec);
    std::vector<std::pair<long, long>> ranges;
    long row = 0;
    for (const auto& s : summands) {
        long start = row;
        for (long i = 0; i < s.piece.dim(); ++i, ++row) U.set_row(row, s.piece.amb[i]);
        ranges.push_back({start, row});
    }
    if (row != n) throw std::logic_error("summand_idempotents: bases do not fill the space");
    // invert U by rref on [U | I]
    Mat aug(n, 2 * n, spec);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) aug(i, j) = U(i, j);
        aug(i, n + i) = Scalar::one(spec);
    }
    auto piv = rref(aug);
    if ((long)piv.size() != n || piv[n - 1] != n - 1)
        throw std::logic_error("summand_idempotents: singular basis matrix");
    Mat Uinv(n, n, spec);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) Uinv(i, j) = aug(i, n + j);
    // P_i act on column vectors expressed in ambient coordinates: coordinates
    // w.r.t. U rows are x = (U^T)^-1 v, select range, map back
    std::vector<Mat> out;
    Mat Ut = U.transpose(), Uinvt = Uinv.transpose();
    for (auto& [a, b] : ranges) {
        Mat D(n, n, spec);
        for (long i = a; i < b; ++i) D(i, i) = Scalar::one(spec);
        out.push_back(Ut * D * Uinvt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// spectral projectors of the Casimir on a product of two irreps
// ---------------------------------------------------------------------------

struct ProjectorEntry {
    long r;                      // summand dimension label
    Scalar c_generic;            // generic eigenvalue
    std::optional<Mat> matrix;   // specialized projector when it survives
    int pole_order = 0;          // > 0 when the projector blows up
};

struct ProjectorReport {
    std::vector<ProjectorEntry> entries;
    // minimal polynomial factors of C at the evaluation point (pairs of the
    // representative dimension and multiplicity)
    std::vector<std::pair<long, long>> minimal_poly;
    std::vector<std::pair<long, Mat>> reduced_projectors;  // over distinct values
};

inline ProjectorReport projectors(long r1, long r2, const QSpec& eval_spec) {
    QSpec gen = QSpec::generic();
    GradedRep prod = tensor(build_irrep(r1, gen), build_irrep(r2, gen));
    Module m = module_of(prod);
    Mat C = module_casimir(m);
    long n = m.dim();
    std::vector<long> dims;
    for (long r = std::abs(r1 - r2) + 1; r <= r1 + r2 - 1; r += 2) dims.push_back(r);

    ProjectorReport out;
    std::vector<Mat> generic_projectors;
    for (long r : dims) {
        Mat P = Mat::identity(n, gen);
        Scalar cr = casimir_eigenvalue(r, gen);
        for (long p : dims) {
            if (p == r) continue;
            Scalar cp = casimir_eigenvalue(p, gen);
            Mat term = C;
            for (long i = 0; i < n; ++i) term(i, i) -= cp;
            P = P * term;
            P = (cr - cp).inv() * P;
        }
        generic_projectors.push_back(P);
    }
    if (eval_spec.is_generic()) {
        for (size_t i = 0; i < dims.size(); ++i)
            out.entries.push_back({dims[i], casimir_eigenvalue(dims[i], gen),
                                   std::move(generic_projectors[i]), 0});
        return out;
    }

    // specialize entrywise; a projector survives iff every entry has a limit
    for (size_t idx = 0; idx < dims.size(); ++idx) {
        ProjectorEntry e;
        e.r = dims[idx];
        e.c_generic = casimir_eigenvalue(dims[idx], gen);
        Mat spec_mat(n, n, eval_spec);
        int worst = 0;
        for (long i = 0; i < n && worst == 0; ++i)
            for (long j = 0; j < n; ++j) {
                int ord = 0;
                auto v = try_specialize(generic_projectors[idx](i, j), eval_spec, &ord);
                if (!v) { worst = ord; break; }
                spec_mat(i, j) = *v;
            }
        if (worst == 0) e.matrix = std::move(spec_mat);
        e.pole_order = worst;
        out.entries.push_back(std::move(e));
    }

    // minimal polynomial over the distinct specialized eigenvalues
    GradedRep prod_r = tensor(build_irrep(r1, eval_spec), build_irrep(r2, eval_spec));
    Module mr = module_of(prod_r);
    Mat Cr = module_casimir(mr);
    std::vector<std::pair<long, Scalar>> distinct;
    for (long r : dims) {
        Scalar c = casimir_eigenvalue(r, eval_spec);
        bool seen = false;
        for (auto& [r0, c0] : distinct)
            if (c0 == c) { seen = true; break; }
        if (!seen) distinct.push_back({r, c});
    }
    for (auto& [r, c] : distinct) {
        Mat A = Cr;
        for (long i = 0; i < n; ++i) A(i, i) -= c;
        long mult = 0, prev = -1;
        Mat power = Mat::identity(n, eval_spec);
        while (true) {
            long kd = n - rank(power);
            if (kd == prev) break;
            prev = kd;
            power = power * A;
            ++mult;
        }
        out.minimal_poly.push_back({r, mult - 1});
    }
    // spectral projectors over the reduced (distinct-value) list when C is
    // diagonalizable at the root
    bool diagonalizable = true;
    for (auto& [r, mlt] : out.minimal_poly)
        if (mlt > 1) diagonalizable = false;
    if (diagonalizable) {
        for (auto& [r, mlt] : out.minimal_poly) {
            Mat P = Mat::identity(n, eval_spec);
            Scalar cr = casimir_eigenvalue(r, eval_spec);
            for (auto& [p, m2] : out.minimal_poly) {
                if (p == r) continue;
                Scalar cp = casimir_eigenvalue(p, eval_spec);
                Mat term = Cr;
                for (long i = 0; i < n; ++i) term(i, i) -= cp;
                P = (cr - cp).inv() * (P * term);
            }
            out.reduced_projectors.push_back({r, std::move(P)});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// null-norm analysis
// ---------------------------------------------------------------------------

// Basis states forced to be self-orthogonal by the pairing in which f is
// adjoint to e: <f x|y> = (-1)^(p(x)p(y)) <x|e y>, k self-adjoint. The Gram
// matrix is only constrained up to a solution space; a state counts as null
// when every solution vanishes on it.
inline std::vector<long> null_norm_vectors(const Module& m) {
    long n = m.dim();
    const QSpec& spec = m.spec;
    // variables G(x,y) for equal-class pairs (k-self-adjointness)
    std::vector<std::vector<std::pair<long, long>>> vars(n);
    long nvars = 0;
    for (long x = 0; x < n; ++x)
        for (long y = 0; y < n; ++y)
            if (m.keig[x] == m.keig[y]) vars[x].push_back({y, nvars++});
    auto vid = [&](long x, long y) -> long {
        for (auto& [yy, id] : vars[x])
            if (yy == y) return id;
        return -1;
    };
    // adjointness rows (F^T G)(x,y) = sign (G E)(x,y); solve the homogeneous
    // system densely and keep the whole solution space
    std::vector<Vec> solutions;
    Mat A(n * n, nvars, spec);
    long erow = 0;
    for (long x = 0; x < n; ++x)
        for (long y = 0; y < n; ++y, ++erow) {
            for (long z = 0; z < n; ++z) {
                if (!m.F(z, x).is_zero()) {
                    long id = vid(z, y);
                    if (id >= 0) A(erow, id) += m.F(z, x);
                }
                if (!m.E(z, y).is_zero()) {
                    long id = vid(x, z);
                    if (id >= 0) {
                        Scalar s = m.E(z, y);
                        if ((m.parity[x] * m.parity[y]) & 1) s = -s;
                        A(erow, id) -= s;
                    }
                }
            }
        }
    Mat ker = kernel_basis(A);
    for (long r = 0; r < ker.rows(); ++r) solutions.push_back(ker.row(r));
    std::vector<long> null_states;
    for (long v = 0; v < n; ++v) {
        long id = vid(v, v);
        bool null = true;
        if (id >= 0)
            for (const Vec& sol : solutions)
                if (!sol[id].is_zero()) { null = false; break; }
        if (null) null_states.push_back(v);
    }
    return null_states;
}

inline std::vector<long> null_norm_vectors(const GradedRep& rep) {
    return null_norm_vectors(module_of(rep));
}

}  // namespace ospq
