#include <catch2/catch_amalgamated.hpp>

#include "ospq/modulean.hpp"

#include <random>

using namespace ospq;

namespace {
const QSpec kGen = QSpec::generic();

std::string labels_str(const std::vector<Summand>& dec) {
    std::string out;
    for (const auto& s : dec) {
        if (!out.empty()) out += " + ";
        out += s.label.str();
    }
    return out;
}

GradedRep product(long r1, long r2, const QSpec& spec) {
    return tensor(build_irrep(r1, spec), build_irrep(r2, spec));
}
}  // namespace

TEST_CASE("lowest weight vectors: counts and weights") {
    // V_n (x) V_m at generic q carries exactly min(n,m) of them
    for (auto [n, m] : {std::pair{3L, 3L}, {2L, 3L}, {3L, 5L}, {2L, 5L}}) {
        auto lw = lowest_weight_vectors(product(n, m, kGen));
        CHECK((long)lw.size() == std::min(n, m));
    }
    auto lw1 = lowest_weight_vectors(build_irrep(1, kGen));
    CHECK(lw1.size() == 1);

    // Vbar7 at q = +-i: alpha zeros at h = 0, 1 give lowest weights -3, 0, 1
    GradedRep v7 = build_irrep(7, QSpec::root(2, -1));
    Module m7 = module_of(v7);
    auto lw7 = lowest_weight_vectors(m7);
    std::vector<long> where;
    for (const Vec& v : lw7)
        for (long i = 0; i < 7; ++i)
            if (!v[i].is_zero()) { where.push_back(v7.states[i].t / 2); break; }
    std::sort(where.begin(), where.end());
    CHECK(where == std::vector<long>{-3, 0, 1});
}

TEST_CASE("cyclic submodules") {
    // from the lowest weight vector 1 the saturation has dimension n+m-1
    for (auto [n, m] : {std::pair{3L, 3L}, {2L, 3L}, {3L, 5L}}) {
        GradedRep t = product(n, m, kGen);
        Module mod = module_of(t);
        Vec bottom(t.dim(), Scalar::zero(kGen));
        bottom[0] = Scalar::one(kGen);
        CHECK((long)cyclic_rows(mod, bottom).size() == n + m - 1);
    }
    // a generic vector of V3 (x) V3 generates everything
    GradedRep t = product(3, 3, kGen);
    Module mod = module_of(t);
    Vec v(t.dim(), Scalar::zero(kGen));
    for (long i = 0; i < t.dim(); ++i) v[i] = Scalar::integer(i + 1, kGen);
    CHECK((long)cyclic_rows(mod, v).size() == 9);
    // inside Vbar5 at a root the invariant middle segment is recovered
    GradedRep v5 = build_irrep(5, QSpec::root(2, -1));
    Module m5 = module_of(v5);
    Vec seed(5, Scalar::zero(QSpec::root(2, -1)));
    seed[1] = Scalar::one(QSpec::root(2, -1));
    CHECK((long)cyclic_rows(m5, seed).size() == 3);
}

TEST_CASE("equivariant complement: summand vs not-a-summand") {
    QSpec q3m = QSpec::root(3, -1);
    GradedRep t = product(3, 3, q3m);  // I(6){5,1} + V3
    Module mod = module_of(t);
    auto lw = lowest_weight_vectors(mod);
    REQUIRE(lw.size() == 3);
    long hits = 0, misses = 0;
    for (const Vec& v : lw) {
        auto rows = cyclic_rows(mod, v);
        if (rows.size() == 9) continue;
        Retraction ret = equivariant_retraction(mod, rows);
        if (ret.exists) {
            ++hits;
            const Mat& P = ret.idempotent;
            CHECK(P * P == P);
            CHECK(commutator(P, mod.E).is_zero());
            CHECK(commutator(P, mod.F).is_zero());
        } else {
            ++misses;
        }
    }
    CHECK(hits >= 1);   // the V3 summand splits off
    CHECK(misses >= 1); // the radical part of I(6){5,1} does not

    // generic q: every lowest-weight cyclic submodule is a summand
    GradedRep tg = product(3, 3, kGen);
    Module mg = module_of(tg);
    for (const Vec& v : lowest_weight_vectors(mg)) {
        auto rows = cyclic_rows(mg, v);
        CHECK(equivariant_retraction(mg, rows).exists);
    }

    // the inner 2-dim subspace of I(6){4,2} at q^3 = -1 is not a summand
    GradedRep t23 = product(2, 3, q3m);
    Module m23 = module_of(t23);
    auto lw23 = lowest_weight_vectors(m23);
    bool saw_inner = false;
    for (const Vec& v : lw23) {
        auto rows = cyclic_rows(m23, v);
        if (rows.size() == 2) {
            saw_inner = true;
            CHECK(!equivariant_retraction(m23, rows).exists);
        }
    }
    CHECK(saw_inner);
}

TEST_CASE("decompose: generic fusion") {
    CHECK(labels_str(decompose_module(product(2, 2, kGen))) == "V1 + V3");
    CHECK(labels_str(decompose_module(product(2, 3, kGen))) == "V2 + V4");
    CHECK(labels_str(decompose_module(product(3, 3, kGen))) == "V1 + V3 + V5");
    CHECK(labels_str(decompose_module(product(3, 5, kGen))) == "V3 + V5 + V7");
    CHECK(labels_str(decompose_module(product(4, 4, kGen))) == "V1 + V3 + V5 + V7");
}

TEST_CASE("decompose: paper root-of-unity cases for pairs") {
    QSpec q2m = QSpec::root(2, -1), q3m = QSpec::root(3, -1), q3p = QSpec::root(3, 1),
          q4m = QSpec::root(4, -1), q5m = QSpec::root(5, -1);
    CHECK(labels_str(decompose_module(product(3, 3, q2m))) == "V1 + I(8){5,3}");
    CHECK(labels_str(decompose_module(product(3, 3, q3m))) == "V3 + I(6){5,1}");
    CHECK(labels_str(decompose_module(product(2, 3, q3m))) == "I(6){4,2}");
    CHECK(labels_str(decompose_module(product(3, 5, q3p))) == "V3 + I(12){7,5}");
    CHECK(labels_str(decompose_module(product(3, 5, q5m))) == "V5 + I(10){7,3}");
    CHECK(labels_str(decompose_module(product(3, 5, q4m))) == "V3 + V5 + V7");
    CHECK(labels_str(decompose_module(product(2, 2, q2m))) == "V1 + V3");
}

TEST_CASE("decompose: cube of V3 at exceptional points") {
    GradedRep v3m = build_irrep(3, QSpec::root(2, -1));
    auto dec = decompose_module(tensor_power_chain(v3m, 3));
    CHECK(labels_str(dec) == "V3 + I(8){5,3} + I(8){5,3} + I(8){7,1}");

    // at q^3 = -1 the I(12){7,5} of the cube is decomposable and comes out
    // in split form: two pieces shaped like I(6){4,2}
    GradedRep v3c = build_irrep(3, QSpec::root(3, -1));
    auto dec2 = decompose_module(tensor_power_chain(v3c, 3));
    CHECK(labels_str(dec2) == "V3 + V3 + V3 + I(6){4,2} + I(6){4,2} + I(6){5,1}");
}

TEST_CASE("oracle soundness: idempotent certificates") {
    for (const QSpec& spec : {kGen, QSpec::root(2, -1), QSpec::root(3, -1)}) {
        GradedRep t = product(3, 3, spec);
        auto dec = decompose_module(t);
        auto projs = summand_idempotents(t, dec);
        long n = t.dim();
        Mat sum(n, n, spec);
        for (size_t i = 0; i < projs.size(); ++i) {
            const Mat& P = projs[i];
            CHECK(P * P == P);
            CHECK(commutator(P, t.E).is_zero());
            CHECK(commutator(P, t.F).is_zero());
            CHECK(commutator(P, t.K).is_zero());
            for (size_t j = i + 1; j < projs.size(); ++j) CHECK((P * projs[j]).is_zero());
            sum = sum + P;
        }
        CHECK(sum == Mat::identity(n, spec));
        // dimension conservation and sdim additivity
        long total = 0;
        Scalar sd = Scalar::zero(spec);
        for (const auto& s : dec) {
            total += s.piece.dim();
            for (long i = 0; i < s.piece.dim(); ++i) {
                Scalar kv = s.piece.keig[i];
                sd += s.piece.parity[i] ? -kv : kv;
            }
        }
        CHECK(total == n);
        CHECK(sd == sdim_q(t));
    }
}

TEST_CASE("casimir structure: Jordan data") {
    // I(6){4,2} at q^3=-1: single eigenvalue, nilpotency 2
    QSpec q3m = QSpec::root(3, -1);
    auto jd = casimir_structure(product(2, 3, q3m));
    REQUIRE(jd.size() == 1);
    CHECK(jd[0].space_dim == 6);
    CHECK(jd[0].nilpotency == 2);
    CHECK(jd[0].block_sizes == std::vector<long>{2, 2, 1, 1});

    auto jd1 = casimir_structure(build_irrep(1, kGen));
    REQUIRE(jd1.size() == 1);
    CHECK(jd1[0].rep_dim == 1);
    CHECK(jd1[0].eigenvalue == casimir_eigenvalue(1, kGen));
    CHECK(jd1[0].block_sizes == std::vector<long>{1});
}

TEST_CASE("Casimir on V2 (x) V2 at q = +-i is (1/2) Id") {
    QSpec q2m = QSpec::root(2, -1);
    GradedRep t = product(2, 2, q2m);
    Mat c = casimir_matrix(t);
    CHECK(c == Scalar::rational(mpq_class(1, 2), q2m) * Mat::identity(4, q2m));
}

TEST_CASE("projectors: survival and poles") {
    // V2 (x) V2 at q = +-i: both projectors remain regular
    auto rep22 = projectors(2, 2, QSpec::root(2, -1));
    REQUIRE(rep22.entries.size() == 2);
    for (auto& e : rep22.entries) CHECK(e.matrix.has_value());

    // V2 (x) V3 at q^3 = -1: P4 and P2 have poles
    auto rep23 = projectors(2, 3, QSpec::root(3, -1));
    REQUIRE(rep23.entries.size() == 2);
    for (auto& e : rep23.entries) {
        CHECK(!e.matrix.has_value());
        CHECK(e.pole_order > 0);
    }

    // V3 (x) V5 at q^4 = -1: minimal polynomial degree drops to
    // (C - c7)(C - c5) = 0 and P3, P5 survive
    auto rep35 = projectors(3, 5, QSpec::root(4, -1));
    REQUIRE(rep35.entries.size() == 3);
    for (auto& e : rep35.entries) {
        INFO("r=" << e.r);
        CHECK(e.matrix.has_value());
    }
    CHECK(rep35.minimal_poly == std::vector<std::pair<long, long>>{{3, 1}, {7, 1}});
    // reduced projectors resolve the two distinct eigenvalues
    REQUIRE(rep35.reduced_projectors.size() == 2);
    // identity partition and orthogonality in the reduced family
    QSpec q4m = QSpec::root(4, -1);
    Mat sum = rep35.reduced_projectors[0].second + rep35.reduced_projectors[1].second;
    CHECK(sum == Mat::identity(15, q4m));
    CHECK((rep35.reduced_projectors[0].second * rep35.reduced_projectors[1].second).is_zero());

    // generic mode returns the full projector family
    auto repg = projectors(3, 3, kGen);
    Mat sg = Mat::identity(9, kGen) - *repg.entries[0].matrix - *repg.entries[1].matrix -
             *repg.entries[2].matrix;
    CHECK(sg.is_zero());
}

TEST_CASE("null-norm vectors") {
    // generic irreps have none
    CHECK(null_norm_vectors(build_irrep(5, kGen)).empty());
    CHECK(null_norm_vectors(build_irrep(4, kGen)).empty());

    // I(8){5,3} at q^2 = -1 in its explicit ladder basis
    // [u(-2)..u(2), u'(-1), u'(0), u'(1)]: the whole inner ladder
    // u(-1), u(0), u(1) is forced null by the pairing
    QSpec q2m = QSpec::root(2, -1);
    GradedRep rep;
    rep.spec = q2m;
    rep.lambda = 0;
    rep.states = {{-4, 0}, {-2, 1}, {0, 0}, {2, 1}, {4, 0}, {-2, 1}, {0, 0}, {2, 1}};
    rep.E = Mat(8, 8, q2m);
    rep.F = Mat(8, 8, q2m);
    rep.K = Mat(8, 8, q2m);
    rep.Kinv = Mat(8, 8, q2m);
    Scalar i = Scalar::unit_i(q2m), one = Scalar::one(q2m);
    for (long k = 0; k < 8; ++k) {
        rep.K(k, k) = Scalar::s_pow(rep.states[k].t, q2m);
        rep.Kinv(k, k) = rep.K(k, k).inv();
    }
    rep.E(1, 0) = -i; rep.E(2, 1) = -i; rep.E(3, 2) = -i;  // e on the u ladder
    rep.E(6, 5) = one; rep.E(7, 6) = one;                   // e on the u' ladder
    rep.E(4, 7) = -one;                                     // cross arrow e u'(1) = -u(2)
    rep.F(3, 4) = -i; rep.F(2, 3) = i; rep.F(1, 2) = -i;    // f on the u ladder
    rep.F(6, 7) = one; rep.F(2, 7) = one;                   // f u'(1) = u'(0) + u(0)
    rep.F(5, 6) = -one; rep.F(1, 6) = -i;                   // f u'(0) = -u'(-1) - i u(-1)
    rep.F(0, 5) = -one;                                     // f u'(-1) = -u(-2)
    REQUIRE(verify_algebra(rep).ok);
    auto jd = casimir_structure(rep);
    REQUIRE(jd.size() == 1);
    CHECK(jd[0].nilpotency == 2);
    auto nulls = null_norm_vectors(rep);
    for (long s : {1L, 2L, 3L}) CHECK(std::find(nulls.begin(), nulls.end(), s) != nulls.end());
    CHECK(std::find(nulls.begin(), nulls.end(), 0L) == nulls.end());
    CHECK(std::find(nulls.begin(), nulls.end(), 4L) == nulls.end());

    // one-sided Vbar5 at q^2 = -1 (raising coefficients kept at 1): the
    // middle ladder is forced null by the pairing
    GradedRep vbar;
    vbar.spec = q2m;
    vbar.lambda = 0;
    vbar.states.resize(5);
    for (long k = 0; k < 5; ++k) vbar.states[k] = {-4 + 2 * k, (int)(k % 2)};
    vbar.E = Mat(5, 5, q2m);
    vbar.F = Mat(5, 5, q2m);
    vbar.K = Mat(5, 5, q2m);
    vbar.Kinv = Mat(5, 5, q2m);
    for (long k = 0; k < 5; ++k) {
        vbar.K(k, k) = Scalar::s_pow(-4 + 2 * k, q2m);
        vbar.Kinv(k, k) = vbar.K(k, k).inv();
    }
    for (long k = 1; k < 5; ++k) {
        Scalar a = alpha_coeff(4, -4 + 2 * k, q2m);
        if (-4 + 2 * k >= 2) { vbar.E(k, k - 1) = a; vbar.F(k - 1, k) = Scalar::one(q2m); }
        else { vbar.E(k, k - 1) = Scalar::one(q2m); vbar.F(k - 1, k) = a; }
    }
    REQUIRE(verify_algebra(vbar).ok);
    auto nulls5 = null_norm_vectors(vbar);
    for (long s : {1L, 2L, 3L}) CHECK(std::find(nulls5.begin(), nulls5.end(), s) != nulls5.end());
    CHECK(std::find(nulls5.begin(), nulls5.end(), 0L) == nulls5.end());
}
