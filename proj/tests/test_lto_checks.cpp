#include <gtest/gtest.h>

#include <random>

#include "lto/lto_checks.hpp"
#include "lto/operator_core.hpp"

using namespace lto;

namespace {

Model make(const std::string& kind, int w, int h, double cut, Layout lay, int order = 2) {
    ModelDesc d;
    d.kind = kind;
    d.w = w;
    d.h = h;
    d.cut = cut;
    d.layout = lay;
    d.group = FiniteGroup::cyclic(order);
    d.budget = 1 << 14;
    return build_model(d);
}

std::vector<Mat> units(long d) {
    std::vector<Mat> out;
    for (long i = 0; i < d * d; ++i) {
        Mat e = Mat::Zero(d, d);
        e(i % d, i / d) = 1;
        out.push_back(e);
    }
    return out;
}

long ipow(long b, long e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// ground space of S on its own qudits
struct Dense {
    std::vector<int> qs;
    ProductSpace sp;
    SparseOperator pS;
    Mat V;
};

Dense dense_ground(const Model& m, const Region& S) {
    Dense g{m.qudits_in(S), {}, {}, {}};
    g.sp = m.space_of(g.qs);
    g.pS = ground_projection(m, S, &g.sp);
    g.V = range_basis(g.pS.m);
    return g;
}

}  // namespace

TEST(CanonicalState, SingleSitePauliVanishesAndTermsAreOne) {
    auto m = make("toric", 6, 6, 2.5, Layout::Edge);
    StabilizerNet net(m);
    const Region R{{2, 2}};
    for (int q : m.qudits_in(R)) {
        auto z = canonical_state(net, Pauli::single(2, m.nq(), q, 0, 1), R);
        auto x = canonical_state(net, Pauli::single(2, m.nq(), q, 1, 0), R);
        EXPECT_NEAR(std::abs(z.value), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(x.value), 0.0, 1e-12);
        EXPECT_GE(z.used.size(), 2u);
    }
    int seen = 0;
    for (auto& t : m.terms) {
        Region owners(std::set<Site>(t.owners.begin(), t.owners.end()));
        if (!completely_surrounds(owners, m.patch, 1)) continue;
        auto v = canonical_state(net, *t.gen, owners);
        EXPECT_NEAR(std::abs(v.value - 1.0), 0.0, 1e-12) << t.kind;
        EXPECT_LT(v.spread, 1e-12);
        ++seen;
    }
    EXPECT_GT(seen, 0);
}

TEST(CanonicalState, DenseRouteAgrees) {
    auto m = make("toric", 4, 4, 1.5, Layout::Medial);
    StabilizerNet net(m);
    const Region R{{1, 1}};
    auto rq = m.qudits_in(R);
    std::mt19937 rng(4);
    for (auto& P : net.pauli_basis(R)) {
        auto a = canonical_state(net, P, R);
        auto b = canonical_state_dense(m, P.matrix_on(rq), rq, R);
        EXPECT_NEAR(std::abs(a.value - b.value), 0.0, 1e-10) << P.str();
    }
}

TEST(Lto1, ExactAndDenseRanksAgree) {
    for (int order : {2, 3}) {
        auto m = make(order == 2 ? "toric" : "qd", 4, 4, 1.5, Layout::Medial, order);
        StabilizerNet net(m);
        CheckOptions o;
        o.budget = 1 << 15;
        const Region R{{1, 1}};
        // surrounded: rank one; smaller S leave part of the matrix algebra on R
        for (const Region& S : {order == 2 ? Region::rect(0, 0, 2, 2) : Region::rect(0, 0, 2, 1), R}) {
            auto a = check_lto1(net, R, S, o);
            auto b = check_lto1_dense(m, R, S, o);
            EXPECT_EQ(a.dims["rank"].get<long>(), b.dims["rank"].get<long>()) << order << " " << S.key();
            EXPECT_EQ(a.pass, b.pass);
        }
        EXPECT_TRUE(check_lto1(net, R, Region::rect(0, 0, 2, 2), o).pass) << order;
    }
}

TEST(Lto1, RegionWithoutTermsFailsAgainstItself) {
    auto m = make("toric", 4, 4, 1.5, Layout::Edge);
    StabilizerNet net(m);
    const Region R{{1, 1}};
    ASSERT_TRUE(m.terms_in(R).empty());
    auto r = check_lto1(net, R, R);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.dims["rank"].get<long>(), ipow(4, long(m.qudits_in(R).size())));
    EXPECT_FALSE(r.params["surrounded"].get<bool>());
}

TEST(Lto1, Z3SmallPatchHasRankOne) {
    auto m = make("qd", 4, 4, 1.5, Layout::Medial, 3);
    StabilizerNet net(m);
    auto r = check_lto1(net, Region{{1, 1}}, Region::rect(0, 0, 2, 2));
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.dims["rank"].get<long>(), 1);
    EXPECT_EQ(r.residuals["psi_pR"].get<double>(), 0.0);
}

TEST(Lto1, NonPauliGroupRefused) {
    ModelDesc d;
    d.kind = "qd";
    d.w = 2;
    d.h = 2;
    d.cut = 0.5;
    d.group = FiniteGroup::s3();
    auto m = build_model(d);
    EXPECT_FALSE(m.pauli());
    try {
        StabilizerNet net(m);
        check_lto1(net, Region{{0, 0}}, m.patch);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "BAD_GROUP");
    }
}

// Dense oracle for the compression identities used by the exact backend:
// p_S y p_S = y p_S when y normalizes G_S and 0 otherwise.
TEST(Compression, MatchesDenseProjection) {
    for (int order : {2, 3}) {
        auto m = make(order == 2 ? "toric" : "qd", 3, 3, 0.5, Layout::Medial, order);
        StabilizerNet net(m);
        const Region S = Region::rect(0, 0, 2, 1), R = Region::rect(1, 0, 2, 0);
        auto g = dense_ground(m, S);
        auto GS = net.group(S);
        const SpMat& P = g.pS.m;
        for (auto& y : net.pauli_basis(R)) {
            SpMat ym = embed_local(y.matrix_on(m.qudits_in(R)), m.qudits_in(R), g.sp).m;
            SpMat yP = ym * P, lhs = P * yP;
            double err = GS->normalizes(y) ? SpMat(lhs - yP).norm() : lhs.norm();
            EXPECT_LT(err, 1e-10) << y.str();
            // y p_S is a multiple of p_S exactly for group elements
            if (auto mu = GS->member(y))
                EXPECT_LT(SpMat(yP - std::polar(1.0, M_PI * *mu / m.p) * P).norm(), 1e-10) << y.str();
        }
    }
}

TEST(Lto2, BoundaryDimensionMatchesGeneratedAlgebra) {
    for (int len : {2, 3}) {
        for (auto kind : {"toric", "qd"}) {
            auto m = make(kind, 4, len + 4, 1.5, Layout::Medial);
            StabilizerNet net(m);
            const Region R = Region::rect(1, 1, 1, len), S = Region::rect(0, 0, 1, len + 1);
            auto [B, rep] = extract_boundary_algebra(net, R, S);
            EXPECT_TRUE(rep.pass) << kind << len;
            EXPECT_EQ(B.I.sites.size(), std::size_t(len));
            auto g = dense_ground(m, S);
            const long k = g.V.cols();
            std::vector<Mat> gens;
            for (auto& op : boundary_generators(m, '+', cut_interval(m, '+', 1, len)))
                gens.push_back(g.V.adjoint() * embed_local(op.local, op.qudits, g.sp).m * g.V);
            auto rq = m.qudits_in(R);
            std::vector<Mat> comp;
            for (auto& e : units(ipow(m.d, long(rq.size()))))
                comp.push_back(g.V.adjoint() * embed_local(e, rq, g.sp).m * g.V);
            const long want = ipow(m.p, rep.dims["log_dim_compressed"].get<int>());
            EXPECT_EQ(algebra_closure(gens, k).size(), want) << kind << len;
            EXPECT_EQ(orthonormal_span(comp).rank(), want) << kind << len;
            EXPECT_EQ(rep.dims["log_dim_boundary"], rep.dims["log_dim_compressed"]);
        }
    }
}

TEST(Lto3Lto4, NestedWithEqualRegionsIsTrivial) {
    auto m = make("toric", 4, 4, 1.5, Layout::Edge);
    StabilizerNet net(m);
    auto r = check_lto3_lto4(net, Region{{1, 1}}, Region{{1, 1}}, Region::rect(0, 1, 2, 2), Region::rect(0, 1, 3, 3));
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.residuals["lto3_angle"].get<double>(), 0.0);
}

TEST(Lto3Lto4, RejectsNonNested) {
    auto m = make("toric", 4, 4, 1.5, Layout::Edge);
    StabilizerNet net(m);
    try {
        check_lto3_lto4(net, Region{{1, 1}, {1, 2}}, Region{{1, 1}}, Region::rect(0, 1, 2, 2),
                        Region::rect(0, 1, 3, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "REGION_NOT_NESTED");
    }
}

TEST(Hd, ExactAndDenseAgree) {
    CheckOptions o;
    o.budget = 1 << 14;
    struct Case {
        const char* kind;
        int order;
        Region R, S;
    };
    std::vector<Case> cases{
        {"toric", 2, Region::rect(1, 1, 2, 1), Region::rect(0, 0, 3, 2)},  // passes
        {"toric", 2, Region::rect(1, 0, 2, 0), Region::rect(0, 0, 3, 1)},  // R on the edge of S
        {"qd", 2, Region::rect(1, 0, 2, 0), Region::rect(0, 0, 3, 1)},
        {"qd", 3, Region::rect(1, 0, 2, 0), Region::rect(0, 0, 3, 0)},
    };
    for (auto& c : cases) {
        auto m = make(c.kind, 4, 4, 1.5, Layout::Medial, c.order);
        StabilizerNet net(m);
        auto a = check_hd(net, c.R, c.S, o);
        auto b = check_hd_dense(m, c.R, c.S, o);
        EXPECT_EQ(a.pass, b.pass) << c.kind << c.order << c.R.key();
        for (auto [lk, rk] : {std::pair{"log_dim_plus", "rank_plus"}, {"log_dim_mid", "rank_mid"},
                              {"log_dim_minus", "rank_minus"}})
            EXPECT_EQ(ipow(c.order, a.dims[lk].get<int>()), b.dims[rk].get<long>()) << c.kind << lk;
    }
}

TEST(Hd, EdgeLayoutEndMismatch) {
    // the boundary halves of edge-layout terms at the ends of R do not pair up
    auto m = make("toric", 4, 4, 1.5, Layout::Edge);
    StabilizerNet net(m);
    EXPECT_FALSE(check_hd(net, Region::rect(1, 1, 2, 2), m.patch).pass);
}

TEST(Invariants, RpImpliesHdImpliesHaag) {
    struct Case {
        const char* kind;
        int order, w, h;
    };
    for (auto c : {Case{"toric", 2, 6, 4}, Case{"qd", 2, 6, 4}, Case{"qd", 3, 6, 5}}) {
        auto m = make(c.kind, c.w, c.h, 2.5, Layout::Medial, c.order);
        StabilizerNet net(m);
        const Region R = Region::rect(1, 1, 4, std::min(2, c.h - 2));
        auto rp = check_rp(net, R, m.patch);
        auto hd = check_hd(net, R, m.patch);
        auto haag = check_finite_haag(net, Region::rect(1, 1, 2, c.h - 2), Region::rect(3, 1, 4, c.h - 2), m.patch);
        EXPECT_TRUE(rp.pass) << c.kind << rp.line();
        if (rp.pass) EXPECT_TRUE(hd.pass) << c.kind;
        if (hd.pass) EXPECT_TRUE(haag.pass) << c.kind << haag.line();
    }
}

TEST(Invariants, CanonicalStateIsOneOnGroundProjections) {
    auto m = make("qd", 6, 6, 2.5, Layout::Medial, 3);
    StabilizerNet net(m);
    for (const Region& R : {Region{{2, 2}}, Region::rect(2, 2, 3, 3), Region::rect(1, 2, 3, 3)}) {
        auto r = check_lto1(net, R, Region::rect(R.lo().x - 1, R.lo().y - 1, R.hi().x + 1, R.hi().y + 1));
        EXPECT_EQ(r.residuals["psi_pR"].get<double>(), 0.0) << R.key();
    }
}

TEST(Rp, ReflectionSymmetryRequired) {
    auto m = make("toric", 6, 4, 2.5, Layout::Medial);
    StabilizerNet net(m);
    try {
        check_rp(net, Region::rect(1, 1, 3, 2), m.patch);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NOT_SYMMETRIC");
    }
}

TEST(Hamiltonian, PerturbationIsDetected) {
    auto m = make("toric", 6, 4, 2.5, Layout::Medial);
    auto ok = check_rp_hamiltonian(m, false);
    auto bad = check_rp_hamiltonian(m, true);
    EXPECT_TRUE(ok.pass) << ok.line();
    EXPECT_FALSE(bad.pass) << bad.line();
}

TEST(Product, SeparatedRegionsFactorize) {
    auto m = make("toric", 6, 6, 2.5, Layout::Edge);
    StabilizerNet net(m);
    EXPECT_TRUE(check_product_state(net, Region{{1, 1}}, Region{{3, 4}}).pass);
}

TEST(Product, AdjacentRegionsRefused) {
    auto m = make("toric", 6, 6, 2.5, Layout::Edge);
    StabilizerNet net(m);
    for (const Region& R2 : {Region{{2, 1}}, Region{{1, 1}}}) {
        try {
            check_product_state(net, Region{{1, 1}}, R2);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), "NOT_SEPARATED");
        }
    }
}

TEST(Skein, SmallCategoriesPass) {
    for (auto name : {"fibonacci", "ising", "vec_z2"}) {
        auto C = build_category(name);
        EXPECT_TRUE(check_skein_modular(C, 2).pass) << name;
        EXPECT_TRUE(check_cond_exp(C, 2).pass) << name;
        EXPECT_TRUE(check_finite_haag_skein(C, 2).pass) << name;
    }
}

TEST(Reports, Deterministic) {
    auto m = make("qd", 6, 5, 2.5, Layout::Medial, 3);
    StabilizerNet net(m);
    const Region R = Region::rect(1, 1, 4, 2);
    EXPECT_EQ(check_rp(net, R, m.patch).to_json().dump(), check_rp(net, R, m.patch).to_json().dump());
    EXPECT_EQ(interaction_algebra(net, R, m.patch).to_json().dump(),
              interaction_algebra(net, R, m.patch).to_json().dump());
    auto a = check_lto1(net, Region{{2, 2}}, Region::rect(1, 1, 3, 3)).to_json();
    auto r = CheckReport::from_json(a);
    EXPECT_EQ(r.to_json().dump(), a.dump());
}
