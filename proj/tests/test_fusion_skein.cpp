#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "lto/fusion_skein.hpp"
#include "lto/vn_toolkit.hpp"
#include "oracles.hpp"

using namespace lto;

namespace {

const double phi_gold = (1 + std::sqrt(5.0)) / 2;

Mat unit(int N, int p, int q) {
    Mat e = Mat::Zero(N, N);
    e(p, q) = 1;
    return e;
}

// m_c for n strands from powers of the fusion matrix of X = sum of simples
std::vector<long> path_counts(const FusionCategory& C, int n) {
    const int r = C.rank();
    std::vector<long> v(r, 0);
    v[C.unit] = 1;
    for (int k = 0; k < n; ++k) {
        std::vector<long> w(r, 0);
        for (int a = 0; a < r; ++a)
            for (int x = 0; x < r; ++x)
                for (int c = 0; c < r; ++c) w[c] += v[a] * C.N[a][x][c];
        v = w;
    }
    return v;
}

double rel(const Mat& a, const Mat& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

std::vector<std::pair<std::string, int>> small_cases() {
    return {{"vec_z2", 1}, {"vec_z2", 2}, {"vec_z3", 2}, {"fibonacci", 1}, {"fibonacci", 2},
            {"fibonacci", 3}, {"ising", 2}};
}

}  // namespace

TEST(Category, BuiltIns) {
    auto z2 = build_category("vec_z2");
    EXPECT_DOUBLE_EQ(z2.D, 2.0);
    for (double d : z2.d) EXPECT_DOUBLE_EQ(d, 1.0);
    auto fib = build_category("fibonacci");
    EXPECT_NEAR(fib.d[1], phi_gold, 1e-14);
    EXPECT_NEAR(fib.d[1] * fib.d[1], fib.d[1] + 1, 1e-13);
    auto is = build_category("ising");
    int sigma = -1;
    for (int a = 0; a < is.rank(); ++a)
        if (is.labels[a] == "sigma") sigma = a;
    ASSERT_GE(sigma, 0);
    EXPECT_NEAR(is.d[sigma] * is.d[sigma], 2.0, 1e-13);
}

TEST(Category, JsonDimsRecomputed) {
    auto C = FusionCategory::from_json(nlohmann::json::parse(
        R"({"labels":["1","t"],"unit":"1","dual":["1","t"],"N":[[[1,0],[0,1]],[[0,1],[1,1]]]})"));
    EXPECT_NEAR(C.d[1], phi_gold, 1e-12);
    EXPECT_NEAR(C.D, 1 + phi_gold * phi_gold, 1e-12);
}

TEST(Category, InvalidDataNamed) {
    // tau x tau without the unit violates duality
    try {
        FusionCategory::from_json(nlohmann::json::parse(
            R"({"labels":["1","t"],"unit":0,"dual":[0,1],"N":[[[1,0],[0,1]],[[0,1],[0,1]]]})"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "INVALID_FUSION_DATA");
        EXPECT_NE(std::string(e.what()).find("duality"), std::string::npos);
    }
}

TEST(PathBasis, Counts) {
    for (auto name : {"vec_z2", "fibonacci", "ising"}) {
        auto C = build_category(name);
        auto pb = path_basis(C, 0);
        EXPECT_EQ(pb.size(), 1);
        EXPECT_EQ(pb.m(C.unit), 1);
    }
    auto fib = build_category("fibonacci");
    auto pb3 = path_basis(fib, 3);
    EXPECT_EQ(pb3.m(0), 5);
    EXPECT_EQ(pb3.m(1), 8);
    EXPECT_EQ(pb3.algebra_dim(), 89);
    auto pz = path_basis(build_category("vec_z2"), 2);
    EXPECT_EQ(pz.m(0), 2);
    EXPECT_EQ(pz.m(1), 2);
}

TEST(PathBasis, AdjacencyPowersAndFibonacciNumbers) {
    std::vector<long> F = {0, 1};
    for (int k = 2; k < 20; ++k) F.push_back(F[k - 1] + F[k - 2]);
    for (auto name : {"vec_z3", "fibonacci", "ising"}) {
        auto C = build_category(name);
        for (int n = 0; n <= 6; ++n) {
            auto pb = path_basis(C, n);
            auto want = path_counts(C, n);
            long dim = 0;
            for (int c = 0; c < C.rank(); ++c) {
                EXPECT_EQ(pb.m(c), want[c]) << name << " n=" << n;
                dim += want[c] * want[c];
            }
            EXPECT_EQ(pb.algebra_dim(), dim);
            if (std::string(name) == "fibonacci") {
                // m_1 = F_{2n-1}, m_tau = F_{2n}
                EXPECT_EQ(pb.m(1), F[2 * n]);
                if (n > 0) EXPECT_EQ(pb.m(0), F[2 * n - 1]);
            }
        }
    }
}

TEST(PathAlgebra, TraceExamples) {
    auto fib = build_category("fibonacci");
    PathAlgebra B1(fib, 1), B2(fib, 2);
    EXPECT_NEAR(std::abs(B1.trace(Mat::Identity(B1.N(), B1.N())) - (1 + phi_gold)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(B2.trace(Mat::Identity(B2.N(), B2.N())) - (2 + 3 * phi_gold)), 0.0, 1e-12);
    for (int t = 0; t < 10; ++t) {
        Mat x = B2.random(2 * t), y = B2.random(2 * t + 1);
        EXPECT_NEAR(std::abs(B2.trace(x * y) - B2.trace(y * x)), 0.0, 1e-12);
    }
}

TEST(PathAlgebra, StateAndWeightFormulas) {
    for (auto [name, n] : small_cases()) {
        auto C = build_category(name);
        PathAlgebra B(C, n);
        const int N = B.N();
        Mat id = Mat::Identity(N, N);
        EXPECT_NEAR(std::abs(B.psi(id) - 1.0), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(B.omega(id) - std::pow(double(C.rank()), n)), 0.0, 1e-12 * std::pow(C.rank(), n));
        for (int p = 0; p < N; ++p) {
            double dc = B.charge_dim(p), w = B.weight(p);
            EXPECT_NEAR(std::abs(B.psi(unit(N, p, p)) - w * dc / std::pow(C.D, n)), 0.0, 1e-13);
            EXPECT_NEAR(std::abs(B.omega(unit(N, p, p)) - dc / w), 0.0, 1e-13);
        }
        for (int t = 0; t < 5; ++t) {
            Mat x = B.random(100 + t);
            Mat xx = x.adjoint() * x;
            EXPECT_GT(B.psi(xx).real(), 0.0);
            EXPECT_GT(B.omega(xx).real(), 0.0);
            EXPECT_NEAR(std::abs(B.psi(x) - (B.psi_density() * x).trace()), 0.0, 1e-12);
        }
    }
    auto fib = build_category("fibonacci");
    PathAlgebra B1(fib, 1);
    EXPECT_NEAR(std::abs(B1.psi(unit(2, 1, 1)) - phi_gold * phi_gold / fib.D), 0.0, 1e-14);
    auto z2 = build_category("vec_z2");
    PathAlgebra Z1(z2, 1);
    Mat x = Z1.random(3);
    EXPECT_NEAR(std::abs(Z1.omega(x) - x.trace()), 0.0, 1e-13);
}

TEST(Skein, InnerProductFormula) {
    for (auto [name, n] : small_cases()) {
        auto C = build_category(name);
        PathAlgebra B(C, n);
        SkeinSpace H(B);
        const int N = B.N();
        const auto& ch = B.paths().charge;
        for (int p = 0; p < N; ++p)
            for (int q = 0; q < N; ++q) {
                if (ch[p] != ch[q]) continue;
                Mat f = unit(N, p, q);
                double want = B.charge_dim(p) / std::sqrt(B.weight(p) * B.weight(q));
                EXPECT_NEAR(std::abs(H.inner(f, f) - want), 0.0, 1e-13);
                for (int r = 0; r < N; ++r)
                    if (r != p && ch[r] == ch[q]) EXPECT_EQ(std::abs(H.inner(f, unit(N, r, q))), 0.0);
            }
        Mat Om = H.omega_vector();
        EXPECT_NEAR(std::abs(H.inner(Om, Om) - B.omega(Mat::Identity(N, N))), 0.0, 1e-11);
        for (int t = 0; t < 5; ++t) {
            Mat f = B.random(7 + t);
            EXPECT_GT(H.inner(f, f).real(), 0.0);
            EXPECT_NEAR((H.coords(f).squaredNorm() - H.inner(f, f).real()), 0.0, 1e-11);
            EXPECT_NEAR(rel(H.element(H.coords(f)), f), 0.0, 1e-13);
        }
    }
}

TEST(Skein, GluingAgainstSectorFormula) {
    for (auto [name, n] : small_cases()) {
        auto C = build_category(name);
        PathAlgebra B(C, n);
        SkeinSpace H(B);
        const int N = B.N();
        const auto& ch = B.paths().charge;
        Mat phi = B.random(11);
        Mat G = H.gamma(phi), Gt = H.gamma_tilde(phi);
        for (int q = 0; q < N; ++q)
            for (int s = 0; s < N; ++s) {
                if (ch[q] != ch[s]) continue;
                // post-composition: E_qs -> sum_p phi_pq (w_p/w_q)^{1/4} E_ps
                Mat want = Mat::Zero(N, N), wantt = Mat::Zero(N, N);
                for (int p = 0; p < N; ++p) want(p, s) = phi(p, q) * std::pow(B.weight(p) / B.weight(q), 0.25);
                // pre-composition: E_qs -> sum_r phi_sr (w_r/w_s)^{1/4} E_qr
                for (int r = 0; r < N; ++r) wantt(q, r) = phi(s, r) * std::pow(B.weight(r) / B.weight(s), 0.25);
                Vec u = H.coords(unit(N, q, s));
                EXPECT_LT((G * u - H.coords(want)).norm(), 1e-12);
                EXPECT_LT((Gt * u - H.coords(wantt)).norm(), 1e-12);
            }
        EXPECT_LT(rel(H.gamma(Mat::Identity(N, N)), Mat::Identity(H.dim(), H.dim())), 1e-14);
        Mat zeta = B.random(12);
        Mat Gz = H.gamma_tilde(zeta);
        EXPECT_LT((G * Gz - Gz * G).norm(), 1e-11);
    }
}

TEST(Skein, AdjointAndJDuality) {
    for (auto [name, n] : small_cases()) {
        auto C = build_category(name);
        PathAlgebra B(C, n);
        SkeinSpace H(B);
        Mat Jm = H.J_matrix();
        for (int t = 0; t < 3; ++t) {
            Mat phi = B.random(20 + t);
            Mat G = H.gamma(phi);
            EXPECT_LT(rel(G.adjoint(), H.gamma(phi.adjoint())), 1e-12);
            // J X J with J u = Jm conj(u)
            Mat JGJ = Jm * G.adjoint().conjugate() * Jm.conjugate();
            EXPECT_LT(rel(JGJ, H.gamma_tilde(phi)), 1e-12);
        }
        EXPECT_LT(rel(Jm * Jm.conjugate(), Mat::Identity(H.dim(), H.dim())), 1e-13);
        EXPECT_GT(H.delta_omega().minCoeff(), 0.0);
    }
}

TEST(Skein, VacuumRatioAndWeight) {
    for (auto [name, n] : small_cases()) {
        auto C = build_category(name);
        PathAlgebra B(C, n);
        SkeinSpace H(B);
        const int N = B.N();
        const auto& ch = B.paths().charge;
        Vec Om = H.coords(H.omega_vector());
        for (int p = 0; p < N; ++p)
            for (int q = 0; q < N; ++q) {
                if (ch[p] != ch[q]) continue;
                Mat e = unit(N, p, q);
                Vec a = H.gamma(e) * Om, b = H.gamma_tilde(e) * Om;
                EXPECT_LT((a - std::sqrt(B.weight(p) / B.weight(q)) * b).norm(), 1e-12);
            }
        for (int t = 0; t < 3; ++t) {
            Mat phi = B.random(30 + t);
            EXPECT_NEAR(std::abs(Om.dot(H.gamma(phi) * Om) - B.omega(phi)), 0.0, 1e-11);
        }
    }
}

TEST(Skein, ModularGroupAndIntertwiners) {
    for (auto [name, n] : small_cases()) {
        auto C = build_category(name);
        PathAlgebra B(C, n);
        SkeinSpace H(B);
        Vec Om = H.coords(H.omega_vector());
        RVec dl = H.delta_omega();
        Mat Jm = H.J_matrix();
        auto vec_of_phi = [&](const Mat& f) { return Vec(H.gamma(f) * Om); };
        for (int t = 0; t < 3; ++t) {
            Mat phi = B.random(40 + t), zeta = B.random(50 + t);
            // sigma^psi_t = sigma^omega_{-t}
            for (double s : {0.3, -1.1}) EXPECT_LT(rel(H.sigma_psi(phi, s), H.sigma_omega(phi, -s)), 1e-12);
            // S = J Delta^{1/2} sends Gamma_phi Omega to Gamma_{phi^dag} Omega
            Vec u = vec_of_phi(phi);
            Vec Su = Jm * (dl.cwiseSqrt().cast<cplx>().asDiagonal() * u).conjugate();
            EXPECT_LT((Su - vec_of_phi(phi.adjoint())).norm(), 1e-11 * std::max(1.0, u.norm()));
            // left action: zeta phi <-> Gamma_zeta; right: phi sigma^omega_{-i/2}(zeta) <-> Gamma~_zeta
            EXPECT_LT((vec_of_phi(zeta * phi) - H.gamma(zeta) * u).norm(), 1e-11);
            Mat right = phi * H.sigma_omega(zeta, cplx(0, -0.5));
            EXPECT_LT((vec_of_phi(right) - H.gamma_tilde(zeta) * u).norm(), 1e-10);
        }
    }
}

TEST(Skein, VecTrivialModularData) {
    auto C = build_category("vec_z3");
    PathAlgebra B(C, 2);
    SkeinSpace H(B);
    EXPECT_LT((H.delta_omega().array() - 1.0).abs().maxCoeff(), 1e-15);
    Mat phi = B.random(1);
    EXPECT_LT(rel(H.sigma_psi(phi, 0.7), phi), 1e-15);
}

TEST(Skein, FibonacciSigmaAtMinusHalfI) {
    auto fib = build_category("fibonacci");
    PathAlgebra B(fib, 2);
    SkeinSpace H(B);
    // sector (1,1) -> (tau,tau): a path with edges (1,1) to one with (tau,tau), both of charge 1
    int src = -1, dst = -1;
    for (int p = 0; p < B.N(); ++p) {
        auto& path = B.paths().paths[p];
        if (B.paths().charge[p] != fib.unit) continue;
        if (path[0].x == 0 && path[1].x == 0) src = p;
        if (path[0].x == 1 && path[1].x == 1) dst = p;
    }
    ASSERT_GE(src, 0);
    ASSERT_GE(dst, 0);
    Mat e = unit(B.N(), dst, src);
    EXPECT_LT(rel(H.sigma_psi(e, cplx(0, -0.5)), phi_gold * e), 1e-13);
}

TEST(Skein, CommutantDuality) {
    std::vector<std::pair<std::string, int>> cases = {{"fibonacci", 1}, {"fibonacci", 2}, {"fibonacci", 3},
                                                      {"vec_z2", 1},    {"vec_z2", 2},    {"vec_z2", 3},
                                                      {"vec_z2", 4}};
    for (auto [name, n] : cases) {
        auto C = build_category(name);
        PathAlgebra B(C, n);
        SkeinSpace H(B);
        std::vector<Mat> L, R;
        for (auto& e : B.basis()) {
            L.push_back(H.gamma(e));
            R.push_back(H.gamma_tilde(e));
        }
        VNAlgebra A{orthonormal_span(L)}, At{orthonormal_span(R)};
        auto cmp = subspace_equal(commutant(A).space, At.space);
        EXPECT_TRUE(cmp.equal) << name << " n=" << n << " angle " << cmp.angle;
        EXPECT_EQ(A.size(), B.paths().algebra_dim());
    }
}

// cap-formula oracle lives in oracles.hpp so the acceptance run shares it
TEST(CondExp, MatchesCapFormula) {
    for (auto [name, n] : std::vector<std::pair<std::string, int>>{{"fibonacci", 2}, {"fibonacci", 3},
                                                                    {"ising", 2},     {"vec_z3", 2}})
        EXPECT_LT(oracle::cap_formula_residual(build_category(name), n), 1e-10) << name << " n=" << n;
}

TEST(CondExp, UnitalAndStatePreserving) {
    auto fib = build_category("fibonacci");
    PathAlgebra B2(fib, 2), B1(fib, 1);
    auto E = boundary_cond_exp(B2, B1);
    EXPECT_LT(rel(E.apply(Mat::Identity(B2.N(), B2.N())), Mat::Identity(B1.N(), B1.N())), 1e-13);
    for (int t = 0; t < 10; ++t) {
        Mat phi = B2.random(60 + t);
        EXPECT_NEAR(std::abs(B2.psi(phi) - B1.psi(E.apply(phi))), 0.0, 1e-12);
        Mat a = B1.random(70 + t), b = B1.random(80 + t);
        Mat lhs = E.apply(B2.embed(a) * phi * B2.embed(b));
        EXPECT_LT(rel(lhs, a * E.apply(phi) * b), 1e-11);
    }
    EXPECT_LT(E.invariance_residual, 1e-10);
}
