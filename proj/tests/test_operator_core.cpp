#include <gtest/gtest.h>

#include <random>

#include <Eigen/QR>
#include <unsupported/Eigen/KroneckerProduct>

#include "lto/operator_core.hpp"

using namespace lto;

namespace {

Mat random_mat(int n, std::mt19937& rng) {
    std::normal_distribution<double> nd;
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    return a;
}

Mat random_unitary(int n, std::mt19937& rng) {
    Eigen::HouseholderQR<Mat> qr(random_mat(n, rng));
    return qr.householderQ();
}

Pauli random_pauli(int p, int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> u(0, p - 1), ph(0, 2 * p - 1);
    Pauli P(p, n);
    for (auto& x : P.v) x = u(rng);
    P.phase = ph(rng);
    return P;
}

SparseOperator sparse(const Mat& m, const ProductSpace& sp) {
    SparseOperator o;
    o.space = sp;
    o.m = m.sparseView();
    return o;
}

}  // namespace

TEST(Pauli, XTimesZIsMinusIY) {
    auto X = Pauli::single(2, 1, 0, 1, 0), Z = Pauli::single(2, 1, 0, 0, 1);
    auto XZ = X * Z;
    EXPECT_EQ(XZ.a(0), 1);
    EXPECT_EQ(XZ.b(0), 1);
    EXPECT_NEAR(std::abs(XZ.display_phase() - cplx(0, -1)), 0.0, 1e-15);
    Mat Y(2, 2);
    Y << 0, cplx(0, -1), cplx(0, 1), 0;
    EXPECT_NEAR((XZ.matrix() - cplx(0, -1) * Y).norm(), 0.0, 1e-15);
}

TEST(Pauli, TimesAdjointIsIdentity) {
    std::mt19937 rng(1);
    for (int p : {2, 3, 5}) {
        auto a = random_pauli(p, 4, rng);
        auto e = a * a.adjoint();
        EXPECT_TRUE(e.is_identity_vec());
        EXPECT_EQ(e.phase, 0);
    }
}

TEST(Pauli, OverlappingXXZZAnticommute) {
    auto X1X2 = Pauli::single(2, 3, 0, 1, 0) * Pauli::single(2, 3, 1, 1, 0);
    auto Z2Z3 = Pauli::single(2, 3, 1, 0, 1) * Pauli::single(2, 3, 2, 0, 1);
    EXPECT_EQ(X1X2.symplectic(Z2Z3), 1);
    EXPECT_FALSE(X1X2.commutes(Z2Z3));
}

TEST(Pauli, AssociativeBitForBit) {
    std::mt19937 rng(2);
    for (int p : {2, 3, 5})
        for (int t = 0; t < 200; ++t) {
            auto a = random_pauli(p, 5, rng), b = random_pauli(p, 5, rng), c = random_pauli(p, 5, rng);
            EXPECT_EQ((a * b) * c, a * (b * c));
        }
}

TEST(Pauli, ProductMatchesMatrices) {
    std::mt19937 rng(3);
    for (int p : {2, 3})
        for (int t = 0; t < 30; ++t) {
            auto a = random_pauli(p, 2, rng), b = random_pauli(p, 2, rng);
            EXPECT_NEAR(((a * b).matrix() - a.matrix() * b.matrix()).norm(), 0.0, 1e-12);
            EXPECT_NEAR((a.adjoint().matrix() - a.matrix().adjoint()).norm(), 0.0, 1e-12);
            // commutation from the symplectic form agrees with the matrices
            Mat c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
            EXPECT_EQ(a.commutes(b), c.norm() < 1e-12);
        }
}

TEST(Echelon, NullspaceAnnihilates) {
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> u(0, 2);
    std::vector<GVec> A(3, GVec(6));
    for (auto& r : A)
        for (auto& x : r) x = u(rng);
    auto ns = gf_nullspace(3, 6, A);
    EXPECT_EQ(int(ns.size()) + span_of(3, 6, A).dim(), 6);
    for (auto& x : ns)
        for (auto& r : A) {
            int s = 0;
            for (int k = 0; k < 6; ++k) s += r[k] * x[k];
            EXPECT_EQ(s % 3, 0);
        }
}

TEST(Embed, IdentityGivesIdentity) {
    auto sp = ProductSpace::uniform(3, 2);
    auto e = embed_local(Mat::Identity(2, 2), {1}, sp);
    EXPECT_NEAR((e.dense() - Mat::Identity(8, 8)).norm(), 0.0, 1e-15);
}

TEST(Embed, FirstFactorMostSignificant) {
    auto sp = ProductSpace::uniform(2, 2);
    Mat X(2, 2);
    X << 0, 1, 1, 0;
    Mat want = Eigen::kroneckerProduct(X, Mat::Identity(2, 2)).eval();
    EXPECT_NEAR((embed_local(X, {0}, sp).dense() - want).norm(), 0.0, 1e-15);
}

TEST(RangeProjection, SingleInput) {
    std::mt19937 rng(5);
    Mat U = random_unitary(4, rng);
    Mat P = U.leftCols(2) * U.leftCols(2).adjoint();
    auto sp = ProductSpace::uniform(2, 2);
    auto r = range_projection({sparse(P, sp)});
    EXPECT_NEAR((r.dense() - P).norm(), 0.0, 1e-9);
}

TEST(RangeProjection, ComplementaryGivesZero) {
    Mat P = Mat::Zero(4, 4);
    P(0, 0) = P(3, 3) = 1;
    auto sp = ProductSpace::uniform(2, 2);
    auto r = range_projection({sparse(P, sp), sparse(Mat::Identity(4, 4) - P, sp)});
    EXPECT_NEAR(r.dense().norm(), 0.0, 1e-12);
}

TEST(RangeProjection, BelowEveryInput) {
    std::mt19937 rng(6);
    std::bernoulli_distribution coin(0.6);
    auto sp = ProductSpace::uniform(3, 2);
    for (int t = 0; t < 20; ++t) {
        Mat U = random_unitary(8, rng);
        std::vector<SparseOperator> ps;
        std::vector<Mat> dense;
        for (int k = 0; k < 3; ++k) {
            RVec d(8);
            for (int i = 0; i < 8; ++i) d(i) = coin(rng);
            Mat P = U * d.cast<cplx>().asDiagonal() * U.adjoint();
            dense.push_back(P);
            ps.push_back(sparse(P, sp));
        }
        Mat R = range_projection(ps).dense();
        for (auto& P : dense) {
            // P R = R, and R x = x on the common range
            EXPECT_NEAR((P * R - R).norm(), 0.0, 1e-8);
        }
        Mat common = dense[0] * dense[1] * dense[2];
        EXPECT_NEAR((R * common - common).norm(), 0.0, 1e-8);
        EXPECT_NEAR((R - common).norm(), 0.0, 1e-8);
    }
}

TEST(RangeProjection, RejectsNonProjection) {
    auto sp = ProductSpace::uniform(1, 2);
    Mat A = Mat::Identity(2, 2) * 2.0;
    try {
        range_projection({sparse(A, sp)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NOT_PROJECTION");
    }
}

TEST(PartialTrace, IdentityKeepsDimensionFactor) {
    ProductSpace sp({0, 1}, {2, 3});
    auto x = sparse(Mat::Identity(6, 6), sp);
    auto r = partial_trace(x, {0});
    EXPECT_NEAR((r.dense() - 3.0 * Mat::Identity(2, 2)).norm(), 0.0, 1e-14);
}

TEST(PartialTrace, ProductState) {
    std::mt19937 rng(7);
    Mat a = random_mat(2, rng), b = random_mat(3, rng);
    Mat r1 = a * a.adjoint(), r2 = b * b.adjoint();
    ProductSpace sp({0, 1}, {2, 3});
    auto x = sparse(Eigen::kroneckerProduct(r1, r2).eval(), sp);
    EXPECT_NEAR((partial_trace(x, {0}).dense() - r2.trace() * r1).norm(), 0.0, 1e-12);
    EXPECT_NEAR((partial_trace(x, {1}).dense() - r1.trace() * r2).norm(), 0.0, 1e-12);
}

TEST(PartialTrace, AdjointOfEmbedding) {
    std::mt19937 rng(8);
    ProductSpace sp({0, 1, 2}, {2, 3, 2});
    for (std::vector<int> keep : {std::vector<int>{0}, {1}, {0, 2}, {2, 1}}) {
        Mat x = random_mat(12, rng);
        auto kept = partial_trace(sparse(x, sp), keep);
        int dk = int(kept.dim());
        Mat y = random_mat(dk, rng);
        cplx lhs = (kept.dense() * y).trace();
        cplx rhs = (x * embed_local(y, kept.space.ids, sp).dense()).trace();
        EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10);
    }
}

TEST(Schmidt, ProductIsSingleTerm) {
    std::mt19937 rng(9);
    Mat a = random_mat(2, rng), b = random_mat(4, rng);
    ProductSpace sp({0, 1, 2}, {2, 2, 2});
    auto s = operator_schmidt(Eigen::kroneckerProduct(a, b).eval(), sp, {0});
    ASSERT_EQ(s.sv.size(), 1u);
    EXPECT_NEAR(s.sv[0], a.norm() * b.norm(), 1e-10);
}

TEST(Schmidt, OneSidedHasIdentityPartner) {
    std::mt19937 rng(10);
    Mat a = random_mat(2, rng);
    ProductSpace sp({0, 1}, {2, 2});
    auto s = operator_schmidt(Eigen::kroneckerProduct(a, Mat::Identity(2, 2)).eval(), sp, {0});
    ASSERT_EQ(s.sv.size(), 1u);
    Mat r = s.right[0] / s.right[0](0, 0);
    EXPECT_NEAR((r - Mat::Identity(2, 2)).norm(), 0.0, 1e-12);
}

TEST(Schmidt, SwapHasFourEqualTerms) {
    Mat swap = Mat::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) swap(2 * i + j, 2 * j + i) = 1;
    // reshuffled matrix of the swap is the identity on C^4, so four equal
    // singular values with HS-normalized factors
    auto s = operator_schmidt(swap, ProductSpace::uniform(2, 2), {0});
    ASSERT_EQ(s.sv.size(), 4u);
    for (double v : s.sv) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Schmidt, ReconstructsRandomOperators) {
    std::mt19937 rng(11);
    for (int n = 2; n <= 8; n += 2) {
        auto sp = ProductSpace::uniform(n, 2);
        const int N = 1 << n;
        Mat x = random_mat(N, rng);
        std::vector<int> minus;
        for (int i = 0; i < n / 2; ++i) minus.push_back(2 * i);
        auto s = operator_schmidt(x, sp, minus);
        Mat rec = Mat::Zero(N, N);
        for (std::size_t j = 0; j < s.sv.size(); ++j) {
            SparseOperator l = embed_local(s.left[j], minus, sp);
            std::vector<int> plus;
            for (int i = 0; i < n; ++i)
                if (i % 2 == 1) plus.push_back(i);
            SparseOperator r = embed_local(s.right[j], plus, sp);
            rec += s.sv[j] * l.dense() * r.dense();
        }
        EXPECT_LT((rec - x).norm() / x.norm(), 1e-10) << n;
        // left factors orthonormal
        for (std::size_t i = 0; i < s.left.size(); ++i)
            for (std::size_t j = 0; j < s.left.size(); ++j)
                EXPECT_NEAR(std::abs(hs(s.left[i], s.left[j]) - (i == j ? 1.0 : 0.0)), 0.0, 1e-10);
    }
}

TEST(SparseOperator, JsonRoundTrip) {
    std::mt19937 rng(12);
    auto sp = ProductSpace::uniform(2, 2);
    Mat a = random_mat(4, rng);
    a(1, 2) = 0;
    auto o = sparse(a, sp);
    auto j = o.to_json();
    EXPECT_EQ(j.at("dim").get<long>(), 4);
    auto back = SparseOperator::from_json(j, sp);
    EXPECT_EQ((back.dense() - a).norm(), 0.0);
    EXPECT_EQ(back.to_json().dump(), j.dump());
}
