#include "lto/vn_toolkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lto {

namespace {

Mat random_combo(const std::vector<Mat>& basis, std::mt19937_64& rng, bool hermitian) {
    std::normal_distribution<double> nd;
    Mat h = Mat::Zero(basis[0].rows(), basis[0].cols());
    for (auto& b : basis) h += cplx(nd(rng), nd(rng)) * b;
    if (hermitian) h = (h + h.adjoint()).eval() / 2.0;
    return h;
}

// orthonormal basis (columns) of the range of a positive semidefinite matrix
Mat range_of_psd(const Mat& p, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<Mat> es(p);
    const RVec& ev = es.eigenvalues();
    double top = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > rel_tol * top) keep.push_back(i);
    Mat V(p.rows(), Eigen::Index(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) V.col(Eigen::Index(k)) = es.eigenvectors().col(keep[k]);
    return V;
}

double spectral_norm(const Mat& a) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues()(0);
}

// incremental HS-orthonormal basis
struct Gram {
    long N;
    std::vector<Vec> q;
    double rel_tol;
    bool add(const Mat& x) {
        Vec v = vec_of(x);
        double n0 = v.norm();
        if (n0 == 0) return false;
        for (int pass = 0; pass < 2; ++pass)
            for (auto& b : q) v -= b * b.dot(v);
        double n1 = v.norm();
        if (n1 <= rel_tol * n0 || n1 < 1e-13) return false;
        q.push_back(v / n1);
        return true;
    }
    OperatorSpace space() const {
        OperatorSpace s;
        s.dim = N;
        for (auto& b : q) s.basis.push_back(unvec(b, N));
        return s;
    }
};

}  // namespace

Mat OperatorSpace::stacked() const {
    Mat S(dim * dim, rank());
    for (int i = 0; i < rank(); ++i) S.col(i) = vec_of(basis[i]);
    return S;
}

Mat OperatorSpace::project(const Mat& x) const {
    Mat r = Mat::Zero(dim, dim);
    for (auto& b : basis) r += hs(b, x) * b;
    return r;
}

bool OperatorSpace::contains(const Mat& x, double tol) const {
    double n = x.norm();
    if (n == 0) return true;
    return (x - project(x)).norm() <= tol * n;
}

OperatorSpace orthonormal_span(const std::vector<Mat>& ops, double rel_tol) {
    OperatorSpace s;
    if (ops.empty()) return s;
    s.dim = ops[0].rows();
    Mat A(s.dim * s.dim, Eigen::Index(ops.size()));
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].rows() != s.dim || ops[i].cols() != s.dim) throw Error("DIM_MISMATCH", "operators differ in size");
        A.col(Eigen::Index(i)) = vec_of(ops[i]);
    }
    Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeThinU);
    const RVec& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0) return s;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) >= rel_tol * sv(0)) s.basis.push_back(unvec(svd.matrixU().col(k), s.dim));
    return s;
}

SpanComparison subspace_equal(const OperatorSpace& U, const OperatorSpace& V, double tol) {
    SpanComparison c;
    c.rank_u = U.rank();
    c.rank_v = V.rank();
    if (c.rank_u == 0 || c.rank_v == 0) {
        c.equal = c.rank_u == c.rank_v;
        c.angle = c.equal ? 0 : M_PI / 2;
        return c;
    }
    Mat QU = U.stacked(), QV = V.stacked();
    // sin of the largest principal angle, measured in both directions
    double s1 = spectral_norm(QV - QU * (QU.adjoint() * QV));
    double s2 = spectral_norm(QU - QV * (QV.adjoint() * QU));
    c.angle = std::asin(std::min(1.0, std::max(s1, s2)));
    if (c.rank_u != c.rank_v) c.angle = M_PI / 2;
    c.equal = c.rank_u == c.rank_v && c.angle < tol;
    return c;
}

VNAlgebra algebra_closure(const std::vector<Mat>& gens, long dim) {
    Gram g{dim, {}, kRankTol};
    std::vector<Mat> all;
    for (auto& x : gens) {
        if (x.rows() != dim || x.cols() != dim) throw Error("DIM_MISMATCH", "generator size");
        all.push_back(x);
        all.push_back(x.adjoint());
    }
    std::vector<Mat> frontier;
    auto push = [&](const Mat& x) {
        if (g.add(x)) frontier.push_back(unvec(g.q.back(), dim));
    };
    push(Mat::Identity(dim, dim));
    for (auto& x : all) push(x);
    while (!frontier.empty()) {
        if (long(g.q.size()) > dim * dim) throw Error("NON_CONVERGED", "closure rank exceeds ambient bound");
        std::vector<Mat> cur;
        cur.swap(frontier);
        for (auto& x : all)
            for (auto& f : cur) push(x * f);
    }
    return {g.space()};
}

Wedderburn wedderburn(const VNAlgebra& A, unsigned seed) {
    const long N = A.dim();
    std::mt19937_64 rng(seed);
    Wedderburn W;
    W.unit = Mat::Identity(N, N);

    // minimal projections, each given by an orthonormal frame V (N x rank)
    std::vector<Mat> minimal;
    std::vector<Mat> todo = {Mat::Identity(N, N)};
    int guard = 0;
    while (!todo.empty()) {
        if (++guard > 4 * N + 16) throw Error("NON_CONVERGED", "minimal projection search");
        Mat V = todo.back();
        todo.pop_back();
        // compressed algebra V^dag A V
        std::vector<Mat> comp;
        for (auto& b : A.basis()) comp.push_back(V.adjoint() * b * V);
        OperatorSpace cs = orthonormal_span(comp);
        // scalar corner: every compressed element is a multiple of 1 up to noise
        bool scalar = cs.rank() <= 1;
        if (!scalar) {
            scalar = true;
            const Mat I = Mat::Identity(V.cols(), V.cols());
            for (auto& c : comp) {
                cplx t = c.trace() / double(V.cols());
                if ((c - t * I).norm() > 1e-8 * std::max(1.0, c.norm())) {
                    scalar = false;
                    break;
                }
            }
        }
        if (scalar) {
            minimal.push_back(V);
            continue;
        }
        Mat h = random_combo(cs.basis, rng, true);
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        const RVec& ev = es.eigenvalues();
        double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
        Eigen::Index start = 0;
        for (Eigen::Index i = 1; i <= ev.size(); ++i) {
            if (i == ev.size() || ev(i) - ev(i - 1) > 1e-7 * scale) {
                todo.push_back(V * es.eigenvectors().middleCols(start, i - start));
                start = i;
            }
        }
    }
    // group minimal projections into blocks using a generic element
    Mat r = random_combo(A.basis(), rng, false);
    const int k = int(minimal.size());
    std::vector<int> block(k, -1);
    int nb = 0;
    for (int i = 0; i < k; ++i) {
        if (block[i] >= 0) continue;
        block[i] = nb;
        for (int j = i + 1; j < k; ++j)
            if (block[j] < 0 && (minimal[j].adjoint() * r * minimal[i]).norm() > 1e-8 * std::max(1.0, r.norm()))
                block[j] = nb;
        ++nb;
    }
    W.blocks.resize(nb);
    for (int b = 0; b < nb; ++b) {
        auto& B = W.blocks[b];
        int first = -1;
        B.central = Mat::Zero(N, N);
        for (int j = 0; j < k; ++j) {
            if (block[j] != b) continue;
            const Mat& Vj = minimal[j];
            B.central += Vj * Vj.adjoint();
            if (first < 0) {
                first = j;
                B.multiplicity = Vj.cols();
                B.units.push_back(Vj * Vj.adjoint());
                continue;
            }
            const Mat& V1 = minimal[first];
            Mat X = Vj.adjoint() * r * V1;
            // X^dag X = lambda 1 for matrix units
            double lam = (X.adjoint() * X).trace().real() / double(X.cols());
            B.units.push_back(Vj * (X / std::sqrt(lam)) * V1.adjoint());
        }
    }
    return W;
}

VNAlgebra commutant(const VNAlgebra& A, std::size_t budget) {
    const long N = A.dim();
    if (std::size_t(N) > budget) throw Error("BUDGET_EXCEEDED", "commutant on dimension " + std::to_string(N));
    Wedderburn W = wedderburn(A);
    OperatorSpace s;
    s.dim = N;
    for (auto& B : W.blocks) {
        const Mat& e11 = B.units[0];
        Mat V1 = range_of_psd(e11, 1e-8);
        const double nrm = std::sqrt(double(B.units.size()));
        for (long a = 0; a < V1.cols(); ++a)
            for (long b = 0; b < V1.cols(); ++b) {
                Mat c = Mat::Zero(N, N);
                Mat ab = V1.col(a) * V1.col(b).adjoint();
                for (auto& e : B.units) c += e * ab * e.adjoint();
                s.basis.push_back(c / nrm);
            }
    }
    return {s};
}

VNAlgebra center(const VNAlgebra& A) {
    Wedderburn W = wedderburn(A);
    std::vector<Mat> z;
    for (auto& B : W.blocks) z.push_back(B.central);
    return {orthonormal_span(z)};
}

Supports support_projections(const VNAlgebra& A, const Mat& rho) {
    const long N = A.dim();
    if (rho.rows() != N) throw Error("DIM_MISMATCH", "density size");
    if ((rho - rho.adjoint()).norm() > 1e-9) throw Error("NOT_A_STATE", "density not hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-9) throw Error("NOT_A_STATE", "density not positive");
    Mat rhoA = A.space.project(rho);
    if (std::abs(rhoA.trace() - 1.0) > 1e-9) throw Error("NOT_A_STATE", "not normalized on the algebra");

    Supports s;
    Mat V = range_of_psd((rhoA + rhoA.adjoint()) / 2.0, 1e-9);
    s.support = V * V.adjoint();

    Wedderburn W = wedderburn(A);
    s.central = Mat::Zero(N, N);
    for (auto& B : W.blocks)
        if ((B.central * s.support).norm() > 1e-8) s.central += B.central;

    // ker pi_phi = {x in A : x a rho^{1/2} = 0 for all a}
    Mat rsq = es.eigenvectors() * es.eigenvalues().cwiseMax(0).cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    Mat P = Mat::Zero(N, N);
    for (auto& a : A.basis()) {
        Mat t = a * rsq;
        P += t * t.adjoint();
    }
    Mat Vr = range_of_psd((P + P.adjoint()) / 2.0, 1e-10);
    Mat proj = Vr * Vr.adjoint();
    Mat L(N * N, A.size());
    for (int i = 0; i < A.size(); ++i) L.col(i) = vec_of(A.basis()[i] * proj);
    Eigen::BDCSVD<Mat> svd(L, Eigen::ComputeFullV);
    const RVec& sv = svd.singularValues();
    double top = std::max(sv.size() ? sv(0) : 0.0, 1e-300);
    Mat K = Mat::Zero(N, N);
    for (Eigen::Index c = 0; c < svd.matrixV().cols(); ++c) {
        double val = c < sv.size() ? sv(c) : 0.0;
        if (val > 1e-9 * top) continue;
        Mat x = Mat::Zero(N, N);
        for (int i = 0; i < A.size(); ++i) x += svd.matrixV()(i, c) * A.basis()[i];
        K += x * x.adjoint();
    }
    Mat Vk = range_of_psd((K + K.adjoint()) / 2.0, 1e-9);
    s.kernel_central = Mat::Identity(N, N) - Vk * Vk.adjoint();
    s.mismatch = (s.central - s.kernel_central).norm();
    return s;
}

GNS gns(const VNAlgebra& A, const Mat& rho) {
    const long N = A.dim();
    const int m = A.size();
    Eigen::SelfAdjointEigenSolver<Mat> er(rho);
    if (er.eigenvalues().minCoeff() < -1e-9) throw Error("NOT_A_STATE", "density not positive");
    Mat rsq = er.eigenvectors() * er.eigenvalues().cwiseMax(0).cwiseSqrt().asDiagonal() * er.eigenvectors().adjoint();
    Mat B(N * N, m);
    for (int i = 0; i < m; ++i) B.col(i) = vec_of(A.basis()[i] * rsq);
    Mat G = B.adjoint() * B;
    Eigen::SelfAdjointEigenSolver<Mat> eg(G);
    double top = std::max(eg.eigenvalues().maxCoeff(), 1e-300);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < eg.eigenvalues().size(); ++k)
        if (eg.eigenvalues()(k) > kRankTol * top) keep.push_back(k);
    Mat C(m, Eigen::Index(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
        C.col(Eigen::Index(k)) = eg.eigenvectors().col(keep[k]) / std::sqrt(eg.eigenvalues()(keep[k]));
    Mat F = B * C;  // GNS basis vectors as vec(a rho^{1/2})
    GNS g;
    g.dim = C.cols();
    g.rep = [F, N](const Mat& x) {
        Mat XF(F.rows(), F.cols());
        for (Eigen::Index l = 0; l < F.cols(); ++l) XF.col(l) = vec_of(x * unvec(F.col(l), N));
        return Mat(F.adjoint() * XF);
    };
    for (auto& a : A.basis()) g.pi.push_back(g.rep(a));
    g.omega = F.adjoint() * vec_of(rsq);
    return g;
}

Mat ModularData::delta_pow(cplx z) const {
    Vec d(spectrum.size());
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) d(i) = std::exp(z * std::log(spectrum(i)));
    return evecs * d.asDiagonal() * evecs.adjoint();
}

Mat ModularData::sigma(const Mat& x, cplx z) const {
    const cplx i(0, 1);
    return delta_pow(i * z) * x * delta_pow(-i * z);
}

Mat ModularData::J_conj(const Mat& x) const { return U * x.conjugate() * U.conjugate(); }

ModularData tomita(const std::vector<Mat>& basis, const Vec& omega, double rel_tol) {
    if (basis.empty()) throw Error("NOT_CYCLIC", "empty algebra");
    const long N = omega.size();
    const long m = long(basis.size());
    Mat W(N, m), Wd(N, m);
    for (long i = 0; i < m; ++i) {
        W.col(i) = basis[i] * omega;
        Wd.col(i) = basis[i].adjoint() * omega;
    }
    Eigen::BDCSVD<Mat> svd(W);
    const RVec& sv = svd.singularValues();
    double top = sv.size() ? sv(0) : 0;
    long rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > rel_tol * top) ++rank;
    if (rank < N) throw Error("NOT_CYCLIC", "A Omega has dimension " + std::to_string(rank) + " < " + std::to_string(N));
    if (rank < m) throw Error("NOT_SEPARATING", "a Omega = 0 for some a != 0");
    ModularData md;
    md.omega = omega;
    // S (W c) = Wd conj(c)
    md.M = Wd * W.inverse().conjugate();
    Mat MM = md.M.adjoint() * md.M;
    MM = (MM + MM.adjoint()).eval() / 2.0;
    md.delta = MM.conjugate();
    Eigen::SelfAdjointEigenSolver<Mat> es(md.delta);
    md.spectrum = es.eigenvalues();
    md.evecs = es.eigenvectors();
    if (md.spectrum.minCoeff() <= 0) throw Error("NOT_SEPARATING", "modular operator not positive");
    Eigen::SelfAdjointEigenSolver<Mat> em(MM);
    Mat inv_sqrt = em.eigenvectors() * em.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                   em.eigenvectors().adjoint();
    md.U = md.M * inv_sqrt;
    return md;
}

Mat CondExpectation::operator()(const Mat& b) const {
    Vec rhs(a_basis.size());
    for (std::size_t i = 0; i < a_basis.size(); ++i) rhs(Eigen::Index(i)) = (rho * a_basis[i].adjoint() * b).trace();
    Vec c = gram_inv * rhs;
    Mat r = Mat::Zero(b.rows(), b.cols());
    for (std::size_t i = 0; i < a_basis.size(); ++i) r += c(Eigen::Index(i)) * a_basis[i];
    return r;
}

CondExpectation cond_expectation(const VNAlgebra& B, const VNAlgebra& A, const Mat& rho) {
    for (auto& a : A.basis())
        if (!B.space.contains(a, 1e-8)) throw Error("NOT_SUBALGEBRA", "A is not inside B");
    if (!A.space.contains(Mat::Identity(A.dim(), A.dim()), 1e-8)) throw Error("NOT_SUBALGEBRA", "A is not unital");
    Mat rhoB = B.space.project(rho);
    rhoB = (rhoB + rhoB.adjoint()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(rhoB);
    // faithful on B: rho_B invertible on the unit of B (B is unital here)
    if (es.eigenvalues().minCoeff() <= 1e-12) throw Error("NOT_FAITHFUL", "state is not faithful on B");

    CondExpectation E;
    E.a_basis = A.basis();
    E.rho = rhoB;
    const long m = long(E.a_basis.size());
    Mat G(m, m);
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j) G(i, j) = (rhoB * E.a_basis[i].adjoint() * E.a_basis[j]).trace();
    E.gram_inv = G.inverse();

    // sigma_t(x) = rho^{it} x rho^{-it} must keep A inside A
    const double ts[] = {-1.3, 0.4, 1.7};
    for (double t : ts) {
        Vec d(es.eigenvalues().size()), di(es.eigenvalues().size());
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            d(i) = std::exp(cplx(0, t) * std::log(es.eigenvalues()(i)));
            di(i) = 1.0 / d(i);
        }
        Mat u = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
        Mat ui = es.eigenvectors() * di.asDiagonal() * es.eigenvectors().adjoint();
        for (auto& a : E.a_basis) {
            Mat s = u * a * ui;
            E.invariance_residual = std::max(E.invariance_residual, (s - A.space.project(s)).norm());
        }
    }
    if (E.invariance_residual > 1e-8)
        throw Error("NOT_MODULAR_INVARIANT", "modular flow moves A, residual " + std::to_string(E.invariance_residual));
    return E;
}

}  // namespace lto
