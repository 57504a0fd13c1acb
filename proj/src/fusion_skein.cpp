#include "lto/fusion_skein.hpp"

#include <cmath>
#include <map>
#include <random>

#include <Eigen/Eigenvalues>

#include "lto/vn_toolkit.hpp"

namespace lto {

namespace {

FusionCategory from_rules(std::string name, std::vector<std::string> labels, std::vector<int> dual,
                          std::vector<std::vector<std::vector<int>>> N) {
    FusionCategory C;
    C.name = std::move(name);
    C.labels = std::move(labels);
    C.dual = std::move(dual);
    C.N = std::move(N);
    C.unit = 0;
    return C;
}

// Perron-Frobenius data: common eigenvector of the fusion matrices, unit entry 1
std::vector<double> pf_dims(const FusionCategory& C) {
    const int r = C.rank();
    RMat M = RMat::Zero(r, r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c) M(c, b) += C.N[a][b][c];
    RVec v = RVec::Ones(r);
    for (int it = 0; it < 2000; ++it) {
        RVec w = M * v + v;  // shift keeps the iteration aperiodic
        w /= w.norm();
        if ((w - v).norm() < 1e-15) {
            v = w;
            break;
        }
        v = w;
    }
    std::vector<double> d(r);
    for (int a = 0; a < r; ++a) d[a] = v(a) / v(C.unit);
    return d;
}

void finish(FusionCategory& C) {
    if (C.d.empty()) C.d = pf_dims(C);
    C.D = 0;
    for (double x : C.d) C.D += x * x;
    validate(C);
}

}  // namespace

FusionCategory FusionCategory::vec_zn(int n) {
    if (n < 1) throw Error("INVALID_FUSION_DATA", "Vec(Z/n) needs n >= 1");
    std::vector<std::string> labels;
    std::vector<int> dual(n);
    std::vector<std::vector<std::vector<int>>> N(n, std::vector<std::vector<int>>(n, std::vector<int>(n, 0)));
    for (int a = 0; a < n; ++a) {
        labels.push_back(std::to_string(a));
        dual[a] = (n - a) % n;
        for (int b = 0; b < n; ++b) N[a][b][(a + b) % n] = 1;
    }
    auto C = from_rules("vec_z" + std::to_string(n), labels, dual, N);
    C.d.assign(n, 1.0);
    finish(C);
    return C;
}

FusionCategory FusionCategory::fibonacci() {
    std::vector<std::vector<std::vector<int>>> N = {{{1, 0}, {0, 1}}, {{0, 1}, {1, 1}}};
    auto C = from_rules("fibonacci", {"1", "tau"}, {0, 1}, N);
    C.d = {1.0, (1.0 + std::sqrt(5.0)) / 2.0};
    finish(C);
    return C;
}

FusionCategory FusionCategory::ising() {
    // labels 1, sigma, psi
    std::vector<std::vector<std::vector<int>>> N(3, std::vector<std::vector<int>>(3, std::vector<int>(3, 0)));
    for (int a = 0; a < 3; ++a) N[0][a][a] = N[a][0][a] = 1;
    N[1][1][0] = N[1][1][2] = 1;
    N[1][2][1] = N[2][1][1] = 1;
    N[2][2][0] = 1;
    auto C = from_rules("ising", {"1", "sigma", "psi"}, {0, 1, 2}, N);
    C.d = {1.0, std::sqrt(2.0), 1.0};
    finish(C);
    return C;
}

FusionCategory FusionCategory::from_json(const nlohmann::json& j) {
    FusionCategory C;
    try {
        C.name = j.value("name", "custom");
        C.labels = j.at("labels").get<std::vector<std::string>>();
        const int r = int(C.labels.size());
        auto lookup = [&](const nlohmann::json& v) {
            if (v.is_number_integer()) return v.get<int>();
            auto s = v.get<std::string>();
            for (int a = 0; a < r; ++a)
                if (C.labels[a] == s) return a;
            throw Error("INVALID_FUSION_DATA", "unknown label " + s);
        };
        C.unit = lookup(j.at("unit"));
        for (auto& v : j.at("dual")) C.dual.push_back(lookup(v));
        C.N = j.at("N").get<std::vector<std::vector<std::vector<int>>>>();
        if (j.contains("dims")) C.d = j["dims"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error("INVALID_FUSION_DATA", std::string("malformed category: ") + e.what());
    }
    const int r = C.rank();
    if (int(C.dual.size()) != r || int(C.N.size()) != r) throw Error("INVALID_FUSION_DATA", "shape mismatch");
    for (auto& row : C.N) {
        if (int(row.size()) != r) throw Error("INVALID_FUSION_DATA", "shape mismatch");
        for (auto& v : row)
            if (int(v.size()) != r) throw Error("INVALID_FUSION_DATA", "shape mismatch");
    }
    if (!C.d.empty() && int(C.d.size()) != r) throw Error("INVALID_FUSION_DATA", "dims length");
    finish(C);
    return C;
}

FusionCategory FusionCategory::named(const std::string& name) {
    if (name == "fibonacci" || name == "fib") return fibonacci();
    if (name == "ising") return ising();
    if (name.rfind("vec_z", 0) == 0) return vec_zn(std::stoi(name.substr(5)));
    throw Error("INVALID_FUSION_DATA", "unknown category " + name);
}

FusionCategory build_category(const std::string& name) { return FusionCategory::named(name); }

void validate(const FusionCategory& C) {
    const int r = C.rank();
    auto fail = [](const std::string& what) { throw Error("INVALID_FUSION_DATA", what); };
    if (r == 0) fail("no simple objects");
    if (C.unit < 0 || C.unit >= r) fail("unit out of range");
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c)
                if (C.N[a][b][c] < 0) fail("negative multiplicity");
    for (int a = 0; a < r; ++a)
        for (int c = 0; c < r; ++c)
            if (C.N[C.unit][a][c] != (a == c) || C.N[a][C.unit][c] != (a == c)) fail("unit: N^c_{1a} = delta_{ac}");
    for (int a = 0; a < r; ++a) {
        if (C.dual[a] < 0 || C.dual[a] >= r) fail("dual out of range");
        for (int b = 0; b < r; ++b)
            if (C.N[a][b][C.unit] != (b == C.dual[a])) fail("duality: N^1_{ab} = delta_{b, dual a}");
    }
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c)
                for (int d = 0; d < r; ++d) {
                    long l = 0, rr = 0;
                    for (int e = 0; e < r; ++e) {
                        l += long(C.N[a][b][e]) * C.N[e][c][d];
                        rr += long(C.N[a][e][d]) * C.N[b][c][e];
                    }
                    if (l != rr) fail("associativity of fusion rules");
                }
    for (int a = 0; a < r; ++a)
        if (!(C.d[a] > 0)) fail("dimensions must be positive");
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            double s = 0;
            for (int c = 0; c < r; ++c) s += C.N[a][b][c] * C.d[c];
            if (std::abs(s - C.d[a] * C.d[b]) > 1e-9 * std::max(1.0, s)) fail("dimension homomorphism d_a d_b = sum N d_c");
        }
}

long PathBasis::algebra_dim() const {
    long s = 0;
    for (auto& b : by_charge) s += long(b.size()) * long(b.size());
    return s;
}

PathBasis path_basis(const FusionCategory& C, int n) {
    if (n < 0) throw Error("DIM_MISMATCH", "negative length");
    PathBasis pb;
    pb.n = n;
    std::vector<FusionPath> cur = {{}};
    std::vector<int> end = {C.unit};
    for (int k = 0; k < n; ++k) {
        std::vector<FusionPath> nxt;
        std::vector<int> ne;
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (int x = 0; x < C.rank(); ++x)
                for (int c = 0; c < C.rank(); ++c)
                    for (int mu = 0; mu < C.N[end[i]][x][c]; ++mu) {
                        auto p = cur[i];
                        p.push_back({x, mu, c});
                        nxt.push_back(std::move(p));
                        ne.push_back(c);
                    }
        cur.swap(nxt);
        end.swap(ne);
    }
    // lexicographic in (x, mu, c) per step
    std::vector<int> order(cur.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return cur[a] < cur[b]; });
    pb.by_charge.assign(C.rank(), {});
    for (int i : order) {
        pb.by_charge[end[i]].push_back(int(pb.paths.size()));
        pb.paths.push_back(cur[i]);
        pb.charge.push_back(end[i]);
    }
    return pb;
}

PathAlgebra::PathAlgebra(const FusionCategory& C, int n) : C_(C), pb_(path_basis(C, n)) {
    for (auto& p : pb_.paths) {
        double w = 1;
        for (auto& s : p) w *= C_.d[s.x];
        w_.push_back(w);
    }
}

std::vector<Mat> PathAlgebra::basis() const {
    std::vector<Mat> out;
    for (auto& blk : pb_.by_charge)
        for (int p : blk)
            for (int q : blk) {
                Mat e = Mat::Zero(N(), N());
                e(p, q) = 1;
                out.push_back(std::move(e));
            }
    return out;
}

bool PathAlgebra::contains(const Mat& x, double tol) const {
    for (int p = 0; p < N(); ++p)
        for (int q = 0; q < N(); ++q)
            if (pb_.charge[p] != pb_.charge[q] && std::abs(x(p, q)) > tol) return false;
    return true;
}

Mat PathAlgebra::random(unsigned seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Mat x = Mat::Zero(N(), N());
    for (int p = 0; p < N(); ++p)
        for (int q = 0; q < N(); ++q)
            if (pb_.charge[p] == pb_.charge[q]) x(p, q) = cplx(nd(rng), nd(rng));
    return x;
}

cplx PathAlgebra::trace(const Mat& x) const {
    cplx s = 0;
    for (int p = 0; p < N(); ++p) s += charge_dim(p) * x(p, p);
    return s;
}

cplx PathAlgebra::psi(const Mat& x) const {
    cplx s = 0;
    for (int p = 0; p < N(); ++p) s += w_[p] * charge_dim(p) * x(p, p);
    return s / std::pow(C_.D, n());
}

cplx PathAlgebra::omega(const Mat& x) const {
    cplx s = 0;
    for (int p = 0; p < N(); ++p) s += charge_dim(p) / w_[p] * x(p, p);
    return s;
}

Mat PathAlgebra::psi_density() const {
    Mat r = Mat::Zero(N(), N());
    for (int p = 0; p < N(); ++p) r(p, p) = w_[p] * charge_dim(p) / std::pow(C_.D, n());
    return r;
}

Mat PathAlgebra::embed(const Mat& phi) const {
    if (n() == 0) throw Error("DIM_MISMATCH", "no B_{-1}");
    PathBasis prev = path_basis(C_, n() - 1);
    if (phi.rows() != prev.size()) throw Error("DIM_MISMATCH", "embedding source size");
    std::map<FusionPath, int> idx;
    for (int i = 0; i < prev.size(); ++i) idx[prev.paths[i]] = i;
    Mat out = Mat::Zero(N(), N());
    for (int p = 0; p < N(); ++p)
        for (int q = 0; q < N(); ++q) {
            const auto& a = pb_.paths[p];
            const auto& b = pb_.paths[q];
            if (a.back() != b.back()) continue;
            FusionPath ap(a.begin(), a.end() - 1), bp(b.begin(), b.end() - 1);
            out(p, q) = phi(idx.at(ap), idx.at(bp));
        }
    return out;
}

SkeinSpace::SkeinSpace(const PathAlgebra& A) : A_(A) {
    const int N = A.N();
    index_.assign(N, std::vector<int>(N, -1));
    const auto& ch = A.paths().charge;
    for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q)
            if (ch[p] == ch[q]) {
                index_[p][q] = int(pairs_.size());
                pairs_.push_back({p, q});
                // <f|g> = sum d_c (w_p w_q)^{-1/2} conj(f_pq) g_pq
                scale_.push_back(std::sqrt(A.charge_dim(p)) * std::pow(A.weight(p) * A.weight(q), -0.25));
            }
}

cplx SkeinSpace::inner(const Mat& f, const Mat& g) const {
    cplx s = 0;
    for (auto [p, q] : pairs_)
        s += A_.charge_dim(p) / std::sqrt(A_.weight(p) * A_.weight(q)) * std::conj(f(p, q)) * g(p, q);
    return s;
}

Vec SkeinSpace::coords(const Mat& f) const {
    Vec u(dim());
    for (long k = 0; k < dim(); ++k) u(k) = scale_[k] * f(pairs_[k].first, pairs_[k].second);
    return u;
}

Mat SkeinSpace::element(const Vec& u) const {
    Mat f = Mat::Zero(A_.N(), A_.N());
    for (long k = 0; k < dim(); ++k) f(pairs_[k].first, pairs_[k].second) = u(k) / scale_[k];
    return f;
}

Mat SkeinSpace::gamma(const Mat& phi) const {
    // (Gamma_phi f)_pq = sum_r (w_p / w_r)^{1/4} phi_pr f_rq
    Mat G = Mat::Zero(dim(), dim());
    for (long k = 0; k < dim(); ++k) {
        auto [r, q] = pairs_[k];
        for (int p = 0; p < A_.N(); ++p) {
            int o = index_[p][q];
            if (o < 0 || phi(p, r) == 0.0) continue;
            G(o, k) += scale_[o] * std::pow(A_.weight(p) / A_.weight(r), 0.25) * phi(p, r) / scale_[k];
        }
    }
    return G;
}

Mat SkeinSpace::gamma_tilde(const Mat& phi) const {
    // (Gamma~_phi f)_pq = sum_r f_pr phi_rq (w_q / w_r)^{1/4}
    Mat G = Mat::Zero(dim(), dim());
    for (long k = 0; k < dim(); ++k) {
        auto [p, r] = pairs_[k];
        for (int q = 0; q < A_.N(); ++q) {
            int o = index_[p][q];
            if (o < 0 || phi(r, q) == 0.0) continue;
            G(o, k) += scale_[o] * phi(r, q) * std::pow(A_.weight(q) / A_.weight(r), 0.25) / scale_[k];
        }
    }
    return G;
}

Mat SkeinSpace::J_matrix() const {
    // J f = f^dagger
    Mat P = Mat::Zero(dim(), dim());
    for (long k = 0; k < dim(); ++k) {
        auto [p, q] = pairs_[k];
        int o = index_[q][p];
        P(o, k) = scale_[o] / scale_[k];
    }
    return P;
}

RVec SkeinSpace::delta_omega() const {
    // sector a (columns) -> b (rows): multiply by d_a / d_b
    RVec d(dim());
    for (long k = 0; k < dim(); ++k) d(k) = A_.weight(pairs_[k].second) / A_.weight(pairs_[k].first);
    return d;
}

Mat SkeinSpace::sigma_psi(const Mat& phi, cplx t) const {
    Mat r = phi;
    for (int p = 0; p < A_.N(); ++p)
        for (int q = 0; q < A_.N(); ++q)
            if (r(p, q) != 0.0) r(p, q) *= std::exp(cplx(0, 1) * t * std::log(A_.weight(p) / A_.weight(q)));
    return r;
}

Mat SkeinSpace::sigma_omega(const Mat& phi, cplx t) const {
    Mat r = phi;
    for (int p = 0; p < A_.N(); ++p)
        for (int q = 0; q < A_.N(); ++q)
            if (r(p, q) != 0.0) r(p, q) *= std::exp(cplx(0, 1) * t * std::log(A_.weight(q) / A_.weight(p)));
    return r;
}

BoundaryCondExp boundary_cond_exp(const PathAlgebra& Bn, const PathAlgebra& Bm) {
    if (Bm.n() + 1 != Bn.n()) throw Error("DIM_MISMATCH", "expectation needs consecutive n");
    VNAlgebra B{orthonormal_span(Bn.basis())};
    std::vector<Mat> emb;
    for (auto& e : Bm.basis()) emb.push_back(Bn.embed(e));
    VNAlgebra A{orthonormal_span(emb)};
    auto E = std::make_shared<CondExpectation>(cond_expectation(B, A, Bn.psi_density()));

    // read back B_{n-1} entries through the unit step (x = 1, c unchanged)
    const auto& C = Bn.category();
    std::map<FusionPath, int> idx;
    for (int i = 0; i < Bn.N(); ++i) idx[Bn.paths().paths[i]] = i;
    std::vector<int> lift(Bm.N());
    for (int i = 0; i < Bm.N(); ++i) {
        FusionPath p = Bm.paths().paths[i];
        p.push_back({C.unit, 0, Bm.paths().charge[i]});
        lift[i] = idx.at(p);
    }
    BoundaryCondExp out;
    out.n = Bn.n();
    out.invariance_residual = E->invariance_residual;
    const int M = Bm.N();
    out.apply = [E, lift, M](const Mat& b) {
        Mat e = (*E)(b);
        Mat r(M, M);
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j) r(i, j) = e(lift[i], lift[j]);
        return r;
    };
    return out;
}

}  // namespace lto
