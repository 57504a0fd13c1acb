#pragma once

// Boundary algebras End(X^{(x)n}) of a fusion category, X the sum of all
// simples, realized on the left-canonical fusion path basis. Only fusion
// rules and quantum dimensions enter; no F-symbols are needed.

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lto/common.hpp"

namespace lto {

struct FusionCategory {
    std::string name;
    std::vector<std::string> labels;
    int unit = 0;
    std::vector<int> dual;
    std::vector<std::vector<std::vector<int>>> N;  // N[a][b][c] = N^c_{ab}
    std::vector<double> d;
    double D = 1;  // global dimension sum d_a^2

    int rank() const { return int(labels.size()); }
    static FusionCategory vec_zn(int n);
    static FusionCategory fibonacci();
    static FusionCategory ising();
    // {labels, unit, dual, N:[a][b][c], dims?}; dims recomputed when absent
    static FusionCategory from_json(const nlohmann::json& j);
    static FusionCategory named(const std::string& name);  // vec_z<N>, fibonacci, ising
};

// Throws INVALID_FUSION_DATA naming the failed identity.
void validate(const FusionCategory& C);
FusionCategory build_category(const std::string& name);

struct FusionStep {
    int x = 0, mu = 0, c = 0;
    auto operator<=>(const FusionStep&) const = default;
};
using FusionPath = std::vector<FusionStep>;  // starts at the unit

struct PathBasis {
    int n = 0;
    std::vector<FusionPath> paths;               // lexicographic order
    std::vector<int> charge;                     // end charge of each path
    std::vector<std::vector<int>> by_charge;     // path indices per charge
    int size() const { return int(paths.size()); }
    int m(int c) const { return int(by_charge[c].size()); }
    long algebra_dim() const;
};
PathBasis path_basis(const FusionCategory& C, int n);

// Elements of B_n are N x N matrices (N = number of paths) vanishing between
// paths of different end charge. Sector of a path = its edge labels.
class PathAlgebra {
public:
    PathAlgebra(const FusionCategory& C, int n);
    const FusionCategory& category() const { return C_; }
    const PathBasis& paths() const { return pb_; }
    int n() const { return pb_.n; }
    int N() const { return pb_.size(); }
    double weight(int p) const { return w_[p]; }  // product of d over edge labels
    double charge_dim(int p) const { return C_.d[pb_.charge[p]]; }

    std::vector<Mat> basis() const;  // matrix units E_pq, same charge
    bool contains(const Mat& x, double tol = 1e-12) const;
    Mat random(unsigned seed) const;

    cplx trace(const Mat& x) const;   // spherical trace
    cplx psi(const Mat& x) const;     // canonical state
    cplx omega(const Mat& x) const;   // weight
    Mat psi_density() const;          // psi(x) = Tr(rho x)

    // phi (x) id_X from B_{n-1}
    Mat embed(const Mat& phi) const;

private:
    FusionCategory C_;
    PathBasis pb_;
    std::vector<double> w_;
};

// Standard form H_n. Vectors f are algebra-shaped; coords() maps them to
// orthonormal coordinates indexed by same-charge pairs (p,q).
class SkeinSpace {
public:
    explicit SkeinSpace(const PathAlgebra& A);
    const PathAlgebra& algebra() const { return A_; }
    long dim() const { return long(pairs_.size()); }

    cplx inner(const Mat& f, const Mat& g) const;
    Vec coords(const Mat& f) const;
    Mat element(const Vec& u) const;
    Mat omega_vector() const { return Mat::Identity(A_.N(), A_.N()); }

    Mat gamma(const Mat& phi) const;        // post-composition, on coords
    Mat gamma_tilde(const Mat& phi) const;  // pre-composition, on coords
    Mat J_matrix() const;                   // J u = J_matrix conj(u)
    RVec delta_omega() const;               // diagonal of Delta_omega on coords

    // sigma on B_n: E_pq -> (w_p/w_q)^{it} E_pq for psi, inverse ratio for omega
    Mat sigma_psi(const Mat& phi, cplx t) const;
    Mat sigma_omega(const Mat& phi, cplx t) const;

private:
    const PathAlgebra& A_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<std::vector<int>> index_;  // index_[p][q], -1 if charges differ
    std::vector<double> scale_;            // orthonormal coordinate scale
};

// E^n_{n-1} as iota^*(.)iota; checks modular invariance of the embedded B_{n-1}.
struct BoundaryCondExp {
    int n = 0;
    std::function<Mat(const Mat&)> apply;  // B_n -> B_{n-1} (matrix on n-1 paths)
    double invariance_residual = 0;
};
BoundaryCondExp boundary_cond_exp(const PathAlgebra& Bn, const PathAlgebra& Bm);

}  // namespace lto
