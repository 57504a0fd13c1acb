#pragma once

// Finite-dimensional von Neumann algebras acting on C^N. Operators are dense
// matrices; operator spaces carry a Hilbert-Schmidt orthonormal basis.

#include <functional>
#include <optional>
#include <vector>

#include "lto/common.hpp"

namespace lto {

struct OperatorSpace {
    long dim = 0;  // ambient Hilbert space dimension N
    std::vector<Mat> basis;
    int rank() const { return int(basis.size()); }
    // basis as columns of an N^2 x rank matrix
    Mat stacked() const;
    // HS-orthogonal projection of x onto the space
    Mat project(const Mat& x) const;
    bool contains(const Mat& x, double tol = 1e-8) const;
};

OperatorSpace orthonormal_span(const std::vector<Mat>& ops, double rel_tol = kRankTol);

struct SpanComparison {
    bool equal = false;
    double angle = 0;  // largest principal angle, radians
    int rank_u = 0, rank_v = 0;
};
SpanComparison subspace_equal(const OperatorSpace& U, const OperatorSpace& V, double tol = kAngleTol);

struct VNAlgebra {
    OperatorSpace space;
    long dim() const { return space.dim; }
    int size() const { return space.rank(); }
    const std::vector<Mat>& basis() const { return space.basis; }
};

// Smallest unital *-closed span containing gens. NON_CONVERGED on runaway.
VNAlgebra algebra_closure(const std::vector<Mat>& gens, long dim);

// Block structure of a *-algebra: minimal projections grouped by block and
// matrix units e_{j1} inside each block.
struct Wedderburn {
    struct Block {
        std::vector<Mat> units;  // e_{j1}, j = 0..n-1; e_{11} = minimal projection
        long multiplicity = 0;   // rank of each minimal projection
        Mat central;             // block unit
    };
    std::vector<Block> blocks;
    Mat unit;  // unit of the algebra (may be < 1 for non-unital inputs)
};
Wedderburn wedderburn(const VNAlgebra& A, unsigned seed = 7);

VNAlgebra commutant(const VNAlgebra& A, std::size_t budget = kDenseBudget);
VNAlgebra center(const VNAlgebra& A);

// phi(x) = Tr(rho x)
struct Supports {
    Mat support;        // [phi]
    Mat central;        // z([phi])
    Mat kernel_central; // z_phi = 1 - unit of ker(pi_phi)
    double mismatch = 0;  // || z([phi]) - z_phi ||
};
Supports support_projections(const VNAlgebra& A, const Mat& rho);

struct GNS {
    std::vector<Mat> pi;  // representation of the algebra basis
    Vec omega;
    long dim = 0;
    // representation of an arbitrary element of the algebra
    std::function<Mat(const Mat&)> rep;
};
GNS gns(const VNAlgebra& A, const Mat& rho);

struct ModularData {
    Vec omega;
    Mat M;        // S v = M conj(v)
    Mat delta;    // positive
    RVec spectrum;
    Mat evecs;    // delta = evecs diag(spectrum) evecs^†
    Mat U;        // J v = U conj(v)

    Mat delta_pow(cplx z) const;
    // sigma_z(x) = Delta^{iz} x Delta^{-iz}; z = -i/2 gives Delta^{1/2} x Delta^{-1/2}
    Mat sigma(const Mat& x, cplx z) const;
    Mat J_conj(const Mat& x) const;  // J x J
    Vec J(const Vec& v) const { return U * v.conjugate(); }
    Vec S(const Vec& v) const { return M * v.conjugate(); }
};
// NOT_CYCLIC / NOT_SEPARATING when Omega is not standard for span(basis)
ModularData tomita(const std::vector<Mat>& basis, const Vec& omega, double rel_tol = kRankTol);

struct CondExpectation {
    std::vector<Mat> a_basis;  // basis of A (HS orthonormal)
    Mat gram_inv;              // inverse Gram matrix of a_basis under phi
    Mat rho;
    Mat operator()(const Mat& b) const;
    double invariance_residual = 0;  // max over sampled t of sigma_t(A) outside A
};
// E = iota^* (.) iota for iota: L^2(A,phi) -> L^2(B,phi).
CondExpectation cond_expectation(const VNAlgebra& B, const VNAlgebra& A, const Mat& rho);

}  // namespace lto
