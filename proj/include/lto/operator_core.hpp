#pragma once

#include <vector>

#include <Eigen/Sparse>
#include <json.hpp>

#include "lto/common.hpp"
#include "lto/pauli.hpp"

namespace lto {

using SpMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor, long>;

// Ordered tensor factors. The first factor is the most significant digit of
// the computational-basis index.
struct ProductSpace {
    std::vector<int> ids;
    std::vector<int> dims;

    ProductSpace() = default;
    ProductSpace(std::vector<int> ids_, std::vector<int> dims_);
    static ProductSpace uniform(int n, int d);

    std::size_t total() const;  // throws BUDGET_EXCEEDED on overflow
    int position(int id) const;  // -1 if absent
    std::size_t size() const { return ids.size(); }
};

struct SparseOperator {
    ProductSpace space;
    SpMat m;
    bool hermitian = false;
    bool projection = false;

    long dim() const { return m.rows(); }
    Mat dense() const { return Mat(m); }
    nlohmann::json to_json() const;
    static SparseOperator from_json(const nlohmann::json& j, ProductSpace sp = {});
};

struct SchmidtDecomposition {
    std::vector<Mat> left;   // orthonormal in the Hilbert-Schmidt inner product
    std::vector<Mat> right;  // orthonormal as well
    std::vector<double> sv;  // x = sum sv_j left_j (x) right_j
};

// op (x) identity elsewhere; support lists site ids of space in op's order.
SparseOperator embed_local(const Mat& op, const std::vector<int>& support, const ProductSpace& space);
SparseOperator embed_pauli(const Pauli& P, const std::vector<int>& sites, const ProductSpace& space);

// Projection onto the intersection of the ranges of pairwise commuting projections.
SparseOperator range_projection(const std::vector<SparseOperator>& ps, double tol = kTol);

// Keeps the listed site ids, in the order they appear in x.space.
SparseOperator partial_trace(const SparseOperator& x, const std::vector<int>& keep);

// x on space, minus = site ids on the left factor, the rest on the right.
SchmidtDecomposition operator_schmidt(const Mat& x, const ProductSpace& space,
                                      const std::vector<int>& minus, double rel_tol = kRankTol);

// Operator norm estimate used for tolerance checks (max of Frobenius-based
// bound and exact norm for small matrices).
double op_norm(const SpMat& a);
double max_abs(const SpMat& a);

// Orthonormal basis of the range of a projection, found from p applied to
// coordinate vectors. Used to compress operators y p as y V.
Mat range_basis(const SpMat& p, double tol = kTol);

}  // namespace lto
