#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lto {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Tolerances shared by every module. Rank decisions are relative to the
// largest singular value, operator identities are absolute.
inline constexpr double kTol = 1e-9;
inline constexpr double kRankTol = 1e-8;
inline constexpr double kAngleTol = 1e-8;
inline constexpr std::size_t kDenseBudget = 4096;

// Every failure the library reports carries one of the error codes used in
// reports and by the CLI (DIM_MISMATCH, NOT_COMMUTING, ...).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

inline Vec vec_of(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }
inline Mat unvec(const Vec& v, Eigen::Index rows) {
    return Eigen::Map<const Mat>(v.data(), rows, v.size() / rows);
}

// Hilbert-Schmidt inner product Tr(a^† b).
inline cplx hs(const Mat& a, const Mat& b) { return (a.adjoint() * b).trace(); }

}  // namespace lto
