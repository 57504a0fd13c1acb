#pragma once

#include <optional>
#include <vector>

#include "lto/fusion_skein.hpp"
#include "lto/lattice.hpp"
#include "lto/models.hpp"
#include "lto/report.hpp"
#include "lto/stabilizer_net.hpp"
#include "lto/vn_toolkit.hpp"

namespace lto {

struct CheckOptions {
    int s = 1;  // surround margin
    int r = 2;  // sufficient-largeness constant, recorded only
    double tol = kTol;
    double angle_tol = kAngleTol;
    std::size_t budget = kDenseBudget;
};

// Rectangles inside the patch with R <<_s rect.
std::vector<Region> surrounding_rects(const Model& m, const Region& R, int s);
// S followed by every patch rectangle containing S that weakly surrounds R
// along the same interval.
std::vector<Region> enlargements(const Model& m, const Region& R, const Region& S, int s);

// psi(x) = Tr(p_S x)/Tr(p_S), evaluated for several S with R <<_s S.
// NO_SURROUNDING_REGION when fewer than two are available.
struct StateValue {
    cplx value = 0;
    double spread = 0;  // max difference across the S used
    std::vector<Region> used;
};
StateValue canonical_state(const StabilizerNet& net, const Pauli& x, const Region& R, int s = 1);
StateValue canonical_state_dense(const Model& m, const Mat& x, const std::vector<int>& qudits, const Region& R,
                                 int s = 1);

CheckReport check_lto1(const StabilizerNet& net, const Region& R, const Region& S, const CheckOptions& o = {});
CheckReport check_lto1_dense(const Model& m, const Region& R, const Region& S, const CheckOptions& o = {});

struct BoundaryAlgebra {
    Interval I;
    std::vector<GVec> W;  // Pauli vectors y with y p_S in B(R << S)
    std::vector<Region> enlargements;
    std::shared_ptr<const PauliGroup> GR, GS;
    int log_dim = 0;  // log_p of dim B(R << S)
};
std::pair<BoundaryAlgebra, CheckReport> extract_boundary_algebra(const StabilizerNet& net, const Region& R,
                                                                 const Region& S, const CheckOptions& o = {},
                                                                 std::vector<Region> enl = {});

// LTO3 for R1 c R2 << S1, LTO4 for R1 << S1 c S2.
CheckReport check_lto3_lto4(const StabilizerNet& net, const Region& R1, const Region& R2, const Region& S1,
                            const Region& S2, const CheckOptions& o = {});

CheckReport check_hd(const StabilizerNet& net, const Region& R, const Region& S, const CheckOptions& o = {});
CheckReport check_hd_dense(const Model& m, const Region& R, const Region& S, const CheckOptions& o = {});

// The boundary algebra p_{S+} A(R+) p_{S+} as a twisted group algebra with
// the canonical state and its modular data.
struct BoundaryModular {
    std::unique_ptr<CosetBasis> basis;  // e_u = y_u p_{S+}
    std::vector<Mat> left;              // left regular representation
    Vec psi;                            // psi(e_u)
    Mat T;                              // Gram^{1/2}
    ModularData md;
    Mat sigma_half;  // coefficient map of sigma_{-i/2}
    bool tracial = false;
    Supports supports;
};
BoundaryModular boundary_modular(const StabilizerNet& net, const Region& Rp, const Region& Sp, const Region& S);

CheckReport check_rp(const StabilizerNet& net, const Region& R, const Region& S, const CheckOptions& o = {});

// Finite Haag duality on the compressed space span{y p_S : y in A(R+)}.
CheckReport check_finite_haag(const StabilizerNet& net, const Region& Rp, const Region& Rm, const Region& S,
                              const CheckOptions& o = {});
CheckReport check_finite_haag_skein(const FusionCategory& C, int n, const CheckOptions& o = {});

CheckReport check_product_state(const StabilizerNet& net, const Region& R1, const Region& R2,
                                const CheckOptions& o = {});

CheckReport interaction_algebra(const StabilizerNet& net, const Region& R, const Region& S,
                                const CheckOptions& o = {});
CheckReport os_map_check(const StabilizerNet& net, const Region& R, const Region& S, const CheckOptions& o = {});

// perturb flips the phase of one straddling generator (negative control)
CheckReport check_rp_hamiltonian(const Model& m, bool perturb = false, const CheckOptions& o = {});

// skein-level identities
CheckReport check_skein_modular(const FusionCategory& C, int n, const CheckOptions& o = {});
CheckReport check_cond_exp(const FusionCategory& C, int n, const CheckOptions& o = {});

}  // namespace lto
