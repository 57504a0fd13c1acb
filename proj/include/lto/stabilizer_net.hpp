#pragma once

// Exact ground-space calculus for models whose terms are averages over
// powers of a Pauli generator. With G_S the group generated by the terms in
// S, p_S is the average over G_S, and for a Pauli y
//   p_S y p_S = y p_S   if y commutes with G_S,   0 otherwise,
//   y p_S and y' p_S are proportional iff y - y' lies in span(G_S),
// and are Hilbert-Schmidt orthogonal otherwise. Operator spans of the form
// span{y p_S : y in W} are therefore determined by the GF(p) subspace
// W + span(G_S), and span equalities become subspace equalities.

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "lto/models.hpp"
#include "lto/pauli.hpp"

namespace lto {

class StabilizerNet {
public:
    explicit StabilizerNet(const Model& m);
    const Model& model() const { return m_; }
    int p() const { return m_.p; }
    int nq() const { return m_.nq(); }

    std::shared_ptr<const PauliGroup> group(const Region& R) const;
    // unit X and Z vectors on the qudits of R
    std::vector<GVec> local_basis(const Region& R) const;
    std::vector<GVec> local_basis(const std::vector<int>& qudits) const;
    // all Paulis X^a Z^b (phase 0) on the qudits of R
    std::vector<Pauli> pauli_basis(const Region& R) const;

private:
    const Model& m_;
    mutable std::mutex mu_;
    mutable std::map<std::string, std::shared_ptr<const PauliGroup>> cache_;
};

// Elements of span(W) commuting with every generator of the listed groups.
std::vector<GVec> commuting_subspace(int p, const std::vector<GVec>& W,
                                     const std::vector<const PauliGroup*>& groups);
std::vector<GVec> commuting_subspace(int p, const std::vector<GVec>& W, const std::vector<Pauli>& ops);

// W + span(G)
Echelon with_group(const std::vector<GVec>& W, const PauliGroup& G);
// dim (W + span G) / span G, i.e. log_p of the number of independent y p_G
int coset_dim(const std::vector<GVec>& W, const PauliGroup& G);
bool same_image(const std::vector<GVec>& W1, const std::vector<GVec>& W2, const PauliGroup& G);

// Tr(p_S P) / Tr(p_S) for the group of S.
cplx expectation(const PauliGroup& GS, const Pauli& P);

// Orthonormal coordinates on span{y p_G : y in W}: cosets of W mod span(G),
// each represented by the reduced vector with phase 0.
class CosetBasis {
public:
    CosetBasis(const std::vector<GVec>& W, std::shared_ptr<const PauliGroup> G);
    int size() const { return int(reps_.size()); }
    const std::vector<GVec>& reps() const { return reps_; }
    Pauli rep(int i) const { return Pauli::from_vec(G_->p(), reps_[i]); }
    // index of the coset of P and mu (units of e^{i pi/p}) with P p_G = mu rep p_G;
    // nullopt when P is outside W + span(G)
    std::optional<std::pair<int, int>> locate(const Pauli& P) const;
    // monomial matrix of left multiplication by P (P must preserve the span)
    Mat left_action(const Pauli& P) const;
    const PauliGroup& group() const { return *G_; }

private:
    std::shared_ptr<const PauliGroup> G_;
    std::vector<GVec> reps_;
    std::map<GVec, int> index_;
};

}  // namespace lto
