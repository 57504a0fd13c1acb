#pragma once

// Exact backend: generalized Pauli operators over Z_p (p prime) and linear
// algebra over GF(p). For p = 2 these are the ordinary Pauli strings.

#include <optional>
#include <string>
#include <vector>

#include "lto/common.hpp"

namespace lto {

using GVec = std::vector<int>;

int gf_inv(int a, int p);

// Reduced row echelon basis of a subspace of GF(p)^n. Optionally tracks, for
// every basis row, the combination of inserted vectors that produced it.
class Echelon {
public:
    Echelon(int p, int n, bool track = false) : p_(p), n_(n), track_(track) {}

    int p() const { return p_; }
    int n() const { return n_; }
    int dim() const { return int(rows_.size()); }
    const std::vector<GVec>& rows() const { return rows_; }

    // Returns true when v was independent of the current span.
    bool insert(const GVec& v);
    // Canonical representative of v modulo the span; combo (if tracked and
    // requested) receives c with v - reduce(v) = sum_i c_i inserted_i.
    GVec reduce(const GVec& v, GVec* combo = nullptr) const;
    bool contains(const GVec& v) const;
    // inserted vectors that were dependent, as combinations summing to zero
    const std::vector<GVec>& relations() const { return relations_; }
    int inserted() const { return count_; }

private:
    int p_, n_;
    bool track_;
    int count_ = 0;
    std::vector<GVec> rows_;
    std::vector<int> piv_;
    std::vector<GVec> combos_;
    std::vector<GVec> relations_;
};

Echelon span_of(int p, int n, const std::vector<GVec>& vs);
bool same_span(const Echelon& a, const Echelon& b);
// Solutions x of A x = 0, A given by rows of length ncols.
std::vector<GVec> gf_nullspace(int p, int ncols, const std::vector<GVec>& A);

// phase * X^a Z^b, with phase stored as k in units of e^{i pi/p}, k mod 2p.
// Z X = w X Z with w = e^{2 pi i/p}.
struct Pauli {
    int p = 2;
    int phase = 0;
    GVec v;  // [a_0..a_{n-1} | b_0..b_{n-1}]

    Pauli() = default;
    Pauli(int p_, int n) : p(p_), v(2 * n, 0) {}
    static Pauli from_vec(int p, const GVec& v, int phase = 0);
    static Pauli single(int p, int n, int site, int a, int b);

    int n() const { return int(v.size()) / 2; }
    int a(int j) const { return v[j]; }
    int b(int j) const { return v[n() + j]; }
    bool is_identity_vec() const;
    cplx phase_value() const;
    // qubits only: phase relative to the Y = iXZ presentation
    cplx display_phase() const;
    std::string str() const;

    Pauli operator*(const Pauli& o) const;
    Pauli adjoint() const;
    Pauli pow(int k) const;
    bool commutes(const Pauli& o) const;
    int symplectic(const Pauli& o) const;  // a.d - b.c mod p
    bool operator==(const Pauli& o) const { return p == o.p && phase == o.phase && v == o.v; }

    // local dense matrix on the listed qudits (index order as given)
    Mat matrix() const;
    Mat matrix_on(const std::vector<int>& sites) const;
};

// Abelian group generated by commuting Paulis with phases tracked exactly.
class PauliGroup {
public:
    PauliGroup(int p, int n) : p_(p), n_(n), ech_(p, 2 * n, true) {}
    void add(const Pauli& g);
    int p() const { return p_; }
    int n() const { return n_; }
    int rank() const { return ech_.dim(); }
    const std::vector<Pauli>& gens() const { return gens_; }
    const Echelon& space() const { return ech_; }

    // product of generators with exponents c
    Pauli element(const GVec& c) const;
    // if P = lambda * s with s in the group, the phase units of lambda
    std::optional<int> member(const Pauli& P) const;
    // canonical coset representative (phase-free) and mu with P = mu * rep * s
    std::pair<GVec, int> canon(const Pauli& P) const;
    bool normalizes(const Pauli& P) const;
    // false if a relation among generators produces a non-trivial scalar
    bool consistent() const;

private:
    int p_, n_;
    Echelon ech_;
    std::vector<Pauli> gens_;
};

}  // namespace lto
