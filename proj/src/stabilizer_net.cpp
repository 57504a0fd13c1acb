#include "lto/stabilizer_net.hpp"

#include <cmath>

namespace lto {

StabilizerNet::StabilizerNet(const Model& m) : m_(m) {
    if (!m.pauli()) throw Error("BAD_GROUP", "exact backend needs a prime cyclic group");
}

std::shared_ptr<const PauliGroup> StabilizerNet::group(const Region& R) const {
    std::string key = R.key();
    {
        std::lock_guard lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    auto G = std::make_shared<PauliGroup>(m_.p, m_.nq());
    for (int t : m_.terms_in(R)) G->add(*m_.terms[t].gen);
    if (!G->consistent()) throw Error("NOT_PROJECTION", "terms of region have empty common ground space");
    std::lock_guard lk(mu_);
    return cache_.emplace(key, G).first->second;
}

std::vector<GVec> StabilizerNet::local_basis(const std::vector<int>& qs) const {
    const int n = nq();
    std::vector<GVec> out;
    for (int q : qs)
        for (int half = 0; half < 2; ++half) {
            GVec v(2 * n, 0);
            v[half * n + q] = 1;
            out.push_back(std::move(v));
        }
    return out;
}

std::vector<GVec> StabilizerNet::local_basis(const Region& R) const { return local_basis(m_.qudits_in(R)); }

std::vector<Pauli> StabilizerNet::pauli_basis(const Region& R) const {
    auto qs = m_.qudits_in(R);
    const int n = nq(), p = m_.p, k = 2 * int(qs.size());
    double count = std::pow(double(p), k);
    if (count > 1e6) throw Error("BUDGET_EXCEEDED", "Pauli basis too large");
    std::vector<Pauli> out;
    std::vector<int> digits(k, 0);
    for (long idx = 0; idx < long(count); ++idx) {
        Pauli P(p, n);
        for (int j = 0; j < int(qs.size()); ++j) {
            P.v[qs[j]] = digits[2 * j];
            P.v[n + qs[j]] = digits[2 * j + 1];
        }
        out.push_back(std::move(P));
        for (int j = 0; j < k; ++j) {
            if (++digits[j] < p) break;
            digits[j] = 0;
        }
    }
    return out;
}

std::vector<GVec> commuting_subspace(int p, const std::vector<GVec>& W, const std::vector<Pauli>& ops) {
    if (W.empty()) return {};
    std::vector<GVec> A;
    for (auto& g : ops) {
        GVec row(W.size());
        for (std::size_t i = 0; i < W.size(); ++i) row[i] = Pauli::from_vec(p, W[i]).symplectic(g);
        A.push_back(std::move(row));
    }
    Echelon out(p, int(W[0].size()));
    for (auto& c : gf_nullspace(p, int(W.size()), A)) {
        GVec v(W[0].size(), 0);
        for (std::size_t i = 0; i < W.size(); ++i)
            if (c[i])
                for (std::size_t k = 0; k < v.size(); ++k) v[k] = (v[k] + c[i] * W[i][k]) % p;
        out.insert(v);
    }
    return out.rows();
}

std::vector<GVec> commuting_subspace(int p, const std::vector<GVec>& W, const std::vector<const PauliGroup*>& gs) {
    std::vector<Pauli> ops;
    for (auto* G : gs) ops.insert(ops.end(), G->gens().begin(), G->gens().end());
    return commuting_subspace(p, W, ops);
}

Echelon with_group(const std::vector<GVec>& W, const PauliGroup& G) {
    Echelon e(G.p(), 2 * G.n());
    for (auto& r : G.space().rows()) e.insert(r);
    for (auto& w : W) e.insert(w);
    return e;
}

int coset_dim(const std::vector<GVec>& W, const PauliGroup& G) { return with_group(W, G).dim() - G.rank(); }

bool same_image(const std::vector<GVec>& W1, const std::vector<GVec>& W2, const PauliGroup& G) {
    return same_span(with_group(W1, G), with_group(W2, G));
}

cplx expectation(const PauliGroup& GS, const Pauli& P) {
    auto ph = GS.member(P);
    if (!ph) return 0.0;
    return Pauli::from_vec(P.p, GVec(P.v.size(), 0), *ph).phase_value();
}

CosetBasis::CosetBasis(const std::vector<GVec>& W, std::shared_ptr<const PauliGroup> G) : G_(std::move(G)) {
    const int p = G_->p();
    Echelon e(p, 2 * G_->n());
    for (auto& r : G_->space().rows()) e.insert(r);
    std::vector<GVec> comp;
    for (auto& w : W)
        if (e.insert(w)) comp.push_back(w);
    if (std::pow(double(p), double(comp.size())) > 65536) throw Error("BUDGET_EXCEEDED", "coset basis too large");
    std::vector<int> t(comp.size(), 0);
    const GVec zero(2 * G_->n(), 0);
    while (true) {
        GVec v = zero;
        for (std::size_t i = 0; i < comp.size(); ++i)
            if (t[i])
                for (std::size_t k = 0; k < v.size(); ++k) v[k] = (v[k] + t[i] * comp[i][k]) % p;
        GVec r = G_->space().reduce(v);
        index_.emplace(r, int(reps_.size()));
        reps_.push_back(std::move(r));
        std::size_t i = 0;
        for (; i < t.size(); ++i) {
            if (++t[i] < p) break;
            t[i] = 0;
        }
        if (i == t.size()) break;
    }
}

std::optional<std::pair<int, int>> CosetBasis::locate(const Pauli& P) const {
    auto [r, mu] = G_->canon(P);
    auto it = index_.find(r);
    if (it == index_.end()) return std::nullopt;
    return std::make_pair(it->second, mu);
}

Mat CosetBasis::left_action(const Pauli& P) const {
    const int N = size();
    Mat M = Mat::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        auto loc = locate(P * rep(i));
        if (!loc) throw Error("NOT_SUBALGEBRA", "operator leaves the coset span");
        M(loc->first, i) = Pauli::from_vec(P.p, {}, loc->second).phase_value();
    }
    return M;
}

}  // namespace lto
