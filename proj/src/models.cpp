#include "lto/models.hpp"

#include <cmath>

#include "lto/report.hpp"

namespace lto {

namespace {

Mat kron(const Mat& a, const Mat& b) {
    Mat k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c) k.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return k;
}

Mat kron_all(const std::vector<Mat>& ms) {
    Mat k = Mat::Identity(1, 1);
    for (auto& m : ms) k = kron(k, m);
    return k;
}

// diagonal projector on 4 group-valued qudits selected by a predicate
template <class Pred>
Mat diag_projector(const FiniteGroup& G, Pred keep) {
    const int n = G.order;
    Mat m = Mat::Zero(n * n * n * n, n * n * n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    if (keep(a, b, c, d)) {
                        int i = ((a * n + b) * n + c) * n + d;
                        m(i, i) = 1;
                    }
    return m;
}

Pauli local_gen(int p, int nq, const std::vector<int>& qs, const std::vector<int>& exps, bool ztype) {
    Pauli P(p, nq);
    for (std::size_t k = 0; k < qs.size(); ++k) {
        int e = ((exps[k] % p) + p) % p;
        if (ztype)
            P.v[nq + qs[k]] = e;
        else
            P.v[qs[k]] = e;
    }
    return P;
}

Mat cyclic_projector(const Mat& g, int p) {
    Mat acc = Mat::Zero(g.rows(), g.cols());
    Mat pw = Mat::Identity(g.rows(), g.cols());
    for (int k = 0; k < p; ++k) {
        acc += pw;
        pw = pw * g;
    }
    return acc / double(p);
}

Pauli restrict_pauli(const Pauli& P, const std::vector<int>& keep) {
    Pauli r(P.p, P.n());
    for (int q : keep) {
        r.v[q] = P.v[q];
        r.v[P.n() + q] = P.v[P.n() + q];
    }
    return r;
}

}  // namespace

nlohmann::json ModelDesc::to_json() const {
    nlohmann::json j = {{"kind", kind},
                        {"patch", {w, h}},
                        {"cut", cut},
                        {"layout", layout == Layout::Edge ? "edge" : "medial"}};
    if (kind == "toric")
        j["convention"] = convention;
    else
        j["group"] = group.name;
    return j;
}

ModelDesc ModelDesc::from_json(const nlohmann::json& j) {
    ModelDesc d;
    d.kind = j.value("kind", "toric");
    if (d.kind == "quantum_double") d.kind = "qd";
    if (d.kind != "toric" && d.kind != "qd") throw Error("CONFIG_INVALID", "model.kind must be toric or qd");
    if (j.contains("patch")) {
        d.w = j["patch"].at(0).get<int>();
        d.h = j["patch"].at(1).get<int>();
    }
    d.cut = j.value("cut", (d.w - 1) / 2.0);
    std::string lay = j.value("layout", "edge");
    if (lay != "edge" && lay != "medial") throw Error("CONFIG_INVALID", "model.layout must be edge or medial");
    d.layout = lay == "edge" ? Layout::Edge : Layout::Medial;
    d.convention = j.value("convention", "paper");
    if (d.convention != "paper" && d.convention != "standard")
        throw Error("CONFIG_INVALID", "model.convention must be paper or standard");
    if (d.kind == "qd") {
        if (!j.contains("group")) throw Error("CONFIG_INVALID", "model.group missing");
        const auto& g = j["group"];
        if (g.is_string())
            d.group = FiniteGroup::named(g.get<std::string>());
        else
            d.group = FiniteGroup::from_table(g.get<std::vector<std::vector<int>>>());
    } else {
        d.group = FiniteGroup::cyclic(2);
    }
    return d;
}

int Model::qudit(Site s, int slot) const {
    auto it = index_.find({s, slot});
    return it == index_.end() ? -1 : it->second;
}

std::vector<int> Model::qudits_in(const Region& R) const {
    std::vector<int> out;
    for (int q = 0; q < nq(); ++q)
        if (R.contains(qudits[q].owner)) out.push_back(q);
    return out;
}

std::vector<int> Model::terms_in(const Region& R) const {
    std::vector<int> out;
    for (int t = 0; t < int(terms.size()); ++t) {
        bool in = true;
        for (auto& s : terms[t].owners) in = in && R.contains(s);
        if (in) out.push_back(t);
    }
    return out;
}

bool Model::straddles(const Term& t) const {
    bool plus = false, minus = false;
    for (auto& s : t.owners) {
        plus = plus || s.x < desc.cut;
        minus = minus || s.x > desc.cut;
    }
    return plus && minus;
}

ProductSpace Model::space_of(const std::vector<int>& qs) const {
    return ProductSpace(qs, std::vector<int>(qs.size(), d));
}

Model build_model(const ModelDesc& desc) {
    Model m;
    m.desc = desc;
    const FiniteGroup& G = desc.group;
    m.d = G.order;
    if (m.d < 2) throw Error("BAD_GROUP", "group must be non-trivial");
    m.p = G.prime_cyclic();
    if (desc.w < 1 || desc.h < 1) throw Error("CONFIG_INVALID", "patch must be non-empty");
    if (std::pow(double(m.d), 4) > double(desc.budget))
        throw Error("BUDGET_EXCEEDED", "single terms exceed the dense budget");
    if (long(desc.w) * desc.h > 4096) throw Error("BUDGET_EXCEEDED", "patch too large");
    m.patch = Region::rect(0, 0, desc.w - 1, desc.h - 1);
    const int slots = desc.layout == Layout::Edge ? 2 : 1;
    for (auto& s : m.patch.sites())
        for (int k = 0; k < slots; ++k) {
            m.index_[{s, k}] = int(m.qudits.size());
            m.qudits.push_back({s, k});
        }
    const int nq = m.nq();
    const bool swap = desc.kind == "toric" && desc.convention == "standard";

    auto add = [&](std::string kind, Site anchor, std::vector<std::pair<Site, int>> edges, std::vector<int> exps,
                   bool ztype, Mat group_proj) {
        Term t;
        t.kind = std::move(kind);
        t.anchor = anchor;
        for (auto& [s, k] : edges) {
            int q = m.qudit(s, k);
            if (q < 0) return;
            t.qudits.push_back(q);
            if (std::find(t.owners.begin(), t.owners.end(), s) == t.owners.end()) t.owners.push_back(s);
        }
        std::sort(t.owners.begin(), t.owners.end());
        if (m.p) {
            t.gen = local_gen(m.p, nq, t.qudits, exps, ztype != swap);
            t.proj = cyclic_projector(t.gen->matrix_on(t.qudits), m.p);
        } else {
            t.proj = std::move(group_proj);
        }
        m.terms.push_back(std::move(t));
    };

    const int n = G.order;
    auto flux_edge = [&](int l, int u, int r, int dn) { return l == G(G(u, r), G.inv[dn]); };
    auto flux_medial = [&](int bl, int br, int tl, int tr) { return G(tr, br) == G(tl, bl); };
    auto need_group = [&]() { return m.p == 0; };
    Mat edge_star, edge_plaq, med_star, med_plaq;
    if (need_group()) {
        edge_star = diag_projector(G, flux_edge);
        med_star = diag_projector(G, flux_medial);
        edge_plaq = Mat::Zero(n * n * n * n, n * n * n * n);
        med_plaq = edge_plaq;
        for (int g = 0; g < n; ++g) {
            Mat Ri = G.R(G.inv[g]), Lg = G.L(g);
            edge_plaq += kron_all({Ri, Lg, Ri, Lg});
            med_plaq += kron_all({Lg, Lg, Ri, Ri});
        }
        edge_plaq /= double(n);
        med_plaq /= double(n);
    }

    for (auto& v : m.patch.sites()) {
        if (desc.layout == Layout::Edge) {
            // star: left, up, right, down
            add("star", v, {{{v.x - 1, v.y}, 0}, {v, 1}, {v, 0}, {{v.x, v.y - 1}, 1}}, {-1, 1, 1, -1}, true, edge_star);
            // plaquette with lower-left corner v: left, bottom, top, right
            add("plaquette", v, {{v, 1}, {v, 0}, {{v.x, v.y + 1}, 0}, {{v.x + 1, v.y}, 1}}, {-1, 1, -1, 1}, false,
                edge_plaq);
        } else {
            std::vector<std::pair<Site, int>> f = {
                {v, 0}, {{v.x + 1, v.y}, 0}, {{v.x, v.y + 1}, 0}, {{v.x + 1, v.y + 1}, 0}};
            if (((v.x + v.y) % 2 + 2) % 2 == 0)
                add("star", v, f, {-1, 1, -1, 1}, true, med_star);
            else
                add("plaquette", v, f, {1, 1, -1, -1}, false, med_plaq);
        }
    }
    return m;
}

SparseOperator ground_projection(const Model& m, const Region& R, const ProductSpace* space) {
    ProductSpace sp = space ? *space : m.space_of(m.qudits_in(R));
    if (sp.size() == 0) throw Error("DIM_MISMATCH", "empty space");
    std::size_t total = sp.total();
    if (total > m.desc.budget) throw Error("BUDGET_EXCEEDED", "space of dimension " + std::to_string(total));
    std::vector<SparseOperator> ps;
    for (int t : m.terms_in(R)) ps.push_back(embed_local(m.terms[t].proj, m.terms[t].qudits, sp));
    if (ps.empty()) {
        SparseOperator id;
        id.space = sp;
        id.m.resize(long(total), long(total));
        id.m.setIdentity();
        id.hermitian = id.projection = true;
        return id;
    }
    return range_projection(ps);
}

std::shared_ptr<const SparseOperator> ProjectionNet::get(const Region& R, const ProductSpace& space) {
    std::string key = R.key() + "|";
    for (int id : space.ids) key += std::to_string(id) + ",";
    {
        std::shared_lock lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            ++hits_;
            return it->second.first;
        }
    }
    auto op = std::make_shared<const SparseOperator>(ground_projection(model_, R, &space));
    std::unique_lock lk(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
        order_.splice(order_.begin(), order_, it->second.second);
        return it->second.first;
    }
    order_.push_front(key);
    cache_[key] = {op, order_.begin()};
    used_ += std::size_t(op->m.nonZeros());
    while (used_ > cap_ && order_.size() > 1) {
        auto& victim = order_.back();
        used_ -= std::size_t(cache_[victim].first->m.nonZeros());
        cache_.erase(victim);
        order_.pop_back();
    }
    return op;
}

Interval cut_interval(const Model& m, char side, int y0, int y1) {
    Interval I;
    I.side = side;
    int xc = int(std::floor(m.desc.cut));
    int x = side == '+' ? xc : xc + 1;
    I.dir = side == '+' ? 0 : 2;
    for (int y = y0; y <= y1; ++y) I.sites.push_back({x, y});
    return I;
}

namespace {

void validate_interval(const Model& m, char side, const Interval& I) {
    if (I.sites.empty()) throw Error("BAD_INTERVAL", "empty interval");
    double c = m.desc.cut;
    if (std::abs(c - std::floor(c) - 0.5) > 1e-12) throw Error("BAD_INTERVAL", "cut is not between columns");
    int xc = int(std::floor(c));
    int x = side == '+' ? xc : xc + 1;
    for (std::size_t i = 0; i < I.sites.size(); ++i) {
        if (I.sites[i].x != x) throw Error("BAD_INTERVAL", "interval site not adjacent to the cut");
        if (i && I.sites[i].y != I.sites[i - 1].y + 1) throw Error("BAD_INTERVAL", "interval not connected");
        if (!m.patch.contains(I.sites[i])) throw Error("BAD_INTERVAL", "interval leaves the patch");
    }
}

LatticeOperator make_op(const Model& m, std::string name, std::vector<int> qs, Mat local,
                        std::optional<Pauli> P = std::nullopt) {
    LatticeOperator o;
    o.name = std::move(name);
    o.qudits = std::move(qs);
    o.local = std::move(local);
    o.pauli = std::move(P);
    (void)m;
    return o;
}

LatticeOperator pauli_op(const Model& m, std::string name, const std::vector<int>& qs, const std::vector<int>& exps,
                         bool ztype) {
    Pauli P = local_gen(m.p, m.nq(), qs, exps, ztype);
    return make_op(m, std::move(name), qs, P.matrix_on(qs), P);
}

}  // namespace

std::vector<LatticeOperator> boundary_generators(const Model& m, char side, const Interval& I) {
    if (side != '+' && side != '-') throw Error("BAD_INTERVAL", "side must be + or -");
    validate_interval(m, side, I);
    std::vector<LatticeOperator> out;
    auto inI = [&](int y) {
        for (auto& s : I.sites)
            if (s.y == y) return true;
        return false;
    };
    const int x = I.sites[0].x;
    const bool toric = m.desc.kind == "toric";
    const bool swap = toric && m.desc.convention == "standard";
    const FiniteGroup& G = m.desc.group;
    const int n = G.order;
    auto q = [&](int xx, int yy, int slot) { return m.qudit({xx, yy}, slot); };

    if (m.desc.layout == Layout::Medial) {
        // halves of the faces crossing the cut, restricted to rows inside I
        for (auto& t : m.terms) {
            if (!m.straddles(t) || !inI(t.anchor.y) || !inI(t.anchor.y + 1)) continue;
            std::vector<int> qs;
            for (int k : t.qudits)
                if ((side == '+') == (m.qudits[k].owner.x < m.desc.cut)) qs.push_back(k);
            if (m.pauli()) {
                Pauli P = restrict_pauli(*t.gen, qs);
                out.push_back(make_op(m, t.kind + "_half", qs, P.matrix_on(qs), P));
            }
        }
        return out;
    }

    for (auto& s : I.sites) {
        const int y = s.y;
        if (side == '+') {
            int l = q(x, y, 0);
            if (l < 0) continue;
            if (toric)
                out.push_back(pauli_op(m, "C_l", {l}, {-1}, !swap));
            else
                for (int g = 0; g < n; ++g) {
                    auto o = make_op(m, "P_l^" + std::to_string(g), {l}, G.P(g));
                    out.push_back(o);
                }
            if (inI(y + 1)) {
                std::vector<int> qs = {q(x, y, 1), q(x, y, 0), q(x, y + 1, 0)};
                if (qs[0] < 0 || qs[2] < 0) continue;
                if (toric)
                    out.push_back(pauli_op(m, "D_p", qs, {-1, 1, -1}, swap));
                else
                    for (int g = 0; g < n; ++g) {
                        Mat Ri = G.R(G.inv[g]);
                        auto o = make_op(m, "Q_p^" + std::to_string(g), qs, kron_all({Ri, G.L(g), Ri}));
                        if (m.pauli()) o.pauli = local_gen(m.p, m.nq(), qs, {-g, g, -g}, false);
                        out.push_back(o);
                    }
            }
        } else {
            if (inI(y - 1)) {
                std::vector<int> qs = {q(x, y, 1), q(x, y, 0), q(x, y - 1, 1)};
                if (qs[0] >= 0 && qs[1] >= 0 && qs[2] >= 0) {
                    if (toric)
                        out.push_back(pauli_op(m, "C_s", qs, {1, 1, -1}, !swap));
                    else
                        for (int g = 0; g < n; ++g) {
                            Mat S = Mat::Zero(n * n * n, n * n * n);
                            for (int h = 0; h < n; ++h)
                                for (int k = 0; k < n; ++k)
                                    for (int l = 0; l < n; ++l)
                                        if (G(G(h, k), G.inv[l]) == g) S += kron_all({G.P(h), G.P(k), G.P(l)});
                            out.push_back(make_op(m, "S_s^" + std::to_string(g), qs, S));
                        }
                }
            }
            if (inI(y + 1)) {
                int l = q(x, y, 1);
                if (l < 0) continue;
                if (toric)
                    out.push_back(pauli_op(m, "D_l", {l}, {1}, swap));
                else
                    for (int g = 0; g < n; ++g) {
                        auto o = make_op(m, "L_l^" + std::to_string(g), {l}, G.L(g));
                        if (m.pauli()) o.pauli = local_gen(m.p, m.nq(), {l}, {g}, false);
                        out.push_back(o);
                    }
            }
        }
    }
    return out;
}

CheckReport straddle_identities(const Model& m, const Interval& I) {
    CheckReport r;
    r.check = "straddle_identities";
    r.model = m.descriptor();
    r.params["interval"] = I.to_json();
    auto rowsIn = [&](const Term& t) {
        for (auto& s : t.owners) {
            bool ok = false;
            for (auto& i : I.sites) ok = ok || i.y == s.y;
            if (!ok) return false;
        }
        return true;
    };
    const double c = m.desc.cut;
    int checked = 0, mismatches = 0;
    double resid = 0;
    const FiniteGroup& G = m.desc.group;
    const int n = G.order;
    int yl = I.sites.front().y, yh = I.sites.back().y;
    auto plusI = cut_interval(m, '+', yl, yh), minusI = cut_interval(m, '-', yl, yh);

    if (m.desc.kind == "toric" || m.desc.layout == Layout::Medial) {
        if (!m.pauli()) throw Error("BAD_GROUP", "medial straddle check needs the exact backend");
        auto gp = boundary_generators(m, '+', plusI), gm = boundary_generators(m, '-', minusI);
        for (auto& t : m.terms) {
            if (!m.straddles(t) || !rowsIn(t)) continue;
            ++checked;
            // the + and - factors must each be one of the listed generators
            std::vector<int> qp, qm;
            for (int k : t.qudits) (m.qudits[k].owner.x < c ? qp : qm).push_back(k);
            const LatticeOperator *a = nullptr, *b = nullptr;
            for (auto& o : gp)
                if (o.pauli && restrict_pauli(*t.gen, qp).v == o.pauli->v) a = &o;
            for (auto& o : gm)
                if (o.pauli && restrict_pauli(*t.gen, qm).v == o.pauli->v) b = &o;
            if (!a || !b || !(*a->pauli * *b->pauli == *t.gen)) ++mismatches;
        }
        r.residuals["mismatches"] = mismatches;
        r.dims["terms_checked"] = checked;
        r.params["backend"] = "exact";
        r.pass = checked > 0 && mismatches == 0;
        return r;
    }

    // quantum double, edge layout: dense evaluation on each term's support
    for (auto& t : m.terms) {
        if (!m.straddles(t) || !rowsIn(t)) continue;
        ++checked;
        if (t.kind == "star") {
            // order left, up, right, down; left is the + edge
            Mat A = diag_projector(G, [&](int l, int u, int rr, int dn) { return l == G(G(u, rr), G.inv[dn]); });
            Mat id = Mat::Identity(n, n);
            for (int g = 0; g < n; ++g) {
                Mat S = Mat::Zero(n * n * n, n * n * n);
                for (int h = 0; h < n; ++h)
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l)
                            if (G(G(h, k), G.inv[l]) == g) S += kron_all({G.P(h), G.P(k), G.P(l)});
                Mat lhs = kron(G.P(g), Mat::Identity(n * n * n, n * n * n)) * A;
                Mat rhs = kron(id, S) * A;
                resid = std::max(resid, (lhs - rhs).cwiseAbs().maxCoeff());
            }
        } else {
            // order left, bottom, top, right; right is the - edge
            for (int g = 0; g < n; ++g) {
                Mat Ri = G.R(G.inv[g]), Lg = G.L(g);
                Mat Bg = kron_all({Ri, Lg, Ri, Lg});
                int gi = G.inv[g];
                Mat Qinv = kron_all({G.R(G.inv[gi]), G.L(gi), G.R(G.inv[gi])});
                Mat lhs = kron(Qinv, Mat::Identity(n, n)) * Bg;
                Mat rhs = kron(Mat::Identity(n * n * n, n * n * n), Lg);
                resid = std::max(resid, (lhs - rhs).cwiseAbs().maxCoeff());
            }
        }
    }
    r.residuals["max_abs"] = resid;
    r.dims["terms_checked"] = checked;
    r.params["backend"] = "dense";
    r.pass = checked > 0 && resid < 1e-12;
    return r;
}

Pauli Reflection::apply(const Pauli& P) const {
    Pauli r(P.p, P.n());
    const int n = P.n();
    for (int j = 0; j < n; ++j) {
        r.v[perm[j]] = P.v[j];
        r.v[n + perm[j]] = (P.p - P.v[n + j]) % P.p;
    }
    r.phase = (2 * P.p - P.phase) % (2 * P.p);
    return r;
}

LatticeOperator Reflection::apply(const LatticeOperator& x) const {
    LatticeOperator o = x;
    for (auto& q : o.qudits) q = perm[q];
    o.local = x.local.conjugate();
    if (x.pauli) o.pauli = apply(*x.pauli);
    o.name = "Theta(" + x.name + ")";
    return o;
}

Reflection reflection(const Model& m) {
    if (m.desc.layout != Layout::Medial)
        throw Error("NOT_SYMMETRIC", "edge layout has degrees of freedom on the cut");
    Reflection th;
    th.c = m.desc.cut;
    th.perm.resize(m.nq());
    for (int q = 0; q < m.nq(); ++q) {
        Site s = reflect_site(m.qudits[q].owner, th.c);
        int r = m.qudit(s, m.qudits[q].slot);
        if (r < 0) throw Error("NOT_SYMMETRIC", "patch is not symmetric about the cut");
        th.perm[q] = r;
    }
    return th;
}

}  // namespace lto
