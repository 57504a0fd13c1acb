#include "lto/pauli.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace lto {

namespace {
inline int md(long a, int p) {
    long r = a % p;
    return int(r < 0 ? r + p : r);
}
}  // namespace

int gf_inv(int a, int p) {
    a = md(a, p);
    if (a == 0) throw Error("GF_DIVIDE", "inverse of zero");
    // p is small; Fermat
    long r = 1, b = a;
    for (int e = p - 2; e > 0; e >>= 1, b = b * b % p)
        if (e & 1) r = r * b % p;
    return int(r);
}

bool Echelon::insert(const GVec& v) {
    GVec w(n_);
    for (int i = 0; i < n_; ++i) w[i] = md(v[i], p_);
    GVec c;
    if (track_) {
        c.assign(count_ + 1, 0);
        c[count_] = 1;
        for (auto& cc : combos_) cc.resize(count_ + 1, 0);
    }
    ++count_;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        int f = w[piv_[i]];
        if (!f) continue;
        for (int k = 0; k < n_; ++k) w[k] = md(w[k] - long(f) * rows_[i][k], p_);
        if (track_)
            for (int k = 0; k < count_; ++k) c[k] = md(c[k] - long(f) * combos_[i][k], p_);
    }
    int q = -1;
    for (int k = 0; k < n_; ++k)
        if (w[k]) {
            q = k;
            break;
        }
    if (q < 0) {
        if (track_) relations_.push_back(c);
        return false;
    }
    int s = gf_inv(w[q], p_);
    for (int k = 0; k < n_; ++k) w[k] = md(long(w[k]) * s, p_);
    if (track_)
        for (int k = 0; k < count_; ++k) c[k] = md(long(c[k]) * s, p_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        int f = rows_[i][q];
        if (!f) continue;
        for (int k = 0; k < n_; ++k) rows_[i][k] = md(rows_[i][k] - long(f) * w[k], p_);
        if (track_)
            for (int k = 0; k < count_; ++k) combos_[i][k] = md(combos_[i][k] - long(f) * c[k], p_);
    }
    rows_.push_back(std::move(w));
    piv_.push_back(q);
    if (track_) combos_.push_back(std::move(c));
    return true;
}

GVec Echelon::reduce(const GVec& v, GVec* combo) const {
    GVec w(n_);
    for (int i = 0; i < n_; ++i) w[i] = md(v[i], p_);
    if (combo) combo->assign(count_, 0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        int f = w[piv_[i]];
        if (!f) continue;
        for (int k = 0; k < n_; ++k) w[k] = md(w[k] - long(f) * rows_[i][k], p_);
        if (combo && track_)
            for (std::size_t k = 0; k < combos_[i].size(); ++k)
                (*combo)[k] = md((*combo)[k] + long(f) * combos_[i][k], p_);
    }
    return w;
}

bool Echelon::contains(const GVec& v) const {
    GVec r = reduce(v);
    for (int x : r)
        if (x) return false;
    return true;
}

Echelon span_of(int p, int n, const std::vector<GVec>& vs) {
    Echelon e(p, n);
    for (auto& v : vs) e.insert(v);
    return e;
}

bool same_span(const Echelon& a, const Echelon& b) {
    if (a.dim() != b.dim()) return false;
    for (auto& r : a.rows())
        if (!b.contains(r)) return false;
    return true;
}

std::vector<GVec> gf_nullspace(int p, int ncols, const std::vector<GVec>& A) {
    Echelon e(p, ncols);
    for (auto& r : A) e.insert(r);
    const auto& rows = e.rows();
    std::vector<int> piv_of_col(ncols, -1);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int k = 0; k < ncols; ++k)
            if (rows[i][k]) {
                piv_of_col[k] = int(i);
                break;
            }
    std::vector<GVec> out;
    for (int f = 0; f < ncols; ++f) {
        if (piv_of_col[f] >= 0) continue;
        GVec x(ncols, 0);
        x[f] = 1;
        for (int k = 0; k < ncols; ++k)
            if (piv_of_col[k] >= 0) x[k] = md(-long(rows[piv_of_col[k]][f]), p);
        out.push_back(std::move(x));
    }
    return out;
}

Pauli Pauli::from_vec(int p, const GVec& v, int phase) {
    Pauli P;
    P.p = p;
    P.v = v;
    for (auto& x : P.v) x = md(x, p);
    P.phase = md(phase, 2 * p);
    return P;
}

Pauli Pauli::single(int p, int n, int site, int a, int b) {
    Pauli P(p, n);
    P.v[site] = md(a, p);
    P.v[n + site] = md(b, p);
    return P;
}

bool Pauli::is_identity_vec() const {
    for (int x : v)
        if (x) return false;
    return true;
}

cplx Pauli::phase_value() const {
    // exact values on the axes so that Pauli-backed matrices stay exact
    int k = md(phase, 2 * p);
    if (k == 0) return 1.0;
    if (2 * k == 2 * p) return -1.0;
    if (2 * k == p) return cplx(0, 1);
    if (2 * k == 3 * p) return cplx(0, -1);
    return std::polar(1.0, std::numbers::pi * k / p);
}

cplx Pauli::display_phase() const {
    cplx ph = phase_value();
    if (p != 2) return ph;
    for (int j = 0; j < n(); ++j)
        if (a(j) && b(j)) ph *= cplx(0, -1);
    return ph;
}

std::string Pauli::str() const {
    std::ostringstream o;
    o << "e^{i pi " << phase << "/" << p << "}";
    for (int j = 0; j < n(); ++j) {
        if (a(j)) o << " X" << j << (a(j) > 1 ? "^" + std::to_string(a(j)) : "");
        if (b(j)) o << " Z" << j << (b(j) > 1 ? "^" + std::to_string(b(j)) : "");
    }
    return o.str();
}

Pauli Pauli::operator*(const Pauli& o) const {
    const int N = n();
    Pauli r(p, N);
    long bc = 0;
    for (int j = 0; j < N; ++j) {
        bc += long(v[N + j]) * o.v[j];
        r.v[j] = md(v[j] + o.v[j], p);
        r.v[N + j] = md(v[N + j] + o.v[N + j], p);
    }
    r.phase = md(phase + o.phase + 2 * bc, 2 * p);
    return r;
}

Pauli Pauli::adjoint() const {
    const int N = n();
    Pauli r(p, N);
    long ab = 0;
    for (int j = 0; j < N; ++j) {
        ab += long(v[j]) * v[N + j];
        r.v[j] = md(-v[j], p);
        r.v[N + j] = md(-v[N + j], p);
    }
    r.phase = md(-phase + 2 * ab, 2 * p);
    return r;
}

Pauli Pauli::pow(int k) const {
    k = md(k, p);
    Pauli r(p, n());
    for (int i = 0; i < k; ++i) r = r * (*this);
    return r;
}

int Pauli::symplectic(const Pauli& o) const {
    const int N = n();
    long s = 0;
    for (int j = 0; j < N; ++j) s += long(v[j]) * o.v[N + j] - long(v[N + j]) * o.v[j];
    return md(s, p);
}

bool Pauli::commutes(const Pauli& o) const { return symplectic(o) == 0; }

Mat Pauli::matrix_on(const std::vector<int>& sites) const {
    const double w = 2 * std::numbers::pi / p;
    Mat m = Mat::Identity(1, 1) * phase_value();
    for (int s : sites) {
        Mat loc = Mat::Zero(p, p);
        for (int j = 0; j < p; ++j) {
            int e = md(long(b(s)) * j, p);
            cplx val = e == 0 ? cplx(1.0) : (p == 2 ? cplx(-1.0) : std::polar(1.0, w * e));
            loc(md(j + a(s), p), j) = val;
        }
        Mat k(m.rows() * p, m.cols() * p);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) k.block(r * p, c * p, p, p) = m(r, c) * loc;
        m = std::move(k);
    }
    return m;
}

Mat Pauli::matrix() const {
    std::vector<int> s(n());
    for (int j = 0; j < n(); ++j) s[j] = j;
    return matrix_on(s);
}

void PauliGroup::add(const Pauli& g) {
    gens_.push_back(g);
    ech_.insert(g.v);
}

Pauli PauliGroup::element(const GVec& c) const {
    Pauli r(p_, n_);
    for (std::size_t i = 0; i < c.size() && i < gens_.size(); ++i)
        if (c[i]) r = r * gens_[i].pow(c[i]);
    return r;
}

std::optional<int> PauliGroup::member(const Pauli& P) const {
    GVec c;
    GVec r = ech_.reduce(P.v, &c);
    for (int x : r)
        if (x) return std::nullopt;
    Pauli s = element(c);
    return md(P.phase - s.phase, 2 * p_);
}

std::pair<GVec, int> PauliGroup::canon(const Pauli& P) const {
    GVec c;
    GVec r = ech_.reduce(P.v, &c);
    Pauli rep = Pauli::from_vec(p_, r);
    Pauli q = rep.adjoint() * P;
    Pauli s = element(c);
    return {r, md(q.phase - s.phase, 2 * p_)};
}

bool PauliGroup::normalizes(const Pauli& P) const {
    for (auto& g : gens_)
        if (!g.commutes(P)) return false;
    return true;
}

bool PauliGroup::consistent() const {
    for (auto& rel : ech_.relations())
        if (element(rel).phase != 0) return false;
    for (auto& g : gens_)
        if (g.pow(p_ - 1) * g != Pauli(p_, n_)) return false;
    return true;
}

}  // namespace lto
