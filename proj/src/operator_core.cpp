#include "lto/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lto {

ProductSpace::ProductSpace(std::vector<int> ids_, std::vector<int> dims_)
    : ids(std::move(ids_)), dims(std::move(dims_)) {
    if (ids.size() != dims.size()) throw Error("DIM_MISMATCH", "ids/dims length differ");
    for (int d : dims)
        if (d < 2) throw Error("DIM_MISMATCH", "local dimension must be >= 2");
}

ProductSpace ProductSpace::uniform(int n, int d) {
    std::vector<int> ids(n), dims(n, d);
    for (int i = 0; i < n; ++i) ids[i] = i;
    return {ids, dims};
}

std::size_t ProductSpace::total() const {
    std::size_t t = 1;
    for (int d : dims) {
        if (t > (std::size_t(1) << 40) / std::size_t(d))
            throw Error("BUDGET_EXCEEDED", "product space dimension overflows");
        t *= d;
    }
    return t;
}

int ProductSpace::position(int id) const {
    auto it = std::find(ids.begin(), ids.end(), id);
    return it == ids.end() ? -1 : int(it - ids.begin());
}

namespace {

std::vector<long> strides(const ProductSpace& s) {
    std::vector<long> st(s.size());
    long acc = 1;
    for (int k = int(s.size()) - 1; k >= 0; --k) {
        st[k] = acc;
        acc *= s.dims[k];
    }
    return st;
}

}  // namespace

nlohmann::json SparseOperator::to_json() const {
    nlohmann::json t = nlohmann::json::array();
    std::vector<std::tuple<long, long, cplx>> trip;
    for (long k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
    std::sort(trip.begin(), trip.end(), [](auto& a, auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    for (auto& [r, c, v] : trip) t.push_back({r, c, v.real(), v.imag()});
    return {{"dim", m.rows()}, {"triplets", t}};
}

SparseOperator SparseOperator::from_json(const nlohmann::json& j, ProductSpace sp) {
    long d = j.at("dim").get<long>();
    std::vector<Eigen::Triplet<cplx, long>> tr;
    for (auto& t : j.at("triplets"))
        tr.emplace_back(t.at(0).get<long>(), t.at(1).get<long>(),
                        cplx(t.at(2).get<double>(), t.at(3).get<double>()));
    SparseOperator o;
    o.space = std::move(sp);
    o.m.resize(d, d);
    o.m.setFromTriplets(tr.begin(), tr.end());
    return o;
}

SparseOperator embed_local(const Mat& op, const std::vector<int>& support, const ProductSpace& space) {
    std::vector<int> pos;
    long ldim = 1;
    for (int id : support) {
        int p = space.position(id);
        if (p < 0) throw Error("DIM_MISMATCH", "support site not in space");
        if (std::count(pos.begin(), pos.end(), p)) throw Error("DIM_MISMATCH", "repeated support site");
        pos.push_back(p);
        ldim *= space.dims[p];
    }
    if (op.rows() != ldim || op.cols() != ldim)
        throw Error("DIM_MISMATCH", "operator dimension does not match support");
    const long D = long(space.total());
    auto st = strides(space);
    // local digit strides in the op's own ordering
    std::vector<long> lst(pos.size());
    {
        long acc = 1;
        for (int k = int(pos.size()) - 1; k >= 0; --k) {
            lst[k] = acc;
            acc *= space.dims[pos[k]];
        }
    }
    std::vector<std::vector<std::pair<long, cplx>>> colnz(ldim);
    for (long c = 0; c < ldim; ++c)
        for (long r = 0; r < ldim; ++r)
            if (op(r, c) != cplx(0)) colnz[c].push_back({r, op(r, c)});

    std::vector<Eigen::Triplet<cplx, long>> tr;
    for (long col = 0; col < D; ++col) {
        long lc = 0, base = col;
        for (std::size_t k = 0; k < pos.size(); ++k) {
            long digit = (col / st[pos[k]]) % space.dims[pos[k]];
            lc += digit * lst[k];
            base -= digit * st[pos[k]];
        }
        for (auto& [lr, v] : colnz[lc]) {
            long row = base;
            for (std::size_t k = 0; k < pos.size(); ++k)
                row += ((lr / lst[k]) % space.dims[pos[k]]) * st[pos[k]];
            tr.emplace_back(row, col, v);
        }
    }
    SparseOperator out;
    out.space = space;
    out.m.resize(D, D);
    out.m.setFromTriplets(tr.begin(), tr.end());
    out.hermitian = (op - op.adjoint()).norm() <= kTol;
    out.projection = out.hermitian && (op * op - op).norm() <= kTol;
    return out;
}

SparseOperator embed_pauli(const Pauli& P, const std::vector<int>& sites, const ProductSpace& space) {
    // restrict to qudits where P acts non-trivially to keep the local matrix small
    std::vector<int> loc, ids;
    for (std::size_t j = 0; j < sites.size(); ++j)
        if (P.a(int(j)) || P.b(int(j))) {
            loc.push_back(int(j));
            ids.push_back(sites[j]);
        }
    if (loc.empty()) {
        SparseOperator o;
        o.space = space;
        long D = long(space.total());
        o.m.resize(D, D);
        o.m.setIdentity();
        o.m *= P.phase_value();
        return o;
    }
    return embed_local(P.matrix_on(loc), ids, space);
}

double op_norm(const SpMat& a) { return a.norm(); }

double max_abs(const SpMat& a) {
    double m = 0;
    for (long k = 0; k < a.outerSize(); ++k)
        for (SpMat::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

SparseOperator range_projection(const std::vector<SparseOperator>& ps, double tol) {
    if (ps.empty()) throw Error("DIM_MISMATCH", "empty projection list");
    for (auto& p : ps) {
        SpMat sq = p.m * p.m - p.m;
        SpMat ad = SpMat(p.m.adjoint()) - p.m;
        if (op_norm(sq) > tol || op_norm(ad) > tol) throw Error("NOT_PROJECTION", "input is not a projection");
    }
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            SpMat c = ps[i].m * ps[j].m - ps[j].m * ps[i].m;
            if (op_norm(c) > tol) throw Error("NOT_COMMUTING", "projections do not commute");
        }
    SparseOperator out = ps[0];
    for (std::size_t i = 1; i < ps.size(); ++i) {
        out.m = (out.m * ps[i].m).pruned(1e-14, 1);
    }
    out.hermitian = out.projection = true;
    if (op_norm(out.m * out.m - out.m) > tol) throw Error("NOT_PROJECTION", "product is not idempotent");
    return out;
}

SparseOperator partial_trace(const SparseOperator& x, const std::vector<int>& keep) {
    const auto& sp = x.space;
    std::vector<int> kpos;
    for (std::size_t k = 0; k < sp.size(); ++k)
        if (std::count(keep.begin(), keep.end(), sp.ids[k])) kpos.push_back(int(k));
    if (kpos.size() != keep.size()) throw Error("DIM_MISMATCH", "kept site not in space");
    std::vector<int> ids, dims;
    for (int k : kpos) {
        ids.push_back(sp.ids[k]);
        dims.push_back(sp.dims[k]);
    }
    ProductSpace out_sp;
    out_sp.ids = ids;
    out_sp.dims = dims;
    auto st = strides(sp);
    std::vector<long> ost(kpos.size());
    long acc = 1;
    for (int k = int(kpos.size()) - 1; k >= 0; --k) {
        ost[k] = acc;
        acc *= dims[k];
    }
    std::vector<char> kept(sp.size(), 0);
    for (int k : kpos) kept[k] = 1;
    std::vector<Eigen::Triplet<cplx, long>> tr;
    for (long c = 0; c < x.m.outerSize(); ++c)
        for (SpMat::InnerIterator it(x.m, c); it; ++it) {
            long r = it.row();
            bool diag = true;
            long orow = 0, ocol = 0;
            std::size_t kk = 0;
            for (std::size_t k = 0; k < sp.size(); ++k) {
                long dr = (r / st[k]) % sp.dims[k], dc = (c / st[k]) % sp.dims[k];
                if (kept[k]) {
                    orow += dr * ost[kk];
                    ocol += dc * ost[kk];
                    ++kk;
                } else if (dr != dc) {
                    diag = false;
                    break;
                }
            }
            if (diag) tr.emplace_back(orow, ocol, it.value());
        }
    SparseOperator o;
    o.space = out_sp;
    o.m.resize(acc, acc);
    o.m.setFromTriplets(tr.begin(), tr.end());
    o.hermitian = x.hermitian;
    return o;
}

SchmidtDecomposition operator_schmidt(const Mat& x, const ProductSpace& space, const std::vector<int>& minus,
                                      double rel_tol) {
    const long D = long(space.total());
    if (x.rows() != D || x.cols() != D) throw Error("DIM_MISMATCH", "operator does not match space");
    auto st = strides(space);
    std::vector<char> isminus(space.size(), 0);
    long dm = 1, dp = 1;
    for (std::size_t k = 0; k < space.size(); ++k) {
        if (std::count(minus.begin(), minus.end(), space.ids[k])) {
            isminus[k] = 1;
            dm *= space.dims[k];
        } else {
            dp *= space.dims[k];
        }
    }
    // split a full index into (minus index, plus index)
    std::vector<long> im(D), ip(D);
    for (long i = 0; i < D; ++i) {
        long a = 0, b = 0;
        for (std::size_t k = 0; k < space.size(); ++k) {
            long d = (i / st[k]) % space.dims[k];
            if (isminus[k])
                a = a * space.dims[k] + d;
            else
                b = b * space.dims[k] + d;
        }
        im[i] = a;
        ip[i] = b;
    }
    Mat M = Mat::Zero(dm * dm, dp * dp);
    for (long c = 0; c < D; ++c)
        for (long r = 0; r < D; ++r)
            if (x(r, c) != cplx(0)) M(im[r] + dm * im[c], ip[r] + dp * ip[c]) += x(r, c);
    Eigen::BDCSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition out;
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s(k) <= rel_tol * smax || s(k) == 0) break;
        out.sv.push_back(s(k));
        out.left.push_back(unvec(svd.matrixU().col(k), dm));
        out.right.push_back(unvec(svd.matrixV().col(k).conjugate(), dp));
    }
    return out;
}

Mat range_basis(const SpMat& p, double tol) {
    const long D = p.rows();
    double tr = 0;
    for (long k = 0; k < D; ++k) tr += p.coeff(k, k).real();
    long r = std::lround(tr);
    if (r == 0) return Mat::Zero(D, 0);
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> g;
    long k = std::min(D, r + 8);
    Mat Om(D, k);
    for (long i = 0; i < D; ++i)
        for (long j = 0; j < k; ++j) Om(i, j) = cplx(g(rng), g(rng));
    Mat Y = p * Om;
    Eigen::ColPivHouseholderQR<Mat> qr(Y);
    Mat Q = qr.householderQ() * Mat::Identity(D, r);
    if ((Mat(p * Q) - Q).norm() > tol * std::sqrt(double(r)) * 10)
        throw Error("NOT_PROJECTION", "range basis does not reproduce the projection");
    return Q;
}

}  // namespace lto
