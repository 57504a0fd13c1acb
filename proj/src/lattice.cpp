#include "lto/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>

#include "lto/common.hpp"

namespace lto {

Region Region::rect(int x0, int y0, int x1, int y1) {
    std::set<Site> s;
    for (int x = x0; x <= x1; ++x)
        for (int y = y0; y <= y1; ++y) s.insert({x, y});
    return Region(std::move(s));
}

bool Region::subset_of(const Region& o) const {
    return std::includes(o.sites_.begin(), o.sites_.end(), sites_.begin(), sites_.end());
}

Region Region::unite(const Region& o) const {
    auto s = sites_;
    s.insert(o.sites_.begin(), o.sites_.end());
    return Region(std::move(s));
}

Region Region::intersect(const Region& o) const {
    std::set<Site> s;
    for (auto& p : sites_)
        if (o.contains(p)) s.insert(p);
    return Region(std::move(s));
}

Region Region::minus(const Region& o) const {
    std::set<Site> s;
    for (auto& p : sites_)
        if (!o.contains(p)) s.insert(p);
    return Region(std::move(s));
}

Region Region::half(double c, char side) const {
    std::set<Site> s;
    for (auto& p : sites_)
        if ((side == '+' && p.x < c) || (side == '-' && p.x > c)) s.insert(p);
    return Region(std::move(s));
}

Site Region::lo() const {
    Site m{sites_.begin()->x, sites_.begin()->y};
    for (auto& p : sites_) m = {std::min(m.x, p.x), std::min(m.y, p.y)};
    return m;
}

Site Region::hi() const {
    Site m{sites_.begin()->x, sites_.begin()->y};
    for (auto& p : sites_) m = {std::max(m.x, p.x), std::max(m.y, p.y)};
    return m;
}

std::string Region::key() const {
    std::ostringstream o;
    for (auto& p : sites_) o << p.x << ',' << p.y << ';';
    return o.str();
}

nlohmann::json Region::to_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (auto& p : sites_) a.push_back({p.x, p.y});
    return {{"sites", a}};
}

Region Region::from_json(const nlohmann::json& j) {
    std::set<Site> s;
    for (auto& p : j.at("sites")) s.insert({p.at(0).get<int>(), p.at(1).get<int>()});
    return Region(std::move(s));
}

nlohmann::json Interval::to_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (auto& p : sites) a.push_back({p.x, p.y});
    return {{"sites", a}, {"dir", dir}, {"side", std::string(1, side)}};
}

namespace {
constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};
}  // namespace

bool completely_surrounds(const Region& R, const Region& S, int s) {
    if (!R.subset_of(S)) return false;
    for (auto& p : R.sites())
        for (int dx = -s; dx <= s; ++dx)
            for (int dy = -s; dy <= s; ++dy)
                if (!S.contains({p.x + dx, p.y + dy})) return false;
    return true;
}

std::optional<Interval> weakly_surrounds(const Region& R, const Region& S, int s) {
    if (!R.subset_of(S)) throw Error("REGION_NOT_NESTED", "R is not contained in S");
    // Sites of R whose neighbour leaves S, with the directions in which it does.
    std::vector<std::pair<Site, unsigned>> touch;
    for (auto& p : R.sites()) {
        unsigned mask = 0;
        for (int d = 0; d < 4; ++d)
            if (!S.contains({p.x + kDx[d], p.y + kDy[d]})) mask |= 1u << d;
        if (mask) touch.push_back({p, mask});
    }
    if (touch.empty()) return std::nullopt;
    unsigned common = 0xF;
    for (auto& [p, m] : touch) common &= m;
    if (std::popcount(common) != 1) return std::nullopt;
    int dir = std::countr_zero(common);
    bool vertical_face = (dir % 2 == 0);  // face normal along x
    int line = vertical_face ? touch[0].first.x : touch[0].first.y;
    std::vector<int> along;
    for (auto& [p, m] : touch) {
        if ((vertical_face ? p.x : p.y) != line) return std::nullopt;
        along.push_back(vertical_face ? p.y : p.x);
    }
    std::sort(along.begin(), along.end());
    for (std::size_t i = 1; i < along.size(); ++i)
        if (along[i] != along[i - 1] + 1) return std::nullopt;

    // every point of S \ R sits in an s x s block inside S \ R
    Region rest = S.minus(R);
    for (auto& p : rest.sites()) {
        bool ok = false;
        for (int ox = 0; ox < s && !ok; ++ox)
            for (int oy = 0; oy < s && !ok; ++oy) {
                bool all = true;
                for (int a = 0; a < s && all; ++a)
                    for (int b = 0; b < s && all; ++b)
                        all = rest.contains({p.x - ox + a, p.y - oy + b});
                ok = all;
            }
        if (!ok) return std::nullopt;
    }
    Interval I;
    I.dir = dir;
    for (auto& [p, m] : touch) I.sites.push_back(p);
    std::sort(I.sites.begin(), I.sites.end());
    return I;
}

bool is_disk_like(const Region& R) {
    if (R.empty()) return false;
    // 4-connectivity of the sites
    {
        std::set<Site> seen{*R.sites().begin()};
        std::queue<Site> q;
        q.push(*R.sites().begin());
        while (!q.empty()) {
            Site p = q.front();
            q.pop();
            for (int d = 0; d < 4; ++d) {
                Site n{p.x + kDx[d], p.y + kDy[d]};
                if (R.contains(n) && seen.insert(n).second) q.push(n);
            }
        }
        if (seen.size() != R.size()) return false;
    }
    // Euler characteristic of the closed square complex; squares centred on
    // sites, corners at half-integers encoded as (2x+-1, 2y+-1).
    std::set<std::pair<int, int>> verts, edges;
    for (auto& p : R.sites()) {
        int cx = 2 * p.x, cy = 2 * p.y;
        for (int a : {-1, 1})
            for (int b : {-1, 1}) verts.insert({cx + a, cy + b});
        edges.insert({cx + 1, cy});
        edges.insert({cx - 1, cy});
        edges.insert({cx, cy + 1});
        edges.insert({cx, cy - 1});
    }
    long chi = long(verts.size()) - long(edges.size()) + long(R.size());
    if (chi != 1) return false;
    // pinch points: two diagonal squares meeting only at a corner
    for (auto& p : R.sites())
        for (int a : {-1, 1})
            for (int b : {-1, 1})
                if (R.contains({p.x + a, p.y + b}) && !R.contains({p.x + a, p.y}) &&
                    !R.contains({p.x, p.y + b}))
                    return false;
    return true;
}

Site reflect_site(Site s, double c) {
    double two_c = 2 * c;
    if (std::abs(two_c - std::round(two_c)) > 1e-12 || (long(std::lround(two_c)) % 2) == 0)
        throw Error("BAD_AXIS", "reflection axis must lie between lattice columns");
    return {int(std::lround(two_c)) - s.x, s.y};
}

Region reflect_region(const Region& R, double c) {
    std::set<Site> s;
    for (auto& p : R.sites()) s.insert(reflect_site(p, c));
    if (R.empty()) reflect_site({0, 0}, c);
    return Region(std::move(s));
}

}  // namespace lto
