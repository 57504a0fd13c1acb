#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace lto {

struct Site {
    int x = 0;
    int y = 0;
    auto operator<=>(const Site&) const = default;
};

class Region {
public:
    Region() = default;
    explicit Region(std::set<Site> s) : sites_(std::move(s)) {}
    Region(std::initializer_list<Site> s) : sites_(s) {}

    static Region rect(int x0, int y0, int x1, int y1);  // inclusive corners

    bool contains(Site s) const { return sites_.count(s) != 0; }
    bool empty() const { return sites_.empty(); }
    std::size_t size() const { return sites_.size(); }
    const std::set<Site>& sites() const { return sites_; }

    bool subset_of(const Region& o) const;
    Region unite(const Region& o) const;
    Region intersect(const Region& o) const;
    Region minus(const Region& o) const;
    // Sites with x < c (side '+') or x > c (side '-').
    Region half(double c, char side) const;

    // min/max corner; undefined on the empty region
    Site lo() const;
    Site hi() const;

    std::string key() const;  // canonical serialization, used as cache key
    nlohmann::json to_json() const;
    static Region from_json(const nlohmann::json& j);

    bool operator==(const Region& o) const { return sites_ == o.sites_; }

private:
    std::set<Site> sites_;
};

// Part of a region's outer boundary shared with another region. dir is the
// outward normal of the shared face: 0 = +x, 1 = +y, 2 = -x, 3 = -y.
struct Interval {
    std::vector<Site> sites;
    int dir = -1;
    char side = '+';
    nlohmann::json to_json() const;
};

bool completely_surrounds(const Region& R, const Region& S, int s);

// Throws REGION_NOT_NESTED if R is not inside S.
std::optional<Interval> weakly_surrounds(const Region& R, const Region& S, int s);

bool is_disk_like(const Region& R);

// x -> 2c - x. c must be a half-integer, else BAD_AXIS.
Region reflect_region(const Region& R, double c);
Site reflect_site(Site s, double c);

}  // namespace lto
