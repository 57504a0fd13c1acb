#include <algorithm>
#include <array>

#include "lto/models.hpp"

namespace lto {

FiniteGroup FiniteGroup::cyclic(int n) {
    if (n < 1) throw Error("BAD_GROUP", "cyclic group order must be positive");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h) t[g][h] = (g + h) % n;
    return from_table(t, "Z" + std::to_string(n));
}

FiniteGroup FiniteGroup::s3() {
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> a{0, 1, 2};
    do perms.push_back(a);
    while (std::next_permutation(a.begin(), a.end()));
    std::vector<std::vector<int>> t(6, std::vector<int>(6));
    for (int g = 0; g < 6; ++g)
        for (int h = 0; h < 6; ++h) {
            std::array<int, 3> c;
            for (int i = 0; i < 3; ++i) c[i] = perms[g][perms[h][i]];
            t[g][h] = int(std::find(perms.begin(), perms.end(), c) - perms.begin());
        }
    return from_table(t, "S3");
}

FiniteGroup FiniteGroup::from_table(const std::vector<std::vector<int>>& t, std::string name) {
    const int n = int(t.size());
    if (n == 0) throw Error("BAD_GROUP", "empty table");
    for (auto& row : t) {
        if (int(row.size()) != n) throw Error("BAD_GROUP", "table is not square");
        for (int v : row)
            if (v < 0 || v >= n) throw Error("BAD_GROUP", "entry out of range");
    }
    int e = -1;
    for (int g = 0; g < n && e < 0; ++g) {
        bool ok = true;
        for (int h = 0; h < n && ok; ++h) ok = t[g][h] == h && t[h][g] == h;
        if (ok) e = g;
    }
    if (e < 0) throw Error("BAD_GROUP", "no unit element");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (t[t[a][b]][c] != t[a][t[b][c]]) throw Error("BAD_GROUP", "associativity fails");
    std::vector<int> inv(n, -1);
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            if (t[g][h] == e && t[h][g] == e) inv[g] = h;
    for (int g = 0; g < n; ++g)
        if (inv[g] < 0) throw Error("BAD_GROUP", "element without inverse");
    FiniteGroup G;
    G.name = std::move(name);
    G.order = n;
    G.mul = t;
    G.inv = inv;
    G.unit = e;
    return G;
}

FiniteGroup FiniteGroup::named(const std::string& name) {
    if (name == "S3") return s3();
    if (name.size() > 1 && name[0] == 'Z') return cyclic(std::stoi(name.substr(1)));
    throw Error("BAD_GROUP", "unknown group name " + name);
}

int FiniteGroup::prime_cyclic() const {
    int n = order;
    if (n < 2) return 0;
    for (int k = 2; k * k <= n; ++k)
        if (n % k == 0) return 0;
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            if (mul[g][h] != (g + h) % n) return 0;
    return n;
}

Mat FiniteGroup::L(int g) const {
    Mat m = Mat::Zero(order, order);
    for (int h = 0; h < order; ++h) m(mul[g][h], h) = 1;
    return m;
}

Mat FiniteGroup::R(int g) const {
    Mat m = Mat::Zero(order, order);
    for (int h = 0; h < order; ++h) m(mul[h][g], h) = 1;
    return m;
}

Mat FiniteGroup::P(int g) const {
    Mat m = Mat::Zero(order, order);
    m(g, g) = 1;
    return m;
}

}  // namespace lto
