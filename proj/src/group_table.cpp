#include "scs/group_table.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "scs/errors.hpp"

namespace scs {

using nlohmann::json;

void FiniteGroupTable::validate() {
    if (order < 1) throw UsageError("group order must be >= 1");
    if (static_cast<int>(mul.size()) != order * order)
        throw UsageError("multiplication table has wrong size");
    for (int x : mul)
        if (x < 0 || x >= order) throw UsageError("table entry out of range");
    for (int a = 0; a < order; ++a)
        if (times(0, a) != a || times(a, 0) != a)
            throw UsageError("element 0 is not an identity");
    if (inv.empty()) {
        inv.assign(order, -1);
        for (int a = 0; a < order; ++a)
            for (int b = 0; b < order; ++b)
                if (times(a, b) == 0 && times(b, a) == 0) inv[a] = b;
    }
    for (int a = 0; a < order; ++a)
        if (inv[a] < 0 || inv[a] >= order || times(a, inv[a]) != 0 ||
            times(inv[a], a) != 0)
            throw UsageError("element " + std::to_string(a) + " has no inverse");
    for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b)
            for (int c = 0; c < order; ++c)
                if (times(times(a, b), c) != times(a, times(b, c)))
                    throw UsageError("multiplication is not associative");
}

FiniteGroupTable FiniteGroupTable::trivial() { return cyclic(1); }

FiniteGroupTable FiniteGroupTable::cyclic(int n) {
    FiniteGroupTable g;
    g.order = n;
    g.mul.resize(n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g.mul[a * n + b] = (a + b) % n;
    g.validate();
    return g;
}

FiniteGroupTable FiniteGroupTable::dihedral(int n) {
    // Elements: 0..n-1 rotations r^a, n..2n-1 reflections s r^a.
    int k = 2 * n;
    FiniteGroupTable g;
    g.order = k;
    g.mul.resize(k * k);
    auto id = [n](bool flip, int rot) { return (flip ? n : 0) + ((rot % n) + n) % n; };
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y) {
            bool fx = x >= n, fy = y >= n;
            int rx = x % n, ry = y % n;
            // (s^fx r^rx)(s^fy r^ry) = s^(fx+fy) r^(ry + (fy ? -rx : rx))
            g.mul[x * k + y] = id(fx != fy, fy ? ry - rx : ry + rx);
        }
    g.validate();
    return g;
}

std::string FiniteGroupTable::toJson() const {
    json rows = json::array();
    for (int a = 0; a < order; ++a)
        rows.push_back(std::vector<int>(mul.begin() + a * order,
                                        mul.begin() + (a + 1) * order));
    json j{{"order", order}, {"mul", rows}};
    return j.dump();
}

FiniteGroupTable FiniteGroupTable::fromJson(const std::string& text) {
    json j = json::parse(text);
    FiniteGroupTable g;
    g.order = j.at("order").get<int>();
    for (const auto& row : j.at("mul")) {
        auto r = row.get<std::vector<int>>();
        if (static_cast<int>(r.size()) != g.order)
            throw UsageError("multiplication table row has wrong size");
        g.mul.insert(g.mul.end(), r.begin(), r.end());
    }
    g.validate();
    return g;
}

std::vector<int> subgroupClosure(const FiniteGroupTable& g,
                                 const std::vector<int>& gens) {
    std::vector<char> in(g.order, 0);
    std::vector<int> work{0};
    in[0] = 1;
    for (int x : gens)
        if (!in[x]) {
            in[x] = 1;
            work.push_back(x);
        }
    for (std::size_t i = 0; i < work.size(); ++i)
        for (std::size_t j = 0; j < work.size(); ++j) {
            int p = g.times(work[i], work[j]);
            if (!in[p]) {
                in[p] = 1;
                work.push_back(p);
            }
        }
    std::sort(work.begin(), work.end());
    return work;
}

std::vector<std::vector<int>> allSubgroups(const FiniteGroupTable& g) {
    std::set<std::vector<int>> found;
    std::vector<std::vector<int>> work{{0}};
    found.insert({0});
    for (std::size_t i = 0; i < work.size(); ++i) {
        std::vector<int> s = work[i];
        for (int x = 1; x < g.order; ++x) {
            if (std::binary_search(s.begin(), s.end(), x)) continue;
            std::vector<int> gens = s;
            gens.push_back(x);
            std::vector<int> bigger = subgroupClosure(g, gens);
            if (found.insert(bigger).second) work.push_back(std::move(bigger));
        }
    }
    std::vector<std::vector<int>> out(found.begin(), found.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

bool isMonomorphism(const FiniteGroupTable& src, const FiniteGroupTable& dst,
                    const std::vector<int>& map) {
    if (static_cast<int>(map.size()) != src.order) return false;
    std::vector<char> hit(dst.order, 0);
    for (int x : map) {
        if (x < 0 || x >= dst.order || hit[x]) return false;
        hit[x] = 1;
    }
    if (map[0] != 0) return false;
    for (int a = 0; a < src.order; ++a)
        for (int b = 0; b < src.order; ++b)
            if (map[src.times(a, b)] != dst.times(map[a], map[b])) return false;
    return true;
}

}  // namespace scs
