#include "scs/star_glue.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>

#include "json.hpp"
#include "scs/errors.hpp"

namespace scs {

using nlohmann::json;

namespace {

// Shortest cycle detectable by truncated BFS from one source, with reused
// scratch buffers. Every center-graph cycle passes an r-center and cycle
// lengths are even (bipartite), so scanning r-center sources is exact.
int cycleFrom(const Multigraph& g, int s, int best, std::vector<int>& dist,
              std::vector<int>& parentEdge) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> q;
    dist[s] = 0;
    parentEdge[s] = -1;
    q.push(s);
    int depthLimit = (best + 1) / 2;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        if (dist[u] >= depthLimit) break;
        for (const auto& a : g.arcs(u)) {
            if (a.edge == parentEdge[u]) continue;
            if (dist[a.to] < 0) {
                dist[a.to] = dist[u] + 1;
                parentEdge[a.to] = a.edge;
                q.push(a.to);
            } else {
                int cand = dist[u] + dist[a.to] + 1;
                if (cand < best) {
                    best = cand;
                    depthLimit = (best + 1) / 2;
                }
            }
        }
    }
    return best;
}

// A center cycle through L bipartite edges is a glued cycle of length 2L
// (each bipartite edge passes a degree-2 peripheral vertex). Cycles with
// 2L < t are forbidden, so the center girth target is ceil(t/2) rounded up
// to the bipartite parity.
int centerTarget(int t) { return 2 * ((t + 3) / 4); }

}  // namespace

Multigraph StarGluing::centerGraph() const {
    Multigraph g(numR + numS);
    for (int j = 0; j < static_cast<int>(matching.size()); ++j)
        g.addEdge(j / r, numR + matching[j] / s);
    return g;
}

void StarGluing::validate() const {
    if (r < 1 || s < 1 || t < 1 || numR < 1 || numS < 1)
        throw UsageError("star gluing parameters must be >= 1");
    if (numR * r != numS * s)
        throw UsageError("peripheral slot counts differ between sides");
    if (static_cast<int>(matching.size()) != numR * r)
        throw UsageError("matching does not cover the r-slots");
    std::vector<char> hit(matching.size(), 0);
    for (int x : matching) {
        if (x < 0 || x >= static_cast<int>(matching.size()) || hit[x])
            throw UsageError("matching is not a bijection");
        hit[x] = 1;
    }
    Multigraph g = centerGraph();
    if (!g.connected()) throw UsageError("glued graph is not connected");
    int tb = centerTarget(t);
    int best = tb;
    std::vector<int> dist(numR + numS), parentEdge(numR + numS);
    for (int u = 0; u < numR; ++u) {
        best = cycleFrom(g, u, best, dist, parentEdge);
        if (best < tb)
            throw UsageError("glued stars have a cycle of length " +
                             std::to_string(2 * best) + " < t");
    }
}

std::string StarGluing::toJson() const {
    json pairs = json::array();
    for (int j = 0; j < static_cast<int>(matching.size()); ++j)
        pairs.push_back({j, matching[j]});
    json j{{"r", r},      {"s", s},          {"t", t},
           {"num_r", numR}, {"num_s", numS}, {"matching", pairs}};
    return j.dump();
}

StarGluing StarGluing::fromJson(const std::string& text) {
    json j = json::parse(text);
    StarGluing g;
    g.r = j.at("r").get<int>();
    g.s = j.at("s").get<int>();
    g.t = j.at("t").get<int>();
    g.numR = j.at("num_r").get<int>();
    g.numS = j.at("num_s").get<int>();
    if (g.numR < 1 || g.r < 1) throw UsageError("bad star gluing sizes");
    g.matching.assign(g.numR * g.r, -1);
    for (const auto& pair : j.at("matching")) {
        int a = pair.at(0).get<int>();
        int b = pair.at(1).get<int>();
        if (a < 0 || a >= static_cast<int>(g.matching.size()) ||
            g.matching[a] != -1)
            throw UsageError("bad matching entry");
        g.matching[a] = b;
    }
    g.validate();
    return g;
}

std::optional<int> gluedGirth(const StarGluing& g, int cap) {
    std::optional<int> b = girthSerial(g.centerGraph(), cap / 2);
    if (!b) return std::nullopt;
    return 2 * *b;
}

namespace {

// One greedy attempt toward center girth >= tb. r-slots are assigned center
// by center; a partner hub must sit at center distance >= tb-1 from the
// current r-center u, tested by intersecting a maintained radius-ru ball
// around u with a radius-rw ball around the candidate (ru + rw = tb-2, so
// the test is exact). Slots that cannot be placed are deferred and repaired
// by stealing; attempts that get stuck far from the end are abandoned as
// undersized.
std::optional<std::vector<int>> greedyMatching(int r, int s, int tb, int numR,
                                               int numS, std::mt19937_64& rng) {
    int slots = numR * r;
    int nodes = numR + numS;
    std::vector<std::vector<int>> adj(nodes);
    std::vector<int> capacity(numS, s);
    std::vector<int> matching(slots, -1);
    int ru = tb >= 3 ? (tb - 1) / 2 : 0;
    int rw = tb >= 3 ? (tb - 2) - ru : 0;
    std::vector<char> uMark(nodes, 0);
    std::vector<int> uMarkList;
    std::vector<int> stamp(nodes, -1);
    int stampCtr = 0;
    std::vector<std::pair<int, int>> bfs;
    auto growUMark = [&](int src, int radius) {
        ++stampCtr;
        bfs.clear();
        bfs.push_back({src, 0});
        stamp[src] = stampCtr;
        if (!uMark[src]) {
            uMark[src] = 1;
            uMarkList.push_back(src);
        }
        for (std::size_t i = 0; i < bfs.size(); ++i) {
            auto [x, d] = bfs[i];
            if (d == radius) continue;
            for (int y : adj[x])
                if (stamp[y] != stampCtr) {
                    stamp[y] = stampCtr;
                    if (!uMark[y]) {
                        uMark[y] = 1;
                        uMarkList.push_back(y);
                    }
                    bfs.push_back({y, d + 1});
                }
        }
    };
    auto clearUMark = [&]() {
        for (int x : uMarkList) uMark[x] = 0;
        uMarkList.clear();
    };
    auto wClean = [&](int w) {
        if (tb <= 2) return true;
        int node = numR + w;
        if (uMark[node]) return false;
        ++stampCtr;
        bfs.clear();
        bfs.push_back({node, 0});
        stamp[node] = stampCtr;
        for (std::size_t i = 0; i < bfs.size(); ++i) {
            auto [x, d] = bfs[i];
            if (d == rw) continue;
            for (int y : adj[x])
                if (stamp[y] != stampCtr) {
                    if (uMark[y]) return false;
                    stamp[y] = stampCtr;
                    bfs.push_back({y, d + 1});
                }
        }
        return true;
    };
    std::vector<int> dsu(nodes);
    std::iota(dsu.begin(), dsu.end(), 0);
    auto find = [&](int x) {
        while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
        return x;
    };
    // Hubs with remaining capacity, for O(1) random picks.
    std::vector<int> freeHubs(numS), hubPos(numS);
    std::iota(freeHubs.begin(), freeHubs.end(), 0);
    std::iota(hubPos.begin(), hubPos.end(), 0);
    auto dropHub = [&](int w) {
        int p = hubPos[w], last = freeHubs.back();
        freeHubs[p] = last;
        hubPos[last] = p;
        freeHubs.pop_back();
        hubPos[w] = -1;
    };
    auto restoreHub = [&](int w) {
        if (hubPos[w] >= 0) return;
        hubPos[w] = static_cast<int>(freeHubs.size());
        freeHubs.push_back(w);
    };
    int assigned = 0;
    auto link = [&](int j, int u, int w) {
        matching[j] = w * s;  // s-slot refined after completion
        if (--capacity[w] == 0) dropHub(w);
        adj[u].push_back(numR + w);
        adj[numR + w].push_back(u);
        dsu[find(u)] = find(numR + w);
        ++assigned;
        if (tb >= 3) growUMark(numR + w, ru - 1);
    };
    // Full candidate scans are restricted to the endgame: at undersized or
    // tight graph sizes they would dominate the run, and an attempt whose
    // random probes dry up early is undersized anyway. Partners in another
    // component are preferred so low-degree instances do not freeze into
    // unions of cycles.
    auto assignSlot = [&](int j, bool allowScan) {
        int u = j / r;
        int fallback = -1;
        for (int tries = 0; tries < 60 && !freeHubs.empty(); ++tries) {
            int w = freeHubs[std::uniform_int_distribution<std::size_t>(
                0, freeHubs.size() - 1)(rng)];
            if (!wClean(w)) continue;
            if (find(u) != find(numR + w)) {
                link(j, u, w);
                return true;
            }
            if (fallback < 0) fallback = w;
        }
        if (fallback >= 0) {
            link(j, u, fallback);
            return true;
        }
        if (!allowScan) return false;
        std::vector<int> cands;
        for (int w : freeHubs)
            if (wClean(w)) cands.push_back(w);
        if (cands.empty()) return false;
        for (int w : cands)
            if (find(u) != find(numR + w)) {
                link(j, u, w);
                return true;
            }
        int w = cands[std::uniform_int_distribution<std::size_t>(
            0, cands.size() - 1)(rng)];
        link(j, u, w);
        return true;
    };
    std::vector<int> retry;
    int deferBudget = r + s + 16;
    for (int u = 0; u < numR; ++u) {
        clearUMark();
        if (tb >= 3) growUMark(u, ru);
        for (int q = 0; q < r; ++q) {
            int j = u * r + q;
            if (assignSlot(j, slots - assigned <= deferBudget)) continue;
            if (static_cast<int>(retry.size()) >= deferBudget)
                return std::nullopt;
            retry.push_back(j);
        }
    }
    long stealBudget = 4L * (r + s) + 64;
    std::uniform_int_distribution<int> pickSlot(0, slots - 1);
    while (!retry.empty()) {
        int j = retry.back();
        retry.pop_back();
        int u = j / r;
        clearUMark();
        if (tb >= 3) growUMark(u, ru);
        if (assignSlot(j, true)) continue;
        bool stolen = false;
        for (int tries = 0; tries < 200 && !stolen; ++tries) {
            if (--stealBudget < 0) return std::nullopt;
            int j2 = pickSlot(rng);
            if (matching[j2] < 0 || j2 / r == u) continue;
            int u2 = j2 / r, w2 = matching[j2] / s;
            auto removeArc = [&](int a, int b) {
                auto& v = adj[a];
                v.erase(std::find(v.begin(), v.end(), b));
            };
            removeArc(u2, numR + w2);
            removeArc(numR + w2, u2);
            if (capacity[w2]++ == 0) restoreHub(w2);
            matching[j2] = -1;
            --assigned;
            clearUMark();
            if (tb >= 3) growUMark(u, ru);
            if (wClean(w2)) {
                link(j, u, w2);
                retry.push_back(j2);
                stolen = true;
            } else {
                if (--capacity[w2] == 0) dropHub(w2);
                matching[j2] = w2 * s;
                adj[u2].push_back(numR + w2);
                adj[numR + w2].push_back(u2);
                ++assigned;
            }
        }
        if (!stolen) return std::nullopt;
    }
    // Spread each s-center's matched r-slots over its s-slots in order.
    std::vector<int> nextFreeSlot(numS, 0);
    for (int j = 0; j < slots; ++j) {
        int w = matching[j] / s;
        matching[j] = w * s + nextFreeSlot[w]++;
    }
    // Connectivity over the centers; the greedy choice does not enforce it.
    std::vector<char> seen(nodes, 0);
    std::queue<int> q;
    seen[0] = 1;
    q.push(0);
    int count = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                q.push(w);
            }
    }
    if (count != nodes) return std::nullopt;
    return matching;
}

}  // namespace

StarGluing glueStars(int r, int s, int t, std::uint64_t seed) {
    if (r < 1 || s < 1 || t < 1)
        throw UsageError("star gluing parameters must be >= 1");
    StarGluing g;
    g.r = r;
    g.s = s;
    g.t = t;
    // Degree-1 centers force a single hub on the other side; the result is
    // a tree, which has no cycles at all.
    if (r == 1 || s == 1) {
        g.numS = r == 1 ? 1 : r;
        g.numR = (g.numS * s) / r;
        g.matching.resize(g.numR * r);
        std::iota(g.matching.begin(), g.matching.end(), 0);
        g.validate();
        return g;
    }
    std::mt19937_64 rng(seed);
    int tb = centerTarget(t);
    int l = std::lcm(r, s);
    // Moore-style lower estimate: in a graph of center girth >= tb, hubs at
    // even distances a + b < tb from a common hub are distinct, so numS must
    // clear the hub ball of radius 2*floor((tb-3)/2). Start the escalation
    // above it; smaller sizes cannot verify.
    int rhoH = tb >= 5 ? 2 * ((tb - 3) / 2) : 0;
    long ballHubs = 1, frontier = 1;
    for (int d = 1; d <= rhoH && ballHubs < (1 << 21); ++d) {
        frontier *= d == 1 ? s : (d % 2 == 1 ? s - 1 : r - 1);
        if (d % 2 == 0) ballHubs += frontier;
        if (frontier == 0) break;
    }
    int startLevel = 0;
    while (startLevel < 27 &&
           ((static_cast<long>(l) / s) << startLevel) < 2 * ballHubs &&
           ((static_cast<long>(l) / r) << (startLevel + 1)) * r <= (1 << 21))
        ++startLevel;
    const int attemptsPerSize = 6;
    for (int level = startLevel; level < 28; ++level) {
        long numR = (static_cast<long>(l) / r) << level;
        long numS = (static_cast<long>(l) / s) << level;
        if (numR * r > (1 << 21))
            throw ResourceError("star gluing size escalation exhausted");
        // Girth >= 6 forbids two centers sharing two hubs and vice versa, so
        // 2-paths through one side must fit in the pairs of the other;
        // smaller sizes cannot verify and are skipped outright.
        if (tb >= 6 && (numS * s * (s - 1) > numR * (numR - 1) ||
                        numR * r * (r - 1) > numS * (numS - 1)))
            continue;
        for (int attempt = 0; attempt < attemptsPerSize; ++attempt) {
            auto matching = greedyMatching(r, s, tb, static_cast<int>(numR),
                                           static_cast<int>(numS), rng);
            if (!matching) continue;
            g.numR = static_cast<int>(numR);
            g.numS = static_cast<int>(numS);
            g.matching = std::move(*matching);
            g.validate();
            return g;
        }
    }
    throw ResourceError("star gluing repair budget exhausted");
}

}  // namespace scs
