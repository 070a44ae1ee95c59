#include "scs/multigraph.hpp"

#include <algorithm>
#include <queue>

namespace scs {

int Multigraph::addEdge(int u, int v) {
    int id = static_cast<int>(nedges_++);
    adj_[u].push_back({v, id});
    adj_[v].push_back({u, id});
    return id;
}

bool Multigraph::connected() const {
    if (adj_.empty()) return true;
    std::vector<char> seen(adj_.size(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (const Arc& a : adj_[u])
            if (!seen[a.to]) {
                seen[a.to] = 1;
                ++count;
                q.push(a.to);
            }
    }
    return count == adj_.size();
}

namespace {

// Shortest cycle detectable from source s, searching to depth cap/2 + 1.
// Min over all sources is the exact girth (classic BFS argument; the
// immediate-backtrack exclusion is the edge-id test against the BFS parent).
int girthFrom(const Multigraph& g, int s, int best, std::vector<int>& dist,
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

}  // namespace

std::optional<int> girthSerial(const Multigraph& g, int cap) {
    int n = static_cast<int>(g.numVertices());
    int best = cap + 1;
    std::vector<int> dist(n), parentEdge(n);
    for (int s = 0; s < n && best > 1; ++s)
        best = girthFrom(g, s, best, dist, parentEdge);
    if (best > cap) return std::nullopt;
    return best;
}

std::optional<int> girthFromSource(const Multigraph& g, int s, int cap) {
    int n = static_cast<int>(g.numVertices());
    std::vector<int> dist(n), parentEdge(n);
    int best = girthFrom(g, s, cap + 1, dist, parentEdge);
    if (best > cap) return std::nullopt;
    return best;
}

std::optional<int> girthParallel(const Multigraph& g, int cap) {
#ifdef SCS_HAVE_OPENMP
    int n = static_cast<int>(g.numVertices());
    int best = cap + 1;
#pragma omp parallel
    {
        std::vector<int> dist(n), parentEdge(n);
        int local = cap + 1;
#pragma omp for schedule(dynamic, 16) nowait
        for (int s = 0; s < n; ++s) {
            int bound;
#pragma omp atomic read
            bound = best;
            if (bound <= 1) continue;
            local = girthFrom(g, s, std::min(local, bound), dist, parentEdge);
            if (local < bound) {
#pragma omp critical
                best = std::min(best, local);
            }
        }
    }
    if (best > cap) return std::nullopt;
    return best;
#else
    return girthSerial(g, cap);
#endif
}

}  // namespace scs
