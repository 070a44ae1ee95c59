#include "scs/graph_of_groups.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include "json.hpp"
#include "scs/errors.hpp"

namespace scs {

using nlohmann::json;

void GraphOfGroups::validate() {
    if (vertexGroups.empty()) throw UsageError("graph of groups needs a vertex");
    for (auto& g : vertexGroups) g.validate();
    if (numEdges() != numVertices() - 1)
        throw UsageError("underlying graph is not a tree");
    std::vector<char> seen(numVertices(), 0);
    std::queue<int> q;
    seen[0] = 1;
    q.push(0);
    int count = 1;
    std::vector<std::vector<int>> adj(numVertices());
    for (int id = 0; id < numEdges(); ++id) {
        GogEdge& e = edges[id];
        if (e.src < 0 || e.src >= numVertices() || e.dst < 0 ||
            e.dst >= numVertices())
            throw UsageError("edge endpoint out of range");
        e.group.validate();
        if (!isMonomorphism(e.group, vertexGroups[e.src], e.rhoSrc) ||
            !isMonomorphism(e.group, vertexGroups[e.dst], e.rhoDst))
            throw UsageError("boundary map is not a monomorphism");
        adj[e.src].push_back(e.dst);
        adj[e.dst].push_back(e.src);
    }
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
    if (count != numVertices())
        throw UsageError("underlying graph is not connected");
    if (base < 0 || base >= numVertices())
        throw UsageError("base vertex out of range");
}

GraphOfGroups GraphOfGroups::amalgam(FiniteGroupTable a, FiniteGroupTable b,
                                     FiniteGroupTable e, std::vector<int> rhoA,
                                     std::vector<int> rhoB) {
    GraphOfGroups g;
    g.vertexGroups = {std::move(a), std::move(b)};
    g.edges.push_back({0, 1, std::move(e), std::move(rhoA), std::move(rhoB)});
    g.base = 0;
    g.validate();
    return g;
}

std::string GraphOfGroups::toJson() const {
    json verts = json::array();
    for (int v = 0; v < numVertices(); ++v)
        verts.push_back({{"id", v}, {"group", json::parse(vertexGroups[v].toJson())}});
    json es = json::array();
    for (int id = 0; id < numEdges(); ++id) {
        const GogEdge& e = edges[id];
        es.push_back({{"id", id},
                      {"src", e.src},
                      {"dst", e.dst},
                      {"group", json::parse(e.group.toJson())},
                      {"rho_src", e.rhoSrc},
                      {"rho_dst", e.rhoDst}});
    }
    json j{{"vertices", verts}, {"edges", es}, {"base", base}};
    return j.dump();
}

GraphOfGroups GraphOfGroups::fromJson(const std::string& text) {
    json j = json::parse(text);
    GraphOfGroups g;
    g.vertexGroups.resize(j.at("vertices").size());
    for (const auto& v : j.at("vertices")) {
        int id = v.at("id").get<int>();
        if (id < 0 || id >= g.numVertices())
            throw UsageError("vertex id out of range");
        g.vertexGroups[id] = FiniteGroupTable::fromJson(v.at("group").dump());
    }
    g.edges.resize(j.at("edges").size());
    for (const auto& e : j.at("edges")) {
        int id = e.at("id").get<int>();
        if (id < 0 || id >= g.numEdges()) throw UsageError("edge id out of range");
        g.edges[id] = {e.at("src").get<int>(), e.at("dst").get<int>(),
                       FiniteGroupTable::fromJson(e.at("group").dump()),
                       e.at("rho_src").get<std::vector<int>>(),
                       e.at("rho_dst").get<std::vector<int>>()};
    }
    g.base = j.at("base").get<int>();
    g.validate();
    return g;
}

void GPath::validate(const GraphOfGroups& g) const {
    if (elems.size() != dirEdges.size() + 1)
        throw UsageError("path has mismatched element and edge counts");
    int v = startVertex;
    if (v < 0 || v >= g.numVertices()) throw UsageError("path start out of range");
    for (std::size_t s = 0; s < dirEdges.size(); ++s) {
        int de = dirEdges[s];
        if (de < 0 || de >= 2 * g.numEdges()) throw UsageError("bad edge in path");
        if (g.iVert(de) != v) throw UsageError("path edges do not concatenate");
        if (elems[s] < 0 || elems[s] >= g.vertexGroups[v].order)
            throw UsageError("path element outside its vertex group");
        v = g.tVert(de);
    }
    if (elems.back() < 0 || elems.back() >= g.vertexGroups[v].order)
        throw UsageError("path element outside its vertex group");
}

int GPath::endVertex(const GraphOfGroups& g) const {
    int v = startVertex;
    for (int de : dirEdges) v = g.tVert(de);
    return v;
}

bool GPath::closed(const GraphOfGroups& g) const {
    return endVertex(g) == startVertex;
}

std::string GPath::str(const GraphOfGroups& g) const {
    std::ostringstream out;
    int v = startVertex;
    out << elems[0] << "@" << v;
    for (std::size_t s = 0; s < dirEdges.size(); ++s) {
        int de = dirEdges[s];
        v = g.tVert(de);
        out << " : " << (de % 2 ? "~" : "") << de / 2 << " : " << elems[s + 1]
            << "@" << v;
    }
    return out.str();
}

GPath GPath::parse(const GraphOfGroups& g, const std::string& text) {
    std::vector<std::string> tokens;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(),
                                 [](char c) { return c == ' ' || c == '\t'; }),
                  tok.end());
        if (tok.empty()) throw UsageError("empty token in path");
        tokens.push_back(tok);
    }
    if (tokens.empty() || tokens.size() % 2 == 0)
        throw UsageError("path must alternate elements and edges");
    GPath p;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i % 2 == 0) {
            auto at = tokens[i].find('@');
            if (at == std::string::npos)
                throw UsageError("element token must be id@vertex");
            int el = std::stoi(tokens[i].substr(0, at));
            int v = std::stoi(tokens[i].substr(at + 1));
            if (i == 0) p.startVertex = v;
            p.elems.push_back(el);
            if (i > 0) {
                int expect = g.tVert(p.dirEdges.back());
                if (v != expect)
                    throw UsageError("element vertex does not match edge target");
            }
        } else {
            bool rev = tokens[i][0] == '~';
            int id = std::stoi(rev ? tokens[i].substr(1) : tokens[i]);
            if (id < 0 || id >= g.numEdges()) throw UsageError("bad edge id");
            p.dirEdges.push_back(2 * id + (rev ? 1 : 0));
        }
    }
    p.validate(g);
    return p;
}

namespace {

// Membership of x in the image of rho; linear scan, groups are tiny.
int preimageOf(const std::vector<int>& rho, int x) {
    for (int c = 0; c < static_cast<int>(rho.size()); ++c)
        if (rho[c] == x) return c;
    return -1;
}

}  // namespace

GPath reducePath(const GraphOfGroups& g, GPath p) {
    p.validate(g);
    // Type-2 exhaustion: f g f-bar with g in the image of rho_f^t collapses.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s + 1 < p.dirEdges.size(); ++s) {
            int f = p.dirEdges[s];
            if (p.dirEdges[s + 1] != GraphOfGroups::opposite(f)) continue;
            int c = preimageOf(g.rhoT(f), p.elems[s + 1]);
            if (c < 0) continue;
            const FiniteGroupTable& gv = g.vertexGroups[g.iVert(f)];
            int merged = gv.times(gv.times(p.elems[s], g.rhoI(f)[c]),
                                  p.elems[s + 2]);
            p.elems.erase(p.elems.begin() + s + 1, p.elems.begin() + s + 3);
            p.elems[s] = merged;
            p.dirEdges.erase(p.dirEdges.begin() + s, p.dirEdges.begin() + s + 2);
            changed = true;
            break;
        }
    }
    // Canonical form: sweep left to right, pushing each element to the
    // minimal representative of its coset modulo the edge image.
    int v = p.startVertex;
    for (std::size_t s = 0; s < p.dirEdges.size(); ++s) {
        int f = p.dirEdges[s];
        const FiniteGroupTable& gi = g.vertexGroups[v];
        const FiniteGroupTable& gt = g.vertexGroups[g.tVert(f)];
        const std::vector<int>& ri = g.rhoI(f);
        const std::vector<int>& rt = g.rhoT(f);
        int bestC = 0, bestVal = p.elems[s];
        for (int c = 0; c < static_cast<int>(ri.size()); ++c) {
            int cand = gi.times(p.elems[s], gi.inverse(ri[c]));
            if (cand < bestVal) {
                bestVal = cand;
                bestC = c;
            }
        }
        p.elems[s] = bestVal;
        p.elems[s + 1] = gt.times(rt[bestC], p.elems[s + 1]);
        v = g.tVert(f);
    }
    return p;
}

int pathLength(const GraphOfGroups& g, const GPath& p) {
    if (!p.closed(g)) throw UsageError("length is defined for closed paths");
    return reducePath(g, p).length();
}

GPath pathInverse(const GraphOfGroups& g, const GPath& p) {
    GPath out;
    out.startVertex = p.endVertex(g);
    int v = out.startVertex;
    out.elems.push_back(g.vertexGroups[v].inverse(p.elems.back()));
    for (int s = static_cast<int>(p.dirEdges.size()) - 1; s >= 0; --s) {
        int de = GraphOfGroups::opposite(p.dirEdges[s]);
        out.dirEdges.push_back(de);
        v = g.tVert(de);
        out.elems.push_back(g.vertexGroups[v].inverse(p.elems[s]));
    }
    return out;
}

GPath pathConcat(const GraphOfGroups& g, const GPath& p, const GPath& q) {
    int join = p.endVertex(g);
    if (q.startVertex != join)
        throw UsageError("paths do not concatenate");
    GPath out = p;
    out.elems.back() =
        g.vertexGroups[join].times(p.elems.back(), q.elems.front());
    out.elems.insert(out.elems.end(), q.elems.begin() + 1, q.elems.end());
    out.dirEdges.insert(out.dirEdges.end(), q.dirEdges.begin(), q.dirEdges.end());
    return out;
}

GPath trivialPath(int vertex) {
    GPath p;
    p.startVertex = vertex;
    p.elems = {0};
    return p;
}

EdgeOrder edgeOrder(const GraphOfGroups& g) {
    EdgeOrder order;
    order.m.assign(2 * g.numEdges(), 0);
    for (int de = 0; de < 2 * g.numEdges(); ++de) {
        // Count geometric edges reachable from t(de) without crossing de.
        std::vector<char> seen(g.numVertices(), 0);
        std::queue<int> q;
        int start = g.tVert(de);
        seen[start] = 1;
        q.push(start);
        int count = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int id = 0; id < g.numEdges(); ++id) {
                if (id == de / 2) continue;
                const GogEdge& e = g.edges[id];
                int other = e.src == v ? e.dst : e.dst == v ? e.src : -1;
                if (other < 0) continue;
                if (!seen[other]) {
                    seen[other] = 1;
                    ++count;
                    q.push(other);
                }
            }
        }
        order.m[de] = count;
    }
    return order;
}

NormalizerReport checkNormalizerCondition(const GraphOfGroups& g) {
    // States (directed edge f, nontrivial subgroup of G_f); arcs transport
    // the subgroup across a reduced continuation. A directed cycle yields a
    // cyclically reduced closed path normalizing some edge subgroup (its
    // normalizer then contains a hyperbolic element); no cycle bounds every
    // fixed subtree, so every normalizer is finite.
    using State = std::pair<int, std::vector<int>>;
    std::map<State, int> ids;
    std::vector<State> states;
    for (int de = 0; de < 2 * g.numEdges(); ++de)
        for (const auto& sub : allSubgroups(g.edgeGroup(de)))
            if (sub.size() > 1) {
                ids.emplace(State{de, sub}, static_cast<int>(states.size()));
                states.push_back({de, sub});
            }
    std::vector<std::vector<int>> arcs(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& [f, sub] = states[i];
        int w = g.tVert(f);
        const FiniteGroupTable& gw = g.vertexGroups[w];
        const std::vector<int>& rt = g.rhoT(f);
        std::vector<int> embedded;
        for (int x : sub) embedded.push_back(rt[x]);
        std::vector<char> inImageT(gw.order, 0);
        for (int y : rt) inImageT[y] = 1;
        for (int fp = 0; fp < 2 * g.numEdges(); ++fp) {
            if (g.iVert(fp) != w) continue;
            const std::vector<int>& ri = g.rhoI(fp);
            std::vector<int> rinv(gw.order, -1);
            for (int c = 0; c < static_cast<int>(ri.size()); ++c) rinv[ri[c]] = c;
            for (int conj = 0; conj < gw.order; ++conj) {
                if (fp == GraphOfGroups::opposite(f) && inImageT[conj])
                    continue;  // the continuation would not be reduced
                std::vector<int> pulled;
                bool inside = true;
                for (int y : embedded) {
                    int t = gw.times(gw.times(gw.inverse(conj), y), conj);
                    if (rinv[t] < 0) {
                        inside = false;
                        break;
                    }
                    pulled.push_back(rinv[t]);
                }
                if (!inside) continue;
                std::sort(pulled.begin(), pulled.end());
                auto it = ids.find(State{fp, pulled});
                if (it == ids.end())
                    throw VerificationError("transported subgroup not enumerated");
                arcs[i].push_back(it->second);
            }
        }
        std::sort(arcs[i].begin(), arcs[i].end());
        arcs[i].erase(std::unique(arcs[i].begin(), arcs[i].end()), arcs[i].end());
    }
    // Cycle detection by three-color DFS.
    std::vector<int> color(states.size(), 0);
    std::vector<std::pair<int, std::size_t>> stack;
    for (std::size_t root = 0; root < states.size(); ++root) {
        if (color[root]) continue;
        stack.push_back({static_cast<int>(root), 0});
        color[root] = 1;
        while (!stack.empty()) {
            auto& [node, idx] = stack.back();
            if (idx == arcs[node].size()) {
                color[node] = 2;
                stack.pop_back();
                continue;
            }
            int next = arcs[node][idx++];
            if (color[next] == 1) {
                NormalizerReport report;
                report.verdict = NormalizerReport::Verdict::Fails;
                report.dirEdge = states[next].first;
                report.subgroup = states[next].second;
                return report;
            }
            if (color[next] == 0) {
                color[next] = 1;
                stack.push_back({next, 0});
            }
        }
    }
    return {};
}

}  // namespace scs
