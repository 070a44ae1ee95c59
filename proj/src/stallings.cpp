#include "scs/stallings.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>

#include "json.hpp"
#include "scs/errors.hpp"

namespace scs {

namespace {

// Mutable multi-edged labeled graph used only during folding.
class FoldState {
public:
    explicit FoldState(int rank) : rank_(rank) { newVertex(); }

    int newVertex() {
        parent_.push_back(static_cast<int>(parent_.size()));
        adj_.emplace_back();
        return static_cast<int>(parent_.size()) - 1;
    }

    int find(int v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void addArc(int u, int slot, int v) {
        adj_[u].emplace_back(slot, v);
        adj_[v].emplace_back(slot ^ 1, u);
    }

    void addGenerator(const Word& w) {
        if (w.empty()) return;
        int cur = find(0);
        const auto& ls = w.letters();
        for (std::size_t i = 0; i < ls.size(); ++i) {
            int target = (i + 1 == ls.size()) ? find(0) : newVertex();
            addArc(cur, slotOf(ls[i]), target);
            cur = target;
        }
    }

    void fold() {
        std::deque<int> work;
        for (std::size_t v = 0; v < parent_.size(); ++v)
            work.push_back(static_cast<int>(v));
        while (!work.empty()) {
            int v = find(work.front());
            work.pop_front();
            // slot -> first seen target; a second distinct target triggers a merge
            std::vector<int> seen(2 * rank_, -1);
            auto& arcs = adj_[v];
            std::size_t out = 0;
            bool merged = false;
            for (std::size_t i = 0; i < arcs.size() && !merged; ++i) {
                int slot = arcs[i].first;
                int t = find(arcs[i].second);
                arcs[i].second = t;
                if (seen[slot] == -1) {
                    seen[slot] = t;
                    arcs[out++] = arcs[i];
                } else if (seen[slot] == t) {
                    // duplicate arc: skip; the twin dedupes when t is scanned
                } else {
                    merge(seen[slot], t, work);
                    merged = true;
                }
            }
            if (merged) {
                work.push_back(v);
            } else {
                arcs.resize(out);
            }
        }
    }

    // Builds the folded transition table over live root vertices.
    std::vector<int> compact(int& baseOut) {
        std::vector<int> id(parent_.size(), -1);
        int n = 0;
        for (std::size_t v = 0; v < parent_.size(); ++v)
            if (find(static_cast<int>(v)) == static_cast<int>(v))
                id[v] = n++;
        std::vector<int> next(static_cast<std::size_t>(n) * 2 * rank_, -1);
        for (std::size_t v = 0; v < parent_.size(); ++v) {
            if (id[v] == -1) continue;
            for (auto& [slot, t] : adj_[v])
                next[id[v] * 2 * rank_ + slot] = id[find(t)];
        }
        baseOut = id[find(0)];
        return next;
    }

private:
    void merge(int a, int b, std::deque<int>& work) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (adj_[a].size() < adj_[b].size()) std::swap(a, b);
        parent_[b] = a;
        adj_[a].insert(adj_[a].end(), adj_[b].begin(), adj_[b].end());
        adj_[b].clear();
        work.push_back(a);
    }

    int rank_;
    std::vector<int> parent_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
};

std::vector<int> relabelBfs(const std::vector<int>& next, int rank, int base) {
    int stride = 2 * rank;
    int n = static_cast<int>(next.size()) / stride;
    std::vector<int> id(n, -1);
    std::vector<int> order;
    order.reserve(n);
    std::queue<int> q;
    id[base] = 0;
    order.push_back(base);
    q.push(base);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int s = 0; s < stride; ++s) {
            int t = next[v * stride + s];
            if (t >= 0 && id[t] == -1) {
                id[t] = static_cast<int>(order.size());
                order.push_back(t);
                q.push(t);
            }
        }
    }
    std::vector<int> out(static_cast<std::size_t>(order.size()) * stride, -1);
    for (int v = 0; v < n; ++v) {
        if (id[v] == -1) continue;  // unreachable vertices are dropped
        for (int s = 0; s < stride; ++s) {
            int t = next[v * stride + s];
            if (t >= 0) out[id[v] * stride + s] = id[t];
        }
    }
    return out;
}

}  // namespace

SubgroupGraph SubgroupGraph::fold(const std::vector<Word>& gens,
                                  const Alphabet& a) {
    FoldState st(a.rank);
    for (const Word& w : gens) {
        if (w.rank() > a.rank) throw UsageError("generator rank exceeds alphabet");
        st.addGenerator(w);
    }
    st.fold();
    int base = 0;
    std::vector<int> next = st.compact(base);
    int stride = 2 * a.rank;
    int n = static_cast<int>(next.size()) / stride;

    // Core trim: peel valency-1 vertices other than the basepoint.
    std::vector<int> val(n, 0);
    for (int v = 0; v < n; ++v)
        for (int s = 0; s < stride; ++s)
            if (next[v * stride + s] >= 0) ++val[v];
    std::queue<int> peel;
    for (int v = 0; v < n; ++v)
        if (v != base && val[v] == 1) peel.push(v);
    while (!peel.empty()) {
        int v = peel.front();
        peel.pop();
        if (val[v] != 1 || v == base) continue;
        for (int s = 0; s < stride; ++s) {
            int t = next[v * stride + s];
            if (t < 0) continue;
            next[v * stride + s] = -1;
            next[t * stride + (s ^ 1)] = -1;
            --val[v];
            --val[t];
            if (t != base && val[t] == 1) peel.push(t);
        }
    }
    return SubgroupGraph(a.rank, relabelBfs(next, a.rank, base), false);
}

int SubgroupGraph::valency(int v) const {
    int stride = 2 * rank_;
    int c = 0;
    for (int s = 0; s < stride; ++s)
        if (next_[v * stride + s] >= 0) ++c;
    return c;
}

std::optional<int> SubgroupGraph::trace(int v, const Word& w) const {
    for (Letter l : w.letters()) {
        v = step(v, l);
        if (v < 0) return std::nullopt;
    }
    return v;
}

bool SubgroupGraph::contains(const Word& w) const {
    auto end = trace(basepoint(), w);
    return end && *end == basepoint();
}

SubgroupGraph SubgroupGraph::saturate() const {
    int stride = 2 * rank_;
    int n = numVertices();
    std::vector<int> next = next_;
    auto attach = [&](int v, int slot) {
        int w = static_cast<int>(next.size()) / stride;
        next.resize(next.size() + stride, -1);
        next[v * stride + slot] = w;
        next[w * stride + (slot ^ 1)] = v;
    };
    if (n == 1 && valency(0) == 0) {
        attach(0, slotOf(Letter(1)));
        return SubgroupGraph(rank_, std::move(next), true);
    }
    for (int v = 0; v < n; ++v) {
        int val = valency(v);
        if (val == 1 || val == stride) continue;
        for (int s = 0; s < stride; ++s)
            if (next_[v * stride + s] < 0) attach(v, s);
    }
    return SubgroupGraph(rank_, std::move(next), true);
}

int SubgroupGraph::geometricEdgeCount() const {
    int stride = 2 * rank_;
    int halves = 0;
    for (int v = 0; v < numVertices(); ++v)
        for (int s = 0; s < stride; ++s)
            if (next_[v * stride + s] >= 0) ++halves;
    // every geometric edge, loops included, occupies exactly two slots
    return halves / 2;
}

int SubgroupGraph::bettiNumber() const {
    return geometricEdgeCount() - numVertices() + 1;
}

Word SubgroupGraph::pathWordTo(int v) const {
    int stride = 2 * rank_;
    int n = numVertices();
    std::vector<int> parent(n, -2);
    std::vector<Letter> via(n, 0);
    std::queue<int> q;
    parent[basepoint()] = -1;
    q.push(basepoint());
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        if (u == v) break;
        for (int s = 0; s < stride; ++s) {
            int t = next_[u * stride + s];
            if (t >= 0 && parent[t] == -2) {
                parent[t] = u;
                via[t] = letterOf(s);
                q.push(t);
            }
        }
    }
    if (parent[v] == -2) throw VerificationError("vertex unreachable from base");
    std::vector<Letter> rev;
    for (int u = v; parent[u] != -1; u = parent[u]) rev.push_back(via[u]);
    std::reverse(rev.begin(), rev.end());
    return Word::reduce(rev, Alphabet(rank_));
}

std::vector<int> SubgroupGraph::canonicalTable() const {
    return relabelBfs(next_, rank_, basepoint());
}

StarInvolution starInvolution(const SubgroupGraph& g) {
    if (!g.saturated())
        throw UsageError("star involution requires a saturated graph");
    StarInvolution inv;
    int stride = 2 * g.rank();
    for (int u = 0; u < g.numVertices(); ++u) {
        if (!g.isOuter(u)) continue;
        for (int s = 0; s < stride; ++s) {
            if (g.stepSlot(u, s) < 0) continue;
            DirEdge e{u, s};
            StarInvolution::Entry entry;
            entry.line.push_back(u);
            DirEdge cur = e;
            while (true) {
                int t = g.stepSlot(cur.v, cur.slot);
                if (t < 0)
                    throw VerificationError(
                        "label line interrupted: graph is not saturated");
                entry.line.push_back(t);
                if (g.isOuter(t)) {
                    entry.star = cur;
                    break;
                }
                cur = DirEdge{t, cur.slot};
            }
            inv.pairing[e] = std::move(entry);
        }
    }
    return inv;
}

namespace {

// Strips the maximal common conjugation wrapper q from a generator set:
// every generator has the literal shape q m q^-1. Returns the wrapper
// prefixes q_0="", q_1, ..., and the generator sets at each depth.
std::vector<std::vector<Word>> wrapLevels(const std::vector<Word>& gens,
                                          int rank, Word& deepestWrapper,
                                          std::vector<Word>& wrappers) {
    std::vector<std::vector<Word>> levels;
    std::vector<Word> cur = gens;
    Word q{Alphabet(rank)};
    levels.push_back(cur);
    wrappers.push_back(q);
    while (true) {
        Letter head = cur.front().letters().front();
        bool ok = true;
        for (const Word& w : cur) {
            if (w.length() < 3 || w.letters().front() != head ||
                w.letters().back() != -head) {
                ok = false;
                break;
            }
        }
        if (!ok) break;
        std::vector<Word> stripped;
        for (const Word& w : cur) {
            std::vector<Letter> inner(w.letters().begin() + 1,
                                      w.letters().end() - 1);
            stripped.push_back(Word::reduce(inner, Alphabet(rank)));
        }
        q = q.times(Word::reduce({head}, Alphabet(rank)));
        cur = std::move(stripped);
        levels.push_back(cur);
        wrappers.push_back(q);
    }
    deepestWrapper = q;
    return levels;
}

}  // namespace

std::optional<Word> conjInto(const SubgroupGraph& h2,
                             const std::vector<Word>& h2Gens,
                             const SubgroupGraph& h1) {
    (void)h2;
    std::vector<Word> gens;
    for (const Word& w : h2Gens)
        if (!w.empty()) gens.push_back(w);
    if (gens.empty()) return Word(Alphabet(h1.rank()));

    Word deepest(Alphabet(h1.rank()));
    std::vector<Word> wrappers;
    auto levels = wrapLevels(gens, h1.rank(), deepest, wrappers);

    for (std::size_t d = 0; d < levels.size(); ++d) {
        for (int u = 0; u < h1.numVertices(); ++u) {
            bool allLoop = true;
            for (const Word& w : levels[d]) {
                auto end = h1.trace(u, w);
                if (!end || *end != u) {
                    allLoop = false;
                    break;
                }
            }
            if (allLoop)
                return wrappers[d].times(h1.pathWordTo(u).inverse());
        }
    }
    return std::nullopt;
}

std::optional<Word> conjugateWitness(const SubgroupGraph& h1,
                                     const std::vector<Word>& h1Gens,
                                     const SubgroupGraph& h2,
                                     const std::vector<Word>& h2Gens) {
    auto g1 = conjInto(h1, h1Gens, h2);
    if (!g1) return std::nullopt;
    auto g2 = conjInto(h2, h2Gens, h1);
    if (!g2) return std::nullopt;
    // Mutual conjugacy-into of f.g. subgroups forces equality under the
    // first conjugator; anything else is a hard internal inconsistency.
    for (const Word& w : h1Gens)
        if (!h2.contains(w.conjugatedBy(*g1)))
            throw VerificationError("mutual conj-into without h1^g <= h2");
    for (const Word& w : h2Gens)
        if (!h1.contains(w.conjugatedBy(g1->inverse())))
            throw VerificationError("mutual conj-into without h2 <= h1^g");
    return g1;
}

std::string SubgroupGraph::toJson() const {
    nlohmann::json j;
    j["rank"] = rank_;
    j["vertices"] = numVertices();
    j["basepoint"] = basepoint();
    nlohmann::json edges = nlohmann::json::array();
    int stride = 2 * rank_;
    for (int v = 0; v < numVertices(); ++v)
        for (int s = 0; s < stride; s += 2) {
            int t = next_[v * stride + s];
            if (t >= 0)
                edges.push_back({{"src", v},
                                 {"dst", t},
                                 {"label", letterToString(letterOf(s), rank_)}});
        }
    j["edges"] = std::move(edges);
    nlohmann::json core = nlohmann::json::array();
    for (int v = 0; v < numVertices(); ++v) core.push_back(v);
    j["core"] = std::move(core);
    return j.dump();
}

SubgroupGraph SubgroupGraph::fromJson(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int rank = j.at("rank").get<int>();
    int n = j.at("vertices").get<int>();
    int stride = 2 * rank;
    std::vector<int> next(static_cast<std::size_t>(n) * stride, -1);
    Alphabet a(rank);
    for (const auto& e : j.at("edges")) {
        int src = e.at("src").get<int>();
        int dst = e.at("dst").get<int>();
        Word lw = Word::parse(e.at("label").get<std::string>(), a);
        if (lw.length() != 1) throw UsageError("edge label must be one letter");
        Letter l = lw.letters()[0];
        if (src < 0 || src >= n || dst < 0 || dst >= n)
            throw UsageError("edge endpoint out of range");
        if (next[src * stride + slotOf(l)] != -1 ||
            next[dst * stride + slotOf(-l)] != -1)
            throw UsageError("graph is not folded");
        next[src * stride + slotOf(l)] = dst;
        next[dst * stride + slotOf(-l)] = src;
    }
    return SubgroupGraph(rank, std::move(next), false);
}

}  // namespace scs
