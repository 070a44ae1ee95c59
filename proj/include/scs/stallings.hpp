#ifndef SCS_STALLINGS_HPP
#define SCS_STALLINGS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scs/word.hpp"

namespace scs {

/// Direction slot of a letter at a vertex: out-x1, in-x1, out-x2, in-x2, ...
inline int slotOf(Letter l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; }
inline Letter letterOf(int slot) {
    return slot % 2 == 0 ? Letter(slot / 2 + 1) : Letter(-(slot / 2 + 1));
}

/// A directed edge of a folded labeled graph, as (source vertex, slot).
struct DirEdge {
    int v;
    int slot;
    bool operator==(const DirEdge& o) const { return v == o.v && slot == o.slot; }
    bool operator<(const DirEdge& o) const {
        return v != o.v ? v < o.v : slot < o.slot;
    }
};

/// Folded, based Stallings graph of a finitely generated subgroup of a free
/// group. All stored vertices form the core (plus, after saturation, the
/// attached valency-1 outer vertices). Immutable after construction.
class SubgroupGraph {
public:
    /// Folded based core graph of the subgroup generated by gens.
    static SubgroupGraph fold(const std::vector<Word>& gens, const Alphabet& a);

    int rank() const { return rank_; }
    int basepoint() const { return 0; }
    int numVertices() const { return static_cast<int>(next_.size() / (2 * rank_)); }
    bool saturated() const { return saturated_; }

    int step(int v, Letter l) const { return next_[v * 2 * rank_ + slotOf(l)]; }
    int stepSlot(int v, int slot) const { return next_[v * 2 * rank_ + slot]; }
    int valency(int v) const;
    bool isOuter(int v) const { return valency(v) == 1; }

    /// Traces w from vertex v; nullopt when the path leaves the graph.
    std::optional<int> trace(int v, const Word& w) const;
    bool contains(const Word& w) const;

    /// Attaches fresh valency-1 vertices so every original vertex has
    /// valency 1 or 2n. The single-vertex graph of the trivial subgroup
    /// receives one fresh x1 edge.
    SubgroupGraph saturate() const;

    /// Reverse of a directed edge.
    DirEdge reverse(DirEdge e) const { return {stepSlot(e.v, e.slot), e.slot ^ 1}; }

    int geometricEdgeCount() const;
    int bettiNumber() const;

    /// Reduced word spelled along a shortest path basepoint -> v.
    Word pathWordTo(int v) const;

    /// Canonical relabeling by BFS from the basepoint; equal results mean
    /// based-label-isomorphic graphs (folded graphs are rigid over a base).
    std::vector<int> canonicalTable() const;

    const std::vector<int>& rawTable() const { return next_; }

    std::string toJson() const;
    static SubgroupGraph fromJson(const std::string& text);

private:
    friend class GraphBuilder;
    SubgroupGraph(int rank, std::vector<int> next, bool saturated)
        : rank_(rank), next_(std::move(next)), saturated_(saturated) {}

    int rank_;
    std::vector<int> next_;  // v * 2n + slot -> target, -1 if absent
    bool saturated_ = false;
};

/// Assembles a SubgroupGraph from a raw slot table (2n entries per vertex,
/// -1 for absent); used by constructions that build covers edge by edge.
class GraphBuilder {
public:
    static SubgroupGraph make(int rank, std::vector<int> next, bool saturated) {
        return SubgroupGraph(rank, std::move(next), saturated);
    }
};

/// The pairing e -> e* on outer directed edges starting at outer vertices,
/// together with the label-constant line realizing it.
struct StarInvolution {
    struct Entry {
        DirEdge star;            // e*
        std::vector<int> line;   // vertices of e1...ek, including both ends
    };
    std::map<DirEdge, Entry> pairing;

    DirEdge sigma(const SubgroupGraph& g, DirEdge e) const {
        return g.reverse(pairing.at(e).star);
    }
};

StarInvolution starInvolution(const SubgroupGraph& g);

/// Conjugator g with h2^g <= h1 (h^g = g^-1 h g), or nullopt.
/// h2Gens are the generators h2 was built from; the scan rewraps them by
/// their maximal common conjugation wrapper before testing core vertices.
std::optional<Word> conjInto(const SubgroupGraph& h2,
                             const std::vector<Word>& h2Gens,
                             const SubgroupGraph& h1);

/// Conjugator g with h1^g = h2 exactly, or nullopt. Throws
/// VerificationError if mutual conjugacy-into holds but equality fails.
std::optional<Word> conjugateWitness(const SubgroupGraph& h1,
                                     const std::vector<Word>& h1Gens,
                                     const SubgroupGraph& h2,
                                     const std::vector<Word>& h2Gens);

}  // namespace scs

#endif
