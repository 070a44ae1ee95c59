#ifndef SCS_GRAPH_OF_GROUPS_HPP
#define SCS_GRAPH_OF_GROUPS_HPP

#include <string>
#include <vector>

#include "scs/group_table.hpp"

namespace scs {

/// A geometric edge of a tree of groups, with its boundary monomorphisms
/// as element maps into the endpoint vertex groups.
struct GogEdge {
    int src = 0, dst = 0;
    FiniteGroupTable group;
    std::vector<int> rhoSrc, rhoDst;  // G_e -> G_src, G_e -> G_dst
};

/// Directed edges are 2*id (src->dst) and 2*id+1 (dst->src).
class GraphOfGroups {
public:
    std::vector<FiniteGroupTable> vertexGroups;
    std::vector<GogEdge> edges;
    int base = 0;

    int numVertices() const { return static_cast<int>(vertexGroups.size()); }
    int numEdges() const { return static_cast<int>(edges.size()); }

    static int opposite(int de) { return de ^ 1; }
    int iVert(int de) const {
        return de % 2 == 0 ? edges[de / 2].src : edges[de / 2].dst;
    }
    int tVert(int de) const { return iVert(opposite(de)); }
    const FiniteGroupTable& edgeGroup(int de) const { return edges[de / 2].group; }
    /// rho into the group at i(de) / t(de).
    const std::vector<int>& rhoI(int de) const {
        return de % 2 == 0 ? edges[de / 2].rhoSrc : edges[de / 2].rhoDst;
    }
    const std::vector<int>& rhoT(int de) const { return rhoI(opposite(de)); }

    /// Tree shape, validated groups, injective homomorphic monos.
    void validate();

    static GraphOfGroups amalgam(FiniteGroupTable a, FiniteGroupTable b,
                                 FiniteGroupTable e, std::vector<int> rhoA,
                                 std::vector<int> rhoB);

    std::string toJson() const;
    static GraphOfGroups fromJson(const std::string& text);
};

/// g1 e1 g2 e2 ... ek g_{k+1}; element ids live in the vertex groups along
/// the edge path starting at startVertex.
struct GPath {
    int startVertex = 0;
    std::vector<int> elems;     // k+1 entries
    std::vector<int> dirEdges;  // k directed edges

    int length() const { return static_cast<int>(dirEdges.size()); }
    void validate(const GraphOfGroups& g) const;
    int endVertex(const GraphOfGroups& g) const;
    bool closed(const GraphOfGroups& g) const;

    /// Grammar: `g@v : e : g@v : ...` with `~id` for a reversed edge.
    std::string str(const GraphOfGroups& g) const;
    static GPath parse(const GraphOfGroups& g, const std::string& text);
};

/// Exhausts type-2 reductions, then normalizes each element to its minimal
/// coset representative by a left-to-right sweep of type-1 moves. Two
/// equivalent paths reduce to syntactically equal results.
GPath reducePath(const GraphOfGroups& g, GPath p);

/// Edge count of the reduced form of a closed path (the length |g|).
int pathLength(const GraphOfGroups& g, const GPath& p);

/// Formal inverse g_{k+1}^-1 ek-bar ... e1-bar g_1^-1.
GPath pathInverse(const GraphOfGroups& g, const GPath& p);

/// Concatenation p * q; q must start where p ends.
GPath pathConcat(const GraphOfGroups& g, const GPath& p, const GPath& q);

/// The identity path at a vertex.
GPath trivialPath(int vertex);

/// m(de) = geometric edges in the component of t(de) after removing de;
/// the order compares (m, directed edge id).
struct EdgeOrder {
    std::vector<int> m;
    bool less(int de1, int de2) const {
        return m[de1] != m[de2] ? m[de1] < m[de2] : de1 < de2;
    }
};

EdgeOrder edgeOrder(const GraphOfGroups& g);

struct NormalizerReport {
    enum class Verdict { Holds, Fails, Unknown } verdict = Verdict::Holds;
    int dirEdge = -1;           // a state on the witnessing cycle
    std::vector<int> subgroup;  // subgroup of its edge group
};

/// Transports every nontrivial edge subgroup along reduced paths; a cycle
/// in the finite state graph is exactly an infinite-normalizer witness.
NormalizerReport checkNormalizerCondition(const GraphOfGroups& g);

}  // namespace scs

#endif
