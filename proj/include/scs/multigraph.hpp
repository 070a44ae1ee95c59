#ifndef SCS_MULTIGRAPH_HPP
#define SCS_MULTIGRAPH_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace scs {

/// Undirected multigraph with explicit edge ids. Loops and parallel edges
/// are allowed; a loop contributes a cycle of length 1.
class Multigraph {
public:
    explicit Multigraph(std::size_t nvertices = 0) : adj_(nvertices) {}

    std::size_t numVertices() const { return adj_.size(); }
    std::size_t numEdges() const { return nedges_; }

    int addEdge(int u, int v);

    struct Arc {
        int to;
        int edge;
    };
    const std::vector<Arc>& arcs(int v) const { return adj_[v]; }

    bool connected() const;

private:
    std::vector<std::vector<Arc>> adj_;
    std::size_t nedges_ = 0;
};

/// Shortest cycle length, where a cycle is a closed nontrivial edge path
/// that never immediately reuses the edge it just traversed.
/// Returns nullopt when no cycle of length <= cap exists.
std::optional<int> girthSerial(const Multigraph& g, int cap);

/// OpenMP variant of girthSerial; falls back to serial without OpenMP.
/// Must agree with girthSerial on every input.
std::optional<int> girthParallel(const Multigraph& g, int cap);

/// Shortest cycle visible from one source. Exact girth on vertex-transitive
/// graphs (every Cayley graph); a lower-bound certificate check otherwise.
std::optional<int> girthFromSource(const Multigraph& g, int s, int cap);

}  // namespace scs

#endif
