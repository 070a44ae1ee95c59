#ifndef SCS_STAR_GLUE_HPP
#define SCS_STAR_GLUE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scs/multigraph.hpp"

namespace scs {

/// A gluing of num_r r-stars to num_s s-stars along a bijection of their
/// peripheral slots. r-slot j belongs to r-center j/r; s-slot matching[j]
/// belongs to s-center matching[j]/s; the two peripheral vertices are
/// identified, giving a degree-2 vertex between the centers.
struct StarGluing {
    int r = 1, s = 1, t = 1;
    int numR = 1, numS = 1;
    std::vector<int> matching;  // r-slot -> s-slot bijection

    /// Bipartite multigraph on the centers (r-centers first); each matched
    /// slot pair is one edge, of glued length 2.
    Multigraph centerGraph() const;

    /// Checks sizes, bijectivity, connectivity and glued girth >= t.
    void validate() const;

    std::string toJson() const;
    static StarGluing fromJson(const std::string& text);
};

/// Deterministic in (r, s, t, seed). Starts at the smallest balanced star
/// counts, repairs short cycles by swapping matched pairs, and doubles the
/// size when a repair budget runs out.
StarGluing glueStars(int r, int s, int t, std::uint64_t seed);

/// Shortest cycle of the glued graph (= twice the center-graph girth),
/// nullopt for ">= cap+1".
std::optional<int> gluedGirth(const StarGluing& g, int cap);

}  // namespace scs

#endif
