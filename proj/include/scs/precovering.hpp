#ifndef SCS_PRECOVERING_HPP
#define SCS_PRECOVERING_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "scs/errors.hpp"
#include "scs/graph_of_groups.hpp"

namespace scs {

// close_nontrivial_faces exceeded its growth cap; the construction only
// diverges when some edge subgroup has an infinite normalizer upstairs.
struct NormalizerConditionError : std::runtime_error {
    explicit NormalizerConditionError(const std::string& msg)
        : std::runtime_error(msg) {}
};

/// A gluing identifies body cosets P_a ga rhoI(c) <-> P_b gb rhoT(c) for all
/// c in the group of edge de/2; piece a lives at i(de), piece b at t(de).
struct PieceGluing {
    int a = 0, de = 0, ga = 0;
    int b = 0, gb = 0;
};

/// A free face of a piece: the double coset P \ G_v / rhoI(G_e) of rep over
/// directed edge de, with its face subgroup of the edge group.
struct Handle {
    int piece = 0, de = 0, rep = 0;
    std::vector<int> face;
};

/// A disjoint union of vertex pieces (vertex, body subgroup) with face
/// gluings, the combinatorial stand-in for a space mapping to the tree of
/// groups. Folded when no handle carries two gluings and glued face groups
/// agree on both sides.
class PreCovering {
public:
    struct Piece {
        int vertex = 0;
        std::vector<int> body;  // sorted subgroup of G_vertex
    };

    const GraphOfGroups* gog = nullptr;
    std::vector<Piece> pieces;
    std::vector<PieceGluing> gluings;
    int basePiece = 0;
    int baseRep = 0;

    int numPieces() const { return static_cast<int>(pieces.size()); }
    int addPiece(int vertex, std::vector<int> body);
    bool inBody(int piece, int g) const;

    /// Canonical (minimal) representative of P_piece * g * rhoI(G_e).
    int cosetRep(int piece, int de, int g) const;
    /// Face subgroup {c : g rhoI(c) g^-1 in P} of the edge group of de.
    std::vector<int> faceGroup(int piece, int de, int g) const;

    /// All handles of a piece, canonical reps, by (de, rep).
    std::vector<Handle> handlesOf(int piece) const;
    std::vector<Handle> freeHandles() const;

    /// Merges pieces and grows bodies until folded.
    void fold();

    /// Folded shape, gluing consistency, matched face groups, and the
    /// per-vertex sheet-count invariant against a reference total when the
    /// covering is meant to be complete (sheets < 0 skips that check).
    void validate(bool requireComplete = false) const;

    /// Sheets over a vertex: sum of [G_v : P] over its pieces.
    long sheetsOver(int vertex) const;

    std::string toJson() const;
    static PreCovering fromJson(const GraphOfGroups& g, const std::string& text);
};

/// Stallings fold of generator paths: a base piece with trivial body, a
/// chain of trivial pieces per generator, then folding. The generators lift
/// closed at the basepoint afterwards.
PreCovering foldSubgroup(const GraphOfGroups& g, const std::vector<GPath>& gens);

/// Repeatedly attaches the canonical piece rhoT(face) across each free
/// handle with nontrivial face group. Throws NormalizerConditionError when
/// the attachment count exceeds the cap derived from the (edge, subgroup)
/// state space.
PreCovering closeNontrivialFaces(PreCovering z);

/// Grows a collar of universal (trivial-body) pieces so every free handle
/// sits at piece-distance >= depth from the input region.
PreCovering thicken(PreCovering z, int depth);

struct LiftResult {
    bool stayed = true;  // false: the lift ran off a free handle
    int piece = 0, rep = 0;
    int crossings = 0;
};

/// Precomputed (piece, directed edge) -> half-gluing lookup; build once per
/// pre-covering when lifting many paths.
class LiftIndex {
public:
    explicit LiftIndex(const PreCovering& z);
    LiftResult lift(const GPath& p, int startPiece, int startRep) const;

private:
    struct Half {
        int rep, gIn, partner, gOut;
    };
    const PreCovering* z_;
    std::int64_t key_;
    std::unordered_map<std::int64_t, std::vector<Half>> halves_;
};

/// Lifts a path from the body coset P_startPiece * startRep, crossing
/// gluings. Total on complete coverings.
LiftResult liftPath(const PreCovering& z, const GPath& p, int startPiece,
                    int startRep);

/// A closed path lifts closed at the basepoint. On the folded-and-closed
/// pre-covering of H this decides membership in H.
bool liftsClosed(const PreCovering& z, const GPath& p);

/// Edge length of a reduced closed path measured on its lift; equals the
/// number of gluing crossings.
int eLength(const PreCovering& z, const GPath& p);

/// The universal piece over t(de) with its handles over the return edge:
/// bReps lists one representative per coset g * rhoI(G_e) of G_{t(de)}, so
/// s = bReps.size() = [G_t : Im rhoT].
struct AssociatedTuple {
    int vertex = 0;
    std::vector<int> bReps;
};

AssociatedTuple associatedTuple(const GraphOfGroups& g, int de);

/// Completes a thickened pre-covering to a covering: rounds of star gluings
/// over the order-maximal free-handle edge, each round strictly decreasing
/// that edge. buildLog (optional) records one line per round.
PreCovering completeCover(PreCovering y1, int girthBound, std::uint64_t seed,
                          std::vector<std::string>* buildLog = nullptr);

}  // namespace scs

#endif
