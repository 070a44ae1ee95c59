#ifndef SCS_VF_WITNESS_HPP
#define SCS_VF_WITNESS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "scs/precovering.hpp"

namespace scs {

/// Raised when the witness construction discovers that some conjugate of H2
/// does lie in the finite-index subgroup it built; carries the fixed sheet.
class VfConjugateIntoError : public std::runtime_error {
public:
    explicit VfConjugateIntoError(int sheet)
        : std::runtime_error("h2 generators share fixed sheet " +
                             std::to_string(sheet) +
                             ": a conjugate of h2 lies in the built subgroup"),
          fixedSheet(sheet) {}
    int fixedSheet;
};

/// The normalizer condition could not be verified for the input graph of
/// groups and the caller did not assume it.
struct NormalizerUnverifiedError : std::runtime_error {
    explicit NormalizerUnverifiedError(const std::string& msg)
        : std::runtime_error(msg) {}
};

/// Sheets over the base vertex of a complete covering, indexed so that the
/// basepoint sheet is 0; closed base paths act by lifting.
class SheetIndex {
public:
    explicit SheetIndex(const PreCovering& z);

    int count() const { return static_cast<int>(sheets_.size()); }
    std::pair<int, int> sheet(int i) const { return sheets_[i]; }

    /// The permutation of the sheets induced by a closed reduced path at
    /// the base vertex.
    std::vector<int> action(const GPath& p) const;

private:
    const PreCovering* z_;
    LiftIndex lifts_;
    std::vector<std::pair<int, int>> sheets_;  // (piece, coset rep)
    std::vector<int> lookup_;                  // piece * maxOrder + rep -> id
    int maxOrder_;
};

/// Everything needed to re-check "H1 <= H3, no conjugate of H2 <= H3" for
/// the finite-index subgroup H3 = stabilizer of sheet 0, without trusting
/// the construction.
struct VfWitnessCertificate {
    std::shared_ptr<GraphOfGroups> gog;  // shared so cover's back-pointer
                                         // survives copies of the certificate
    std::vector<GPath> h1Gens, h2Gens;
    int C = 0;
    PreCovering cover;
    int sheets = 0;
    std::vector<std::vector<int>> h1Tables, h2Tables;
    bool h1FixesBase = false;
    bool h2NoCommonFixed = false;
    std::vector<std::string> buildLog;
    std::uint64_t seed = 0;

    std::string toJson() const;
    static VfWitnessCertificate fromJson(const std::string& text);
};

/// C = 2 max |h_i| + 3 over the reduced h2 generators; rejects generator
/// sets whose reduced lengths are all zero.
int vfConstant(const GraphOfGroups& g, const std::vector<GPath>& h2Gens);

/// Full pipeline: fold h1, close nontrivial faces, thicken by C, complete
/// to a covering, then act on its base sheets. Throws VfConjugateIntoError
/// when the h2 generators share a fixed sheet and NormalizerUnverifiedError
/// when the normalizer condition fails and is not assumed.
VfWitnessCertificate vfSicsWitness(const GraphOfGroups& g,
                                   const std::vector<GPath>& h1Gens,
                                   const std::vector<GPath>& h2Gens,
                                   std::uint64_t seed,
                                   bool assumeNormalizerCondition = false);

VerifyResult verifyVfCertificate(const VfWitnessCertificate& cert);

/// Either a conjugator g with h2^g <= H1 or a witness certificate; obtained
/// by alternating an iterative-deepening conjugator search with witness
/// attempts.
struct VfDecision {
    bool conjugateInto = false;
    GPath conjugator;           // when conjugateInto
    VfWitnessCertificate cert;  // otherwise

    std::string toJson() const;
};

VfDecision vfConjIntoDecide(const GraphOfGroups& g,
                            const std::vector<GPath>& h1Gens,
                            const std::vector<GPath>& h2Gens,
                            std::uint64_t seed);

/// The finite quotient G -> Sym(sheets) read off a verified certificate:
/// images of every vertex-group element (conjugated to the base vertex
/// along tree paths) plus the images of both generator sets.
struct VfQuotientWitness {
    int sheets = 0;
    std::vector<std::vector<std::vector<int>>> vertexImages;  // [v][g] -> perm
    std::vector<std::vector<int>> h1Images, h2Images;

    std::string toJson() const;
};

VfQuotientWitness vfQuotientWitness(const VfWitnessCertificate& cert);

}  // namespace scs

#endif
