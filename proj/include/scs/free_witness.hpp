#ifndef SCS_FREE_WITNESS_HPP
#define SCS_FREE_WITNESS_HPP

#include <string>
#include <vector>

#include "scs/perm_cover.hpp"
#include "scs/stallings.hpp"
#include "scs/word.hpp"

namespace scs {

/// Raised when a witness is requested for a pair where H2 is in fact
/// conjugate into H1; carries the conjugator.
class ConjugateIntoError : public std::runtime_error {
public:
    explicit ConjugateIntoError(Word g)
        : std::runtime_error("h2 is conjugate into h1 (conjugator: " +
                             (g.empty() ? std::string("identity") : g.str()) +
                             ")"),
          conjugator(std::move(g)) {}
    Word conjugator;
};

/// Everything needed to re-check "H1 <= D, no conjugate of H2 <= D" for a
/// finite-index subgroup D, without trusting the construction.
struct WitnessCertificate {
    int rank = 1;
    std::vector<Word> h1Gens, h2Gens;
    int C = 1;
    PermCover D;
    int index = 1;           // = D.degree
    GirthCertificate girthPart;
    bool h1Contained = false;
    bool h2NoFixedPoint = false;

    std::string toJson() const;
    static WitnessCertificate fromJson(const std::string& text);
};

/// Glues one copy of Gamma_K minus a matching edge onto each sigma-orbit of
/// outer edges of the saturated h1 graph; the result is a connected
/// 2n-regular cover containing h1 at its basepoint sheet.
PermCover buildDelta(const SubgroupGraph& h1, const PermCover& K);

/// Full pipeline: C = 2 max |h2 gen|, K of girth >= C+1, Delta, both sheet
/// checks. Throws ConjugateIntoError when H2 is conjugate into H1 and
/// VerificationError when a check the construction guarantees fails.
WitnessCertificate sicsWitness(const std::vector<Word>& h1Gens,
                               const std::vector<Word>& h2Gens,
                               const Alphabet& a, const KStrategy& strategy,
                               const CoverLimits& limits = {});

VerifyResult verifyCertificate(const WitnessCertificate& cert);

/// The finite quotient F -> Sym(index) read off a verified certificate,
/// with the images of both generator sets spelled out.
struct QuotientWitness {
    int rank = 1;
    int index = 1;
    std::vector<std::vector<int>> generatorImages;
    std::vector<std::vector<int>> h1Images, h2Images;

    std::string toJson() const;
};

QuotientWitness quotientWitness(const WitnessCertificate& cert);

/// Trichotomy result for a pair of subgroups.
struct ScsResult {
    enum class Kind { Conjugate, Witness } kind = Kind::Conjugate;
    Word conjugator;             // Kind::Conjugate
    WitnessCertificate cert;     // Kind::Witness
    bool swapped = false;        // witness separates H1 out of H2's covers

    std::string toJson() const;
};

/// Either a conjugator with H1^g = H2 or a non-conjugacy witness for a
/// failing conj-into direction (H2 -/-> H1 preferred).
ScsResult scsWitness(const std::vector<Word>& h1Gens,
                     const std::vector<Word>& h2Gens, const Alphabet& a,
                     const KStrategy& strategy, const CoverLimits& limits = {});

}  // namespace scs

#endif
