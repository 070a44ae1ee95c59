#ifndef SCS_PERM_COVER_HPP
#define SCS_PERM_COVER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scs/multigraph.hpp"
#include "scs/word.hpp"

namespace scs {

/// Finite cover of the rose: one permutation of the sheet set per generator.
/// Sheet 0 is the basepoint.
struct PermCover {
    int rank = 1;
    int degree = 1;
    std::vector<std::vector<int>> perms;  // perms[i][sheet], generator x_{i+1}

    static PermCover trivial(const Alphabet& a);

    int apply(Letter l, int sheet) const;

    /// Every perm a bijection and the action graph connected.
    void validate() const;
    bool connected() const;

    Multigraph actionGraph() const;

    std::string toJson() const;
    static PermCover fromJson(const std::string& text);
};

/// Exact girth when <= cap, nullopt for ">= cap+1". A cycle is a closed
/// nontrivial reduced edge path in the action graph.
std::optional<int> girth(const PermCover& cover, int cap);

/// Precomputed forward/inverse tables for tracing words sheet by sheet.
struct SheetAction {
    explicit SheetAction(const PermCover& cover);
    int apply(Letter l, int sheet) const;
    int trace(const Word& w, int sheet) const;
    std::vector<std::vector<int>> fwd, inv;
};

/// Image of w under the quotient homomorphism F -> Sym(sheets).
std::vector<int> cosetAction(const PermCover& cover, const Word& w);

bool fixesSheet(const PermCover& cover, const Word& w, int sheet);

/// Connected cover of degree |w|+1 in which w is not a loop at sheet 0
/// (M. Hall completion of the w-segment graph).
PermCover excludeWordCover(const Word& w);

struct CoverLimits {
    long maxSheets = 1000000;
    int randomRetries = 24;
};

/// Regular cover realizing the intersection of the normal cores of the
/// input covers' sheet-0 subgroups: the Cayley graph of the permutation
/// group generated by the tuples of generator permutations.
PermCover productKernel(const std::vector<PermCover>& covers,
                        const CoverLimits& limits = {});

/// Self-contained, BFS-checkable claim that a cover has girth >= bound+1.
struct GirthCertificate {
    PermCover cover;
    int bound = 0;                        // claimed: no cycle of length <= bound
    std::optional<int> shortestCycle;     // nullopt = "none <= bound"

    std::string toJson() const;
    static GirthCertificate fromJson(const std::string& text);
};

bool verifyGirthCertificate(const GirthCertificate& cert, std::string* reason = nullptr);

struct KStrategy {
    enum class Kind { Exact, Random } kind = Kind::Exact;
    std::uint64_t seed = 0;
    int degree = 4;  // starting degree for the random strategy

    static KStrategy parse(const std::string& text);
    std::string str() const;
};

/// Connected regular cover whose sheet-0 subgroup K is normal of finite
/// index with girth >= C+1, plus the certificate.
std::pair<PermCover, GirthCertificate> buildK(const Alphabet& a, int C,
                                              const KStrategy& strategy,
                                              const CoverLimits& limits = {});

/// Schreier generators of the sheet-0 subgroup.
std::vector<Word> schreierGenerators(const PermCover& cover);

/// Whether the subgroup at every sheet equals the subgroup at sheet 0.
bool isRegularCover(const PermCover& cover);

}  // namespace scs

#endif
