#ifndef SCS_GROUP_TABLE_HPP
#define SCS_GROUP_TABLE_HPP

#include <string>
#include <vector>

namespace scs {

/// A finite group as a multiplication table over element ids 0..order-1,
/// with 0 the identity. Tiny at desk scale; validation is brute force.
struct FiniteGroupTable {
    int order = 1;
    std::vector<int> mul;  // mul[a * order + b] = a*b
    std::vector<int> inv;

    int times(int a, int b) const { return mul[a * order + b]; }
    int inverse(int a) const { return inv[a]; }

    /// Identity at 0, associativity, inverses; fills inv if empty.
    void validate();

    static FiniteGroupTable trivial();
    static FiniteGroupTable cyclic(int n);
    static FiniteGroupTable dihedral(int n);  // order 2n; dihedral(3) = S3

    std::string toJson() const;
    static FiniteGroupTable fromJson(const std::string& text);
};

/// Smallest subgroup containing gens, as a sorted element list.
std::vector<int> subgroupClosure(const FiniteGroupTable& g,
                                 const std::vector<int>& gens);

/// Every subgroup, each a sorted element list; the trivial subgroup first.
std::vector<std::vector<int>> allSubgroups(const FiniteGroupTable& g);

/// Whether map (indexed by source elements) is an injective homomorphism
/// from src into dst.
bool isMonomorphism(const FiniteGroupTable& src, const FiniteGroupTable& dst,
                    const std::vector<int>& map);

}  // namespace scs

#endif
