#ifndef SCS_WORD_HPP
#define SCS_WORD_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "scs/errors.hpp"

namespace scs {

/// A free group with basis x_1,...,x_n.
struct Alphabet {
    int rank;

    explicit Alphabet(int n) : rank(n) {
        if (n < 1) throw UsageError("alphabet rank must be >= 1");
    }
};

/// A letter is a signed 1-based generator index: +i is x_i, -i is x_i^-1.
using Letter = std::int32_t;

inline Letter inverse(Letter l) { return -l; }

/// A freely reduced word. The empty word is valid and represents the identity.
class Word {
public:
    Word() : rank_(1) {}
    explicit Word(const Alphabet& a) : rank_(a.rank) {}

    /// Free reduction of an arbitrary letter sequence.
    static Word reduce(const std::vector<Letter>& raw, const Alphabet& a);

    /// Parses the letter grammar: a..z / A..Z for ranks <= 26,
    /// x3 / X3 tokens otherwise. Whitespace between letters is optional.
    static Word parse(const std::string& text, const Alphabet& a);

    const std::vector<Letter>& letters() const { return letters_; }
    int rank() const { return rank_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    Word inverse() const;
    Word times(const Word& other) const;  // this * other, reduced

    /// Splits w as conjugator * core * conjugator^-1 with core cyclically
    /// reduced (first and last letters are not mutually inverse).
    std::pair<Word, Word> cyclicReduce() const;  // {core, conjugator}

    /// this^g = g^-1 * this * g.
    Word conjugatedBy(const Word& g) const;

    std::string str() const;

    bool operator==(const Word& o) const { return letters_ == o.letters_; }
    bool operator!=(const Word& o) const { return !(*this == o); }
    bool operator<(const Word& o) const {
        if (letters_.size() != o.letters_.size())
            return letters_.size() < o.letters_.size();
        return letters_ < o.letters_;
    }

private:
    std::vector<Letter> letters_;
    int rank_;
};

/// Formats a single letter under the word grammar.
std::string letterToString(Letter l, int rank);

/// Canonical representative of a cyclically reduced word under cyclic
/// rotation and inversion (the equivalence used when enumerating words
/// excluded from a normal subgroup).
Word cyclicCanonical(const Word& w);

/// All cyclically reduced words of length exactly len, up to rotation and
/// inversion, in a free group of the given rank.
std::vector<Word> enumerateCyclicClasses(int rank, int len);

/// All freely reduced words of length exactly len.
std::vector<Word> enumerateReducedWords(int rank, int len);

}  // namespace scs

#endif
