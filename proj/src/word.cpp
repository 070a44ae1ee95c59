#include "scs/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

namespace scs {

Word Word::reduce(const std::vector<Letter>& raw, const Alphabet& a) {
    Word w(a);
    for (Letter l : raw) {
        if (l == 0 || std::abs(l) > a.rank)
            throw UsageError("letter index out of range for rank " +
                             std::to_string(a.rank));
        if (!w.letters_.empty() && w.letters_.back() == -l)
            w.letters_.pop_back();
        else
            w.letters_.push_back(l);
    }
    return w;
}

Word Word::inverse() const {
    Word w;
    w.rank_ = rank_;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
        w.letters_.push_back(-*it);
    return w;
}

Word Word::times(const Word& other) const {
    std::vector<Letter> raw = letters_;
    raw.insert(raw.end(), other.letters_.begin(), other.letters_.end());
    return reduce(raw, Alphabet(std::max(rank_, other.rank_)));
}

std::pair<Word, Word> Word::cyclicReduce() const {
    std::size_t lo = 0, hi = letters_.size();
    Word conj;
    conj.rank_ = rank_;
    while (hi - lo >= 2 && letters_[lo] == -letters_[hi - 1]) {
        conj.letters_.push_back(letters_[lo]);
        ++lo;
        --hi;
    }
    Word core;
    core.rank_ = rank_;
    core.letters_.assign(letters_.begin() + lo, letters_.begin() + hi);
    return {core, conj};
}

Word Word::conjugatedBy(const Word& g) const {
    return g.inverse().times(*this).times(g);
}

std::string letterToString(Letter l, int rank) {
    int i = std::abs(l);
    if (rank <= 26) {
        char c = static_cast<char>((l > 0 ? 'a' : 'A') + i - 1);
        return std::string(1, c);
    }
    return (l > 0 ? "x" : "X") + std::to_string(i);
}

std::string Word::str() const {
    std::string out;
    for (Letter l : letters_) out += letterToString(l, rank_);
    return out;
}

Word Word::parse(const std::string& text, const Alphabet& a) {
    std::vector<Letter> raw;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (a.rank <= 26) {
            if (c >= 'a' && c <= 'z')
                raw.push_back(static_cast<Letter>(c - 'a' + 1));
            else if (c >= 'A' && c <= 'Z')
                raw.push_back(static_cast<Letter>(-(c - 'A' + 1)));
            else
                throw UsageError(std::string("unexpected character '") + c +
                                 "' in word");
            ++i;
        } else {
            if (c != 'x' && c != 'X')
                throw UsageError(std::string("unexpected character '") + c +
                                 "' in word (rank > 26 uses xN / XN tokens)");
            std::size_t j = i + 1;
            while (j < text.size() &&
                   std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            if (j == i + 1) throw UsageError("missing index after x/X token");
            int idx = std::stoi(text.substr(i + 1, j - i - 1));
            raw.push_back(static_cast<Letter>(c == 'x' ? idx : -idx));
            i = j;
        }
    }
    return reduce(raw, a);
}

Word cyclicCanonical(const Word& w) {
    const auto& ls = w.letters();
    std::size_t n = ls.size();
    Alphabet a(w.rank());
    if (n == 0) return w;
    Word best = w;
    for (int invert = 0; invert < 2; ++invert) {
        Word base = invert ? w.inverse() : w;
        std::vector<Letter> v = base.letters();
        for (std::size_t r = 0; r < n; ++r) {
            std::rotate(v.begin(), v.begin() + 1, v.end());
            Word cand = Word::reduce(v, a);
            if (cand.length() == n && cand < best) best = cand;
        }
    }
    return best;
}

std::vector<Word> enumerateReducedWords(int rank, int len) {
    std::vector<Word> out;
    Alphabet a(rank);
    std::vector<Letter> cur;
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == len) {
            out.push_back(Word::reduce(cur, a));
            return;
        }
        for (int i = 1; i <= rank; ++i) {
            for (Letter l : {Letter(i), Letter(-i)}) {
                if (!cur.empty() && cur.back() == -l) continue;
                cur.push_back(l);
                self(self, depth + 1);
                cur.pop_back();
            }
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<Word> enumerateCyclicClasses(int rank, int len) {
    std::set<Word> seen;
    std::vector<Word> out;
    for (const Word& w : enumerateReducedWords(rank, len)) {
        auto [core, conj] = w.cyclicReduce();
        if (core.length() != static_cast<std::size_t>(len)) continue;
        Word canon = cyclicCanonical(core);
        if (seen.insert(canon).second) out.push_back(canon);
    }
    return out;
}

}  // namespace scs
