#include <random>

#include "doctest.h"
#include "scs/perm_cover.hpp"

using namespace scs;

namespace {

Word randomWord(std::mt19937_64& rng, const Alphabet& a, int maxLen) {
    std::vector<Letter> ls;
    int len = 1 + static_cast<int>(rng() % maxLen);
    for (int i = 0; i < len; ++i) {
        int x = 1 + static_cast<int>(rng() % a.rank);
        ls.push_back(rng() % 2 ? Letter(x) : Letter(-x));
    }
    return Word::reduce(ls, a);
}

}  // namespace

TEST_CASE("trivial cover") {
    Alphabet a(2);
    PermCover c = PermCover::trivial(a);
    c.validate();
    CHECK(c.degree == 1);
    CHECK(c.apply(1, 0) == 0);
    CHECK(girth(c, 10) == 1);  // every generator is a loop
}

TEST_CASE("exclude-word cover") {
    Alphabet a(2);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 40; ++trial) {
        Word w = randomWord(rng, a, 6);
        if (w.empty()) continue;
        PermCover c = excludeWordCover(w);
        c.validate();
        CHECK(c.degree == static_cast<int>(w.length()) + 1);
        CHECK(!fixesSheet(c, w, 0));
    }
}

TEST_CASE("coset action is a homomorphism") {
    Alphabet a(2);
    std::mt19937_64 rng(4);
    PermCover c = excludeWordCover(Word::parse("abAB", a));
    for (int trial = 0; trial < 30; ++trial) {
        Word u = randomWord(rng, a, 5), v = randomWord(rng, a, 5);
        auto pu = cosetAction(c, u), pv = cosetAction(c, v);
        auto puv = cosetAction(c, u.times(v));
        for (int s = 0; s < c.degree; ++s) CHECK(puv[s] == pv[pu[s]]);
    }
}

TEST_CASE("product kernel is a regular cover excluding its inputs") {
    Alphabet a(2);
    std::vector<Word> ws = {Word::parse("a", a), Word::parse("bb", a),
                            Word::parse("abA", a)};
    std::vector<PermCover> factors;
    for (const Word& w : ws) factors.push_back(excludeWordCover(w));
    PermCover k = productKernel(factors);
    k.validate();
    CHECK(isRegularCover(k));
    for (const Word& w : ws) {
        auto p = cosetAction(k, w);
        bool identity = true;
        for (int s = 0; s < k.degree; ++s)
            if (p[s] != s) identity = false;
        CHECK(!identity);
    }
}

TEST_CASE("nine-sheet abelian cover has girth 3") {
    // Cayley graph of (Z/3)^2 with a -> (1,0), b -> (0,1).
    PermCover c;
    c.rank = 2;
    c.degree = 9;
    c.perms.assign(2, std::vector<int>(9));
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            c.perms[0][3 * x + y] = 3 * ((x + 1) % 3) + y;
            c.perms[1][3 * x + y] = 3 * x + (y + 1) % 3;
        }
    c.validate();
    CHECK(isRegularCover(c));
    CHECK(girth(c, 100) == 3);
}

TEST_CASE("buildK girth contract for small C") {
    Alphabet a(2);
    for (int C = 1; C <= 4; ++C) {
        auto [cover, cert] = buildK(a, C, KStrategy::parse("exact"));
        cover.validate();
        CHECK(isRegularCover(cover));
        auto g = girth(cover, C);
        CHECK(!g.has_value());  // no cycle of length <= C
        CHECK(cert.bound >= C);
        CHECK(verifyGirthCertificate(cert));
        // no short cyclically reduced word lies in the cover subgroup
        for (int len = 1; len <= C; ++len)
            for (const Word& w : enumerateCyclicClasses(2, len))
                CHECK(!fixesSheet(cover, w, 0));
    }
}

TEST_CASE("girth certificate tamper detection") {
    Alphabet a(2);
    auto [cover, cert] = buildK(a, 3, KStrategy::parse("exact"));
    std::string reason;
    CHECK(verifyGirthCertificate(cert, &reason));
    GirthCertificate bad = cert;
    bad.cover.perms[0][0] = bad.cover.perms[0][1 % bad.cover.degree];
    CHECK(!verifyGirthCertificate(bad, &reason));
    GirthCertificate bad2 = cert;
    bad2.bound = 1000;
    CHECK(!verifyGirthCertificate(bad2, &reason));
    auto rt = GirthCertificate::fromJson(cert.toJson());
    CHECK(verifyGirthCertificate(rt));
}

TEST_CASE("schreier generators lie in the sheet-0 subgroup") {
    Alphabet a(2);
    PermCover c = excludeWordCover(Word::parse("abab", a));
    SheetAction act(c);
    auto gens = schreierGenerators(c);
    CHECK(!gens.empty());
    for (const Word& w : gens) CHECK(act.trace(w, 0) == 0);
}

TEST_CASE("random K strategy also meets the contract") {
    Alphabet a(2);
    auto [cover, cert] = buildK(a, 3, KStrategy::parse("random:11:4"));
    cover.validate();
    CHECK(!girth(cover, 3).has_value());
    CHECK(verifyGirthCertificate(cert));
}
