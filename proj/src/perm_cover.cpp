#include "scs/perm_cover.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "scs/errors.hpp"

namespace scs {

using nlohmann::json;

PermCover PermCover::trivial(const Alphabet& a) {
    PermCover c;
    c.rank = a.rank;
    c.degree = 1;
    c.perms.assign(a.rank, {0});
    return c;
}

int PermCover::apply(Letter l, int sheet) const {
    if (l > 0) return perms[l - 1][sheet];
    const std::vector<int>& p = perms[-l - 1];
    for (int x = 0; x < degree; ++x)
        if (p[x] == sheet) return x;
    throw VerificationError("permutation is not a bijection");
}

void PermCover::validate() const {
    if (rank < 1) throw UsageError("cover rank must be >= 1");
    if (degree < 1) throw UsageError("cover degree must be >= 1");
    if (static_cast<int>(perms.size()) != rank)
        throw UsageError("cover needs one permutation per generator");
    std::vector<char> hit(degree);
    for (const auto& p : perms) {
        if (static_cast<int>(p.size()) != degree)
            throw UsageError("permutation size does not match degree");
        std::fill(hit.begin(), hit.end(), 0);
        for (int x : p) {
            if (x < 0 || x >= degree || hit[x])
                throw UsageError("permutation is not a bijection");
            hit[x] = 1;
        }
    }
    if (!connected()) throw UsageError("cover is not connected");
}

bool PermCover::connected() const { return actionGraph().connected(); }

Multigraph PermCover::actionGraph() const {
    Multigraph g(degree);
    for (const auto& p : perms)
        for (int s = 0; s < degree; ++s) g.addEdge(s, p[s]);
    return g;
}

std::string PermCover::toJson() const {
    json perms_obj = json::object();
    for (int i = 0; i < rank; ++i)
        perms_obj[letterToString(i + 1, rank)] = perms[i];
    json j{{"rank", rank}, {"degree", degree}, {"perms", perms_obj}};
    return j.dump();
}

PermCover PermCover::fromJson(const std::string& text) {
    json j = json::parse(text);
    PermCover c;
    c.rank = j.at("rank").get<int>();
    c.degree = j.at("degree").get<int>();
    if (c.rank < 1) throw UsageError("cover rank must be >= 1");
    const json& perms_obj = j.at("perms");
    for (int i = 0; i < c.rank; ++i)
        c.perms.push_back(
            perms_obj.at(letterToString(i + 1, c.rank)).get<std::vector<int>>());
    c.validate();
    return c;
}

std::optional<int> girth(const PermCover& cover, int cap) {
    return girthParallel(cover.actionGraph(), cap);
}

SheetAction::SheetAction(const PermCover& cover) : fwd(cover.perms) {
    inv.assign(cover.rank, std::vector<int>(cover.degree));
    for (int i = 0; i < cover.rank; ++i)
        for (int x = 0; x < cover.degree; ++x) inv[i][fwd[i][x]] = x;
}

int SheetAction::apply(Letter l, int sheet) const {
    return l > 0 ? fwd[l - 1][sheet] : inv[-l - 1][sheet];
}

int SheetAction::trace(const Word& w, int sheet) const {
    for (Letter l : w.letters()) sheet = apply(l, sheet);
    return sheet;
}

std::vector<int> cosetAction(const PermCover& cover, const Word& w) {
    SheetAction act(cover);
    std::vector<int> result(cover.degree);
    std::iota(result.begin(), result.end(), 0);
    for (Letter l : w.letters()) {
        const std::vector<int>& step = l > 0 ? act.fwd[l - 1] : act.inv[-l - 1];
        for (int& x : result) x = step[x];
    }
    return result;
}

bool fixesSheet(const PermCover& cover, const Word& w, int sheet) {
    return SheetAction(cover).trace(w, sheet) == sheet;
}

PermCover excludeWordCover(const Word& w) {
    if (w.empty()) throw UsageError("cannot exclude the empty word");
    int k = static_cast<int>(w.length());
    int n = w.rank();
    // Trace w along the segment 0 -> 1 -> ... -> k; free reduction of w
    // guarantees the partial injections stay conflict-free.
    std::vector<std::vector<int>> fwd(n, std::vector<int>(k + 1, -1));
    std::vector<std::vector<int>> bwd(n, std::vector<int>(k + 1, -1));
    for (int j = 0; j < k; ++j) {
        Letter l = w.letters()[j];
        int i = std::abs(l) - 1;
        int from = l > 0 ? j : j + 1;
        int to = l > 0 ? j + 1 : j;
        if (fwd[i][from] >= 0 || bwd[i][to] >= 0)
            throw VerificationError("segment trace of a reduced word collided");
        fwd[i][from] = to;
        bwd[i][to] = from;
    }
    // Complete each partial injection to a permutation, pairing the free
    // positions in ascending order.
    PermCover c;
    c.rank = n;
    c.degree = k + 1;
    c.perms = std::move(fwd);
    for (int i = 0; i < n; ++i) {
        std::vector<int> freeTargets;
        for (int y = 0; y <= k; ++y)
            if (bwd[i][y] < 0) freeTargets.push_back(y);
        std::size_t next = 0;
        for (int x = 0; x <= k; ++x)
            if (c.perms[i][x] < 0) c.perms[i][x] = freeTargets[next++];
    }
    return c;
}

namespace {

struct IntVecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

long sheetCap(const CoverLimits& limits) {
    if (const char* env = std::getenv("SCS_MAX_SHEETS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return limits.maxSheets;
}

}  // namespace

PermCover productKernel(const std::vector<PermCover>& covers,
                        const CoverLimits& limits) {
    if (covers.empty()) throw UsageError("product kernel of no covers");
    int rank = covers.front().rank;
    long total = 0;
    for (const PermCover& c : covers) {
        if (c.rank != rank) throw UsageError("covers have mismatched ranks");
        total += c.degree;
    }
    long cap = sheetCap(limits);
    // Group elements are tuples of permutations, stored as the concatenation
    // of their blockwise images.
    std::vector<std::vector<int>> gens(rank, std::vector<int>(total));
    std::vector<int> identity(total);
    {
        long off = 0;
        for (const PermCover& c : covers) {
            for (int i = 0; i < rank; ++i)
                for (int x = 0; x < c.degree; ++x)
                    gens[i][off + x] = static_cast<int>(off) + c.perms[i][x];
            for (int x = 0; x < c.degree; ++x)
                identity[off + x] = static_cast<int>(off) + x;
            off += c.degree;
        }
    }
    std::unordered_map<std::vector<int>, int, IntVecHash> ids;
    std::vector<std::vector<int>> elems;
    PermCover kernel;
    kernel.rank = rank;
    kernel.perms.assign(rank, {});
    ids.emplace(identity, 0);
    elems.push_back(identity);
    long memoryBudget = 200000000;  // ints across all stored elements
    for (std::size_t head = 0; head < elems.size(); ++head) {
        std::vector<int> g = elems[head];  // copy: elems may reallocate below
        for (int i = 0; i < rank; ++i) {
            std::vector<int> h(total);
            for (long x = 0; x < total; ++x) h[x] = gens[i][g[x]];
            auto [it, fresh] = ids.emplace(std::move(h),
                                           static_cast<int>(elems.size()));
            if (fresh) {
                elems.push_back(it->first);
                if (static_cast<long>(elems.size()) > cap ||
                    static_cast<long>(elems.size()) * total > memoryBudget)
                    throw ResourceError("product kernel exceeds the sheet cap");
            }
            kernel.perms[i].push_back(it->second);
        }
    }
    kernel.degree = static_cast<int>(elems.size());
    return kernel;
}

std::string GirthCertificate::toJson() const {
    json j{{"bound", bound},
           {"cover", json::parse(cover.toJson())},
           {"shortest_cycle_found",
            shortestCycle ? json(*shortestCycle) : json(nullptr)}};
    return j.dump();
}

GirthCertificate GirthCertificate::fromJson(const std::string& text) {
    json j = json::parse(text);
    GirthCertificate cert;
    cert.cover = PermCover::fromJson(j.at("cover").dump());
    cert.bound = j.at("bound").get<int>();
    const json& sc = j.at("shortest_cycle_found");
    if (!sc.is_null()) cert.shortestCycle = sc.get<int>();
    return cert;
}

bool verifyGirthCertificate(const GirthCertificate& cert, std::string* reason) {
    auto fail = [&](const std::string& why) {
        if (reason) *reason = why;
        return false;
    };
    try {
        cert.cover.validate();
    } catch (const std::exception& e) {
        return fail(std::string("invalid cover: ") + e.what());
    }
    if (cert.bound < 0) return fail("negative girth bound");
    std::optional<int> g = girth(cert.cover, cert.bound);
    if (cert.shortestCycle) {
        if (g != cert.shortestCycle)
            return fail("recorded shortest cycle does not match BFS girth");
    } else if (g) {
        return fail("BFS found a cycle of length " + std::to_string(*g) +
                    " at or below the claimed bound");
    }
    return true;
}

KStrategy KStrategy::parse(const std::string& text) {
    KStrategy s;
    std::stringstream ss(text);
    std::string head;
    std::getline(ss, head, ':');
    if (head == "exact") {
        if (!ss.eof()) throw UsageError("exact strategy takes no parameters");
        return s;
    }
    if (head != "random")
        throw UsageError("unknown cover strategy: " + text);
    s.kind = Kind::Random;
    std::string field;
    if (std::getline(ss, field, ':')) s.seed = std::stoull(field);
    if (std::getline(ss, field, ':')) {
        s.degree = std::stoi(field);
        if (s.degree < 2) throw UsageError("random strategy degree must be >= 2");
    }
    return s;
}

std::string KStrategy::str() const {
    if (kind == Kind::Exact) return "exact";
    return "random:" + std::to_string(seed) + ":" + std::to_string(degree);
}

namespace {

// Girth of a connected vertex-transitive graph equals the girth seen from
// any single source; covers built as Cayley graphs qualify.
std::optional<int> cayleyGirth(const PermCover& cover, int cap) {
    return girthFromSource(cover.actionGraph(), 0, cap);
}

// Cayley graph of the image of F(a, b) in SL(2, p) under the Sanov pair
// a -> [[1,2],[0,1]], b -> [[1,0],[2,1]], which is free in SL(2, Z); its
// shortest mod-p relation grows with p, unlike the (1,1)-pair whose braid
// relation caps the girth at 6. The image is all of SL(2, p) for odd p,
// so the cover is regular of degree p(p^2 - 1).
std::optional<PermCover> sl2Cover(int p, long cap) {
    long order = static_cast<long>(p) * p * p;  // overestimate, early gate
    if (order > cap) return std::nullopt;
    using Mat = std::array<int, 4>;
    auto mul = [p](const Mat& x, const Mat& y) {
        return Mat{(x[0] * y[0] + x[1] * y[2]) % p, (x[0] * y[1] + x[1] * y[3]) % p,
                   (x[2] * y[0] + x[3] * y[2]) % p, (x[2] * y[1] + x[3] * y[3]) % p};
    };
    auto key = [p](const Mat& x) {
        return ((static_cast<long>(x[0]) * p + x[1]) * p + x[2]) * p + x[3];
    };
    std::array<Mat, 2> gen{Mat{1, 2, 0, 1}, Mat{1, 0, 2, 1}};
    std::unordered_map<long, int> ids;
    std::vector<Mat> elems{Mat{1, 0, 0, 1}};
    ids.emplace(key(elems[0]), 0);
    PermCover c;
    c.rank = 2;
    c.perms.assign(2, {});
    for (std::size_t head = 0; head < elems.size(); ++head) {
        Mat g = elems[head];
        for (int i = 0; i < 2; ++i) {
            Mat h = mul(g, gen[i]);
            auto [it, fresh] = ids.emplace(key(h), static_cast<int>(elems.size()));
            if (fresh) {
                elems.push_back(h);
                if (static_cast<long>(elems.size()) > cap) return std::nullopt;
            }
            c.perms[i].push_back(it->second);
        }
    }
    c.degree = static_cast<int>(elems.size());
    return c;
}

// Connected cover excluding one cyclically reduced word: a cyclic quotient
// when some exponent sum is nonzero, a Hall completion otherwise.
PermCover smallExcludingCover(const Word& w, int rank) {
    std::vector<int> expo(rank, 0);
    for (Letter l : w.letters()) expo[std::abs(l) - 1] += l > 0 ? 1 : -1;
    int best = -1;
    for (int i = 0; i < rank; ++i)
        if (expo[i] != 0 &&
            (best < 0 || std::abs(expo[i]) < std::abs(expo[best])))
            best = i;
    if (best < 0) return excludeWordCover(w);
    int m = std::abs(expo[best]) + 1;
    PermCover c;
    c.rank = rank;
    c.degree = m;
    for (int i = 0; i < rank; ++i) {
        std::vector<int> p(m);
        for (int x = 0; x < m; ++x) p[x] = i == best ? (x + 1) % m : x;
        c.perms.push_back(std::move(p));
    }
    return c;
}

// Excludes every cyclically reduced class word of length <= C, one product
// kernel step at a time; words already excluded by the running kernel are
// skipped, which keeps the degree far below the worst case.
PermCover buildKIncremental(const Alphabet& a, int C, const CoverLimits& limits) {
    PermCover k = PermCover::trivial(a);
    for (int len = 1; len <= C; ++len)
        for (const Word& w : enumerateCyclicClasses(a.rank, len))
            if (fixesSheet(k, w, 0))
                k = productKernel({k, smallExcludingCover(w, a.rank)}, limits);
    return k;
}

PermCover buildKExact(const Alphabet& a, int C, const CoverLimits& limits) {
    if (a.rank == 2) {
        // SL(2, p) quotients stay small and their relation length grows with
        // p, so walking the prime ladder finds a short-relation-free cover
        // quickly for every C this tool targets.
        long cap = sheetCap(limits);
        for (int p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                      53, 59, 67, 71, 79, 83, 89, 97}) {
            std::optional<PermCover> c = sl2Cover(p, cap);
            if (!c) break;
            if (!cayleyGirth(*c, C)) return std::move(*c);
        }
    }
    return buildKIncremental(a, C, limits);
}

PermCover buildKRandom(const Alphabet& a, int C, const KStrategy& strategy,
                       const CoverLimits& limits) {
    std::mt19937_64 rng(strategy.seed);
    int d = strategy.degree;
    const int attemptsPerDegree = 6;
    for (int attempt = 0; attempt < limits.randomRetries; ++attempt) {
        if (attempt > 0 && attempt % attemptsPerDegree == 0) d *= 2;
        PermCover c;
        c.rank = a.rank;
        c.degree = d;
        for (int i = 0; i < a.rank; ++i) {
            std::vector<int> p(d);
            std::iota(p.begin(), p.end(), 0);
            std::shuffle(p.begin(), p.end(), rng);
            c.perms.push_back(std::move(p));
        }
        if (!c.connected()) continue;
        PermCover kernel;
        try {
            kernel = productKernel({c}, limits);
        } catch (const ResourceError&) {
            continue;
        }
        if (!cayleyGirth(kernel, C)) return kernel;
    }
    throw ResourceError("random cover strategy exhausted its retry budget");
}

}  // namespace

std::pair<PermCover, GirthCertificate> buildK(const Alphabet& a, int C,
                                              const KStrategy& strategy,
                                              const CoverLimits& limits) {
    if (C < 1) throw UsageError("girth requirement C must be >= 1");
    PermCover k = strategy.kind == KStrategy::Kind::Exact
                      ? buildKExact(a, C, limits)
                      : buildKRandom(a, C, strategy, limits);
    if (cayleyGirth(k, C))
        throw VerificationError("constructed cover failed its own girth check");
    GirthCertificate cert;
    cert.cover = k;
    cert.bound = C;
    return {std::move(k), std::move(cert)};
}

std::vector<Word> schreierGenerators(const PermCover& cover) {
    Alphabet a(cover.rank);
    SheetAction act(cover);
    std::vector<Word> tree(cover.degree);
    std::vector<char> seen(cover.degree, 0);
    std::queue<int> q;
    seen[0] = 1;
    q.push(0);
    std::vector<std::pair<int, Letter>> treeEdges;  // (sheet, letter) pairs used
    while (!q.empty()) {
        int s = q.front();
        q.pop();
        for (int i = 0; i < cover.rank; ++i)
            for (Letter l : {Letter(i + 1), Letter(-(i + 1))}) {
                int t = act.apply(l, s);
                if (!seen[t]) {
                    seen[t] = 1;
                    std::vector<Letter> raw = tree[s].letters();
                    raw.push_back(l);
                    tree[t] = Word::reduce(raw, a);
                    treeEdges.push_back({s, l});
                    q.push(t);
                }
            }
    }
    std::vector<Word> gens;
    for (int s = 0; s < cover.degree; ++s)
        for (int i = 0; i < cover.rank; ++i) {
            Letter l = i + 1;
            int t = act.apply(l, s);
            bool isTree = false;
            for (auto [v, le] : treeEdges)
                if ((v == s && le == l) || (v == t && le == -l)) {
                    isTree = true;
                    break;
                }
            if (isTree) continue;
            std::vector<Letter> raw = tree[s].letters();
            raw.push_back(l);
            for (auto it = tree[t].letters().rbegin();
                 it != tree[t].letters().rend(); ++it)
                raw.push_back(-*it);
            Word g = Word::reduce(raw, a);
            if (!g.empty()) gens.push_back(std::move(g));
        }
    return gens;
}

bool isRegularCover(const PermCover& cover) {
    SheetAction act(cover);
    for (const Word& g : schreierGenerators(cover))
        for (int s = 0; s < cover.degree; ++s)
            if (act.trace(g, s) != s) return false;
    return true;
}

}  // namespace scs
