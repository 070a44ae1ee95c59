#include "scs/vf_witness.hpp"

#include <algorithm>
#include <queue>

#include "json.hpp"

namespace scs {

using nlohmann::json;

namespace {

json pathToJson(const GPath& p) {
    return json{{"start", p.startVertex}, {"elems", p.elems},
                {"edges", p.dirEdges}};
}

GPath pathFromJson(const json& j) {
    GPath p;
    p.startVertex = j.at("start").get<int>();
    p.elems = j.at("elems").get<std::vector<int>>();
    p.dirEdges = j.at("edges").get<std::vector<int>>();
    return p;
}

void requireClosedAtBase(const GraphOfGroups& g, const GPath& p,
                         const char* what) {
    p.validate(g);
    if (p.startVertex != g.base || !p.closed(g))
        throw UsageError(std::string(what) +
                         " must be closed paths at the base vertex");
}

bool isPermutation(const std::vector<int>& t) {
    std::vector<char> hit(t.size(), 0);
    for (int x : t) {
        if (x < 0 || x >= static_cast<int>(t.size()) || hit[x]) return false;
        hit[x] = 1;
    }
    return true;
}

std::vector<int> compose(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
    return c;
}

}  // namespace

SheetIndex::SheetIndex(const PreCovering& z) : z_(&z), lifts_(z) {
    const GraphOfGroups& g = *z.gog;
    maxOrder_ = 1;
    for (const auto& gv : g.vertexGroups)
        maxOrder_ = std::max(maxOrder_, gv.order);
    lookup_.assign(static_cast<std::size_t>(z.numPieces()) * maxOrder_, -1);
    const FiniteGroupTable& bg = g.vertexGroups[g.base];
    auto repOf = [&](int piece, int x) {
        int best = bg.times(z.pieces[piece].body[0], x);
        for (int p : z.pieces[piece].body)
            best = std::min(best, bg.times(p, x));
        return best;
    };
    auto add = [&](int piece, int rep) {
        int& slot = lookup_[static_cast<std::size_t>(piece) * maxOrder_ + rep];
        if (slot < 0) {
            slot = static_cast<int>(sheets_.size());
            sheets_.push_back({piece, rep});
        }
    };
    add(z.basePiece, repOf(z.basePiece, z.baseRep));
    for (int p = 0; p < z.numPieces(); ++p) {
        if (z.pieces[p].vertex != g.base) continue;
        for (int x = 0; x < bg.order; ++x) add(p, repOf(p, x));
    }
}

std::vector<int> SheetIndex::action(const GPath& p) const {
    const GraphOfGroups& g = *z_->gog;
    requireClosedAtBase(g, p, "lifted paths");
    const FiniteGroupTable& bg = g.vertexGroups[g.base];
    std::vector<int> perm(sheets_.size());
    for (std::size_t i = 0; i < sheets_.size(); ++i) {
        auto [piece, rep] = sheets_[i];
        LiftResult r = lifts_.lift(p, piece, rep);
        if (!r.stayed)
            throw VerificationError("path lift left a complete covering");
        int best = bg.order;
        for (int q : z_->pieces[r.piece].body)
            best = std::min(best, bg.times(q, r.rep));
        int j = lookup_[static_cast<std::size_t>(r.piece) * maxOrder_ + best];
        if (j < 0)
            throw VerificationError("lift of a closed path left the base fiber");
        perm[i] = j;
    }
    return perm;
}

int vfConstant(const GraphOfGroups& g, const std::vector<GPath>& h2Gens) {
    if (h2Gens.empty())
        throw UsageError("h2 must have at least one generator");
    int maxLen = 0;
    for (const GPath& p : h2Gens) {
        requireClosedAtBase(g, p, "h2 generators");
        maxLen = std::max(maxLen, pathLength(g, p));
    }
    if (maxLen == 0)
        throw UsageError(
            "h2 generators are all elliptic at the base vertex; the trivial "
            "and base-vertex cases need no covering construction");
    return 2 * maxLen + 3;
}

VfWitnessCertificate vfSicsWitness(const GraphOfGroups& g,
                                   const std::vector<GPath>& h1Gens,
                                   const std::vector<GPath>& h2Gens,
                                   std::uint64_t seed,
                                   bool assumeNormalizerCondition) {
    VfWitnessCertificate cert;
    cert.gog = std::make_shared<GraphOfGroups>(g);
    cert.gog->validate();
    for (const GPath& p : h1Gens)
        requireClosedAtBase(*cert.gog, p, "h1 generators");
    cert.h1Gens = h1Gens;
    cert.h2Gens = h2Gens;
    cert.C = vfConstant(*cert.gog, h2Gens);
    cert.seed = seed;
    if (!assumeNormalizerCondition) {
        NormalizerReport rep = checkNormalizerCondition(*cert.gog);
        if (rep.verdict != NormalizerReport::Verdict::Holds)
            throw NormalizerUnverifiedError(
                "the normalizer condition does not hold for this graph of "
                "groups (witness at directed edge " +
                std::to_string(rep.dirEdge) + ")");
    }
    PreCovering z = foldSubgroup(*cert.gog, h1Gens);
    z = closeNontrivialFaces(std::move(z));
    z = thicken(std::move(z), cert.C);
    cert.cover = completeCover(std::move(z), cert.C, seed, &cert.buildLog);
    cert.cover.validate(true);

    SheetIndex sheets(cert.cover);
    cert.sheets = sheets.count();
    for (const GPath& p : h1Gens) cert.h1Tables.push_back(sheets.action(p));
    for (const GPath& p : h2Gens) cert.h2Tables.push_back(sheets.action(p));
    for (const auto& t : cert.h1Tables)
        if (!isPermutation(t))
            throw VerificationError("h1 lift action is not a permutation");
    for (const auto& t : cert.h2Tables)
        if (!isPermutation(t))
            throw VerificationError("h2 lift action is not a permutation");
    // Lifting is a homomorphism; spot-check it on all generator products.
    auto checkProducts = [&](const std::vector<GPath>& gens,
                             const std::vector<std::vector<int>>& tables) {
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (std::size_t j = 0; j < gens.size(); ++j) {
                GPath prod = reducePath(*cert.gog,
                                        pathConcat(*cert.gog, gens[i], gens[j]));
                if (sheets.action(prod) != compose(tables[i], tables[j]))
                    throw VerificationError(
                        "lift action is not multiplicative on generators");
            }
    };
    checkProducts(h1Gens, cert.h1Tables);
    checkProducts(h2Gens, cert.h2Tables);

    cert.h1FixesBase = true;
    for (const auto& t : cert.h1Tables)
        if (t[0] != 0)
            throw VerificationError("an h1 generator moved the basepoint sheet");
    std::vector<char> fixed(cert.sheets, 1);
    for (const auto& t : cert.h2Tables)
        for (int i = 0; i < cert.sheets; ++i)
            if (t[i] != i) fixed[i] = 0;
    for (int i = 0; i < cert.sheets; ++i)
        if (fixed[i]) throw VfConjugateIntoError(i);
    cert.h2NoCommonFixed = true;
    return cert;
}

VerifyResult verifyVfCertificate(const VfWitnessCertificate& cert) {
    try {
        if (!cert.gog) return {false, "missing graph of groups"};
        GraphOfGroups g = *cert.gog;
        g.validate();
        PreCovering cover = cert.cover;
        cover.gog = &g;
        cover.validate(true);
        if (cover.pieces.at(cover.basePiece).vertex != g.base)
            return {false, "basepoint piece does not lie over the base vertex"};
        int maxLen = 0;
        for (const GPath& p : cert.h2Gens) {
            requireClosedAtBase(g, p, "h2 generators");
            maxLen = std::max(maxLen, pathLength(g, p));
        }
        if (maxLen == 0) return {false, "h2 generators are all trivial"};
        if (cert.C < 2 * maxLen + 3)
            return {false, "girth constant below 2 max|h| + 3"};
        for (const GPath& p : cert.h1Gens)
            requireClosedAtBase(g, p, "h1 generators");

        SheetIndex sheets(cover);
        if (sheets.count() != cert.sheets)
            return {false, "sheet count mismatch"};
        if (cert.h1Tables.size() != cert.h1Gens.size() ||
            cert.h2Tables.size() != cert.h2Gens.size())
            return {false, "coset table count mismatch"};
        for (std::size_t i = 0; i < cert.h1Gens.size(); ++i)
            if (sheets.action(cert.h1Gens[i]) != cert.h1Tables[i])
                return {false, "h1 coset table does not match its lift"};
        for (std::size_t i = 0; i < cert.h2Gens.size(); ++i)
            if (sheets.action(cert.h2Gens[i]) != cert.h2Tables[i])
                return {false, "h2 coset table does not match its lift"};
        for (const auto& t : cert.h1Tables)
            if (!isPermutation(t) || t[0] != 0)
                return {false, "an h1 generator does not stabilize sheet 0"};
        std::vector<char> fixed(cert.sheets, 1);
        for (const auto& t : cert.h2Tables) {
            if (!isPermutation(t)) return {false, "non-bijective h2 table"};
            for (int i = 0; i < cert.sheets; ++i)
                if (t[i] != i) fixed[i] = 0;
        }
        for (int i = 0; i < cert.sheets; ++i)
            if (fixed[i])
                return {false, "h2 generators share fixed sheet " +
                                   std::to_string(i)};
        if (!cert.h1FixesBase || !cert.h2NoCommonFixed)
            return {false, "recorded checks contradict the recomputation"};
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
    return {true, ""};
}

namespace {

// All reduced closed paths at the base vertex with exactly `len` edges, in
// the canonical form where every element before an edge is the minimal
// representative of its rho-image coset. Calls sink(path); enumeration is
// exhaustive for the conjugator search.
template <typename F>
void enumerateClosed(const GraphOfGroups& g, int len, const F& sink) {
    const int base = g.base;
    std::vector<int> cosetRepsScratch;
    GPath p;
    p.startVertex = base;
    p.elems.assign(1, 0);
    auto repsFor = [&](int v, int de) {
        const FiniteGroupTable& gv = g.vertexGroups[v];
        const std::vector<int>& im = g.rhoI(de);
        std::vector<char> seen(gv.order, 0);
        std::vector<int> reps;
        for (int x = 0; x < gv.order; ++x) {
            if (seen[x]) continue;
            reps.push_back(x);
            for (int c : im) seen[gv.times(x, c)] = 1;
        }
        return reps;
    };
    auto dfs = [&](auto&& self, int at, int remaining) -> void {
        if (remaining == 0) {
            if (at != base) return;
            const FiniteGroupTable& gv = g.vertexGroups[base];
            for (int x = 0; x < gv.order; ++x) {
                p.elems.back() = x;
                sink(p);
            }
            p.elems.back() = 0;
            return;
        }
        for (int de = 0; de < 2 * g.numEdges(); ++de) {
            if (g.iVert(de) != at) continue;
            bool backtrack =
                !p.dirEdges.empty() && de == GraphOfGroups::opposite(p.dirEdges.back());
            for (int rep : repsFor(at, de)) {
                if (backtrack && rep == 0) continue;  // type-2 reducible
                p.elems.back() = rep;
                p.dirEdges.push_back(de);
                p.elems.push_back(0);
                self(self, g.tVert(de), remaining - 1);
                p.elems.pop_back();
                p.dirEdges.pop_back();
            }
            p.elems.back() = 0;
        }
    };
    dfs(dfs, base, len);
}

}  // namespace

VfDecision vfConjIntoDecide(const GraphOfGroups& g,
                            const std::vector<GPath>& h1Gens,
                            const std::vector<GPath>& h2Gens,
                            std::uint64_t seed) {
    VfDecision d;
    PreCovering zmem = closeNontrivialFaces(foldSubgroup(g, h1Gens));
    for (const GPath& p : h2Gens) requireClosedAtBase(g, p, "h2 generators");
    auto conjugates = [&](const GPath& gamma) {
        GPath inv = pathInverse(g, gamma);
        for (const GPath& h : h2Gens) {
            GPath conj = reducePath(
                g, pathConcat(g, pathConcat(g, inv, h), gamma));
            if (!liftsClosed(zmem, conj)) return false;
        }
        return true;
    };
    const int maxDepth = 12;
    for (int depth = 0; depth <= maxDepth; ++depth) {
        bool found = false;
        enumerateClosed(g, depth, [&](const GPath& gamma) {
            if (!found && conjugates(gamma)) {
                found = true;
                d.conjugator = gamma;
            }
        });
        if (found) {
            d.conjugateInto = true;
            return d;
        }
        try {
            d.cert = vfSicsWitness(g, h1Gens, h2Gens, seed + depth);
            d.conjugateInto = false;
            return d;
        } catch (const VfConjugateIntoError&) {
            // Some conjugate of h2 entered the built subgroup; deepen the
            // explicit search and rebuild with a fresh seed.
        } catch (const ResourceError&) {
            // The witness construction outgrew its caps; the conjugator
            // search may still settle the instance positively.
        }
    }
    throw ResourceError("conjugacy-into search depth exhausted");
}

VfQuotientWitness vfQuotientWitness(const VfWitnessCertificate& cert) {
    VerifyResult vr = verifyVfCertificate(cert);
    if (!vr.ok) throw VerificationError("invalid certificate: " + vr.reason);
    const GraphOfGroups& g = *cert.gog;
    PreCovering cover = cert.cover;
    cover.gog = &g;
    SheetIndex sheets(cover);

    // Tree path from the base to each vertex, with trivial elements.
    std::vector<int> parentEdge(g.numVertices(), -1);
    std::vector<char> seen(g.numVertices(), 0);
    std::queue<int> q;
    seen[g.base] = 1;
    q.push(g.base);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int de = 0; de < 2 * g.numEdges(); ++de)
            if (g.iVert(de) == v && !seen[g.tVert(de)]) {
                seen[g.tVert(de)] = 1;
                parentEdge[g.tVert(de)] = de;
                q.push(g.tVert(de));
            }
    }
    VfQuotientWitness w;
    w.sheets = cert.sheets;
    w.vertexImages.resize(g.numVertices());
    for (int v = 0; v < g.numVertices(); ++v) {
        GPath to = trivialPath(g.base);
        std::vector<int> chain;
        for (int x = v; x != g.base; x = g.iVert(parentEdge[x]))
            chain.push_back(parentEdge[x]);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            to.dirEdges.push_back(*it);
            to.elems.push_back(0);
        }
        GPath back = pathInverse(g, to);
        for (int a = 0; a < g.vertexGroups[v].order; ++a) {
            GPath mid = to;
            mid.elems.back() = a;
            GPath loop = reducePath(g, pathConcat(g, mid, back));
            w.vertexImages[v].push_back(sheets.action(loop));
        }
    }
    w.h1Images = cert.h1Tables;
    w.h2Images = cert.h2Tables;
    return w;
}

std::string VfWitnessCertificate::toJson() const {
    json j;
    j["v"] = 1;
    j["gog"] = json::parse(gog->toJson());
    json h1 = json::array(), h2 = json::array();
    for (const GPath& p : h1Gens) h1.push_back(pathToJson(p));
    for (const GPath& p : h2Gens) h2.push_back(pathToJson(p));
    j["h1_gens"] = h1;
    j["h2_gens"] = h2;
    j["c"] = C;
    j["cover"] = json::parse(cover.toJson());
    j["sheets"] = sheets;
    j["coset_tables"] = {{"h1", h1Tables}, {"h2", h2Tables}};
    j["checks"] = {{"h1_fixes_base", h1FixesBase},
                   {"h2_no_common_fixed_point", h2NoCommonFixed}};
    j["build_log"] = buildLog;
    j["seed"] = seed;
    return j.dump();
}

VfWitnessCertificate VfWitnessCertificate::fromJson(const std::string& text) {
    json j = json::parse(text);
    VfWitnessCertificate cert;
    cert.gog = std::make_shared<GraphOfGroups>(
        GraphOfGroups::fromJson(j.at("gog").dump()));
    for (const auto& p : j.at("h1_gens")) cert.h1Gens.push_back(pathFromJson(p));
    for (const auto& p : j.at("h2_gens")) cert.h2Gens.push_back(pathFromJson(p));
    cert.C = j.at("c").get<int>();
    cert.cover = PreCovering::fromJson(*cert.gog, j.at("cover").dump());
    cert.cover.gog = cert.gog.get();
    cert.sheets = j.at("sheets").get<int>();
    cert.h1Tables =
        j.at("coset_tables").at("h1").get<std::vector<std::vector<int>>>();
    cert.h2Tables =
        j.at("coset_tables").at("h2").get<std::vector<std::vector<int>>>();
    cert.h1FixesBase = j.at("checks").at("h1_fixes_base").get<bool>();
    cert.h2NoCommonFixed =
        j.at("checks").at("h2_no_common_fixed_point").get<bool>();
    cert.buildLog = j.at("build_log").get<std::vector<std::string>>();
    cert.seed = j.at("seed").get<std::uint64_t>();
    return cert;
}

std::string VfDecision::toJson() const {
    json j;
    if (conjugateInto) {
        j["verdict"] = "conjugate_into";
        j["conjugator"] = pathToJson(conjugator);
    } else {
        j["verdict"] = "witness";
        j["certificate"] = json::parse(cert.toJson());
    }
    return j.dump();
}

std::string VfQuotientWitness::toJson() const {
    json j;
    j["sheets"] = sheets;
    j["vertex_images"] = vertexImages;
    j["h1_images"] = h1Images;
    j["h2_images"] = h2Images;
    return j.dump();
}

}  // namespace scs
