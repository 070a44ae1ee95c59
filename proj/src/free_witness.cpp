#include "scs/free_witness.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "json.hpp"
#include "scs/errors.hpp"

namespace scs {

using nlohmann::json;

namespace {

json wordsToJson(const std::vector<Word>& ws) {
    json arr = json::array();
    for (const Word& w : ws) arr.push_back(w.str());
    return arr;
}

std::vector<Word> wordsFromJson(const json& arr, const Alphabet& a) {
    std::vector<Word> ws;
    for (const auto& s : arr) ws.push_back(Word::parse(s.get<std::string>(), a));
    return ws;
}

}  // namespace

std::string WitnessCertificate::toJson() const {
    json j{{"v", 1},
           {"kind", "not_conj_into"},
           {"rank", rank},
           {"h1", wordsToJson(h1Gens)},
           {"h2", wordsToJson(h2Gens)},
           {"C", C},
           {"index", index},
           {"D", json::parse(D.toJson())},
           {"girth_part", json::parse(girthPart.toJson())},
           {"checks",
            {{"h1_contained", h1Contained},
             {"h2_no_fixed_point", h2NoFixedPoint}}}};
    return j.dump();
}

WitnessCertificate WitnessCertificate::fromJson(const std::string& text) {
    json j = json::parse(text);
    if (j.at("v").get<int>() != 1)
        throw UsageError("unsupported certificate schema version");
    if (j.at("kind").get<std::string>() != "not_conj_into")
        throw UsageError("not a free non-conjugacy certificate");
    WitnessCertificate cert;
    cert.rank = j.at("rank").get<int>();
    Alphabet a(cert.rank);
    cert.h1Gens = wordsFromJson(j.at("h1"), a);
    cert.h2Gens = wordsFromJson(j.at("h2"), a);
    cert.C = j.at("C").get<int>();
    cert.index = j.at("index").get<int>();
    cert.D = PermCover::fromJson(j.at("D").dump());
    cert.girthPart = GirthCertificate::fromJson(j.at("girth_part").dump());
    const json& checks = j.at("checks");
    cert.h1Contained = checks.at("h1_contained").get<bool>();
    cert.h2NoFixedPoint = checks.at("h2_no_fixed_point").get<bool>();
    return cert;
}

PermCover buildDelta(const SubgroupGraph& h1, const PermCover& K) {
    if (!h1.saturated())
        throw UsageError("buildDelta needs a saturated subgroup graph");
    int n = h1.rank();
    if (K.rank != n) throw UsageError("cover rank does not match graph rank");
    int stride = 2 * n;

    StarInvolution si = starInvolution(h1);
    // sigma(e) = reverse(e*) pairs up the outer directed edges; one copy of
    // Gamma_K minus a matching edge is glued per orbit, closing both ends
    // of the label line at once.
    std::vector<DirEdge> reps;
    for (const auto& [e, entry] : si.pairing) {
        DirEdge partner = h1.reverse(entry.star);
        if (!si.pairing.count(partner) || h1.reverse(si.pairing.at(partner).star) != e)
            throw VerificationError("outer edge pairing is not an involution");
        if (e == partner)
            throw VerificationError("outer edge pairing has a fixed point");
        if (e < partner) reps.push_back(e);
    }

    int coreV = h1.numVertices();
    std::vector<int> next(static_cast<std::size_t>(coreV) * stride, -1);
    std::copy(h1.rawTable().begin(), h1.rawTable().end(), next.begin());

    auto addEdge = [&](int u, int v, int idx) {
        int outSlot = slotOf(Letter(idx + 1));
        if (next[u * stride + outSlot] >= 0 || next[v * stride + (outSlot ^ 1)] >= 0)
            throw VerificationError("gluing produced an unfolded graph");
        next[u * stride + outSlot] = v;
        next[v * stride + (outSlot ^ 1)] = u;
    };

    for (const DirEdge& e : reps) {
        Letter label = letterOf(e.slot);
        int idx = std::abs(label) - 1;
        // Matching geometric edge in K: x_idx from sheet a to sheet b,
        // first non-loop one in sheet order. Girth >= 2 guarantees one.
        int a = -1, b = -1;
        for (int s = 0; s < K.degree; ++s)
            if (K.perms[idx][s] != s) {
                a = s;
                b = K.perms[idx][s];
                break;
            }
        if (a < 0)
            throw UsageError("cover has only loop edges for a needed label");
        // Directed e has label `label`; the matching directed edge of K runs
        // a->b when the label is positive and b->a otherwise.
        int alphaSheet = label > 0 ? a : b;
        int omegaSheet = label > 0 ? b : a;
        int startVertex = e.v;
        DirEdge star = si.pairing.at(e).star;
        int endVertex = h1.stepSlot(star.v, star.slot);  // t(e*)

        std::vector<int> sheetTo(K.degree, -1);
        sheetTo[alphaSheet] = startVertex;
        sheetTo[omegaSheet] = endVertex;
        for (int s = 0; s < K.degree; ++s)
            if (sheetTo[s] < 0) {
                sheetTo[s] = static_cast<int>(next.size() / stride);
                next.resize(next.size() + stride, -1);
            }
        for (int s = 0; s < K.degree; ++s)
            for (int i = 0; i < n; ++i) {
                if (s == a && i == idx) continue;  // the removed edge
                addEdge(sheetTo[s], sheetTo[K.perms[i][s]], i);
            }
    }

    int total = static_cast<int>(next.size() / stride);
    PermCover delta;
    delta.rank = n;
    delta.degree = total;
    delta.perms.assign(n, std::vector<int>(total));
    for (int v = 0; v < total; ++v)
        for (int i = 0; i < n; ++i) {
            int t = next[v * stride + slotOf(Letter(i + 1))];
            if (t < 0)
                throw VerificationError("glued graph is not 2n-regular");
            delta.perms[i][v] = t;
        }
    delta.validate();
    return delta;
}

namespace {

int witnessConstant(const std::vector<Word>& h2Gens) {
    std::size_t maxLen = 0;
    for (const Word& w : h2Gens) maxLen = std::max(maxLen, w.length());
    if (maxLen == 0)
        throw UsageError("h2 must have a nontrivial generator");
    return 2 * static_cast<int>(maxLen);
}

// buildK depends only on (rank, C, strategy); the pipeline reuses results.
std::pair<PermCover, GirthCertificate> cachedBuildK(const Alphabet& a, int C,
                                                    const KStrategy& strategy,
                                                    const CoverLimits& limits) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, std::string>,
                    std::pair<PermCover, GirthCertificate>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(a.rank, C, strategy.str());
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, buildK(a, C, strategy, limits)).first;
    return it->second;
}

bool h2HasCommonFixedSheet(const PermCover& D, const std::vector<Word>& h2Gens) {
    SheetAction act(D);
    std::vector<char> fixed(D.degree, 1);
    for (const Word& w : h2Gens)
        for (int s = 0; s < D.degree; ++s)
            if (fixed[s] && act.trace(w, s) != s) fixed[s] = 0;
    return std::find(fixed.begin(), fixed.end(), 1) != fixed.end();
}

}  // namespace

WitnessCertificate sicsWitness(const std::vector<Word>& h1Gens,
                               const std::vector<Word>& h2Gens,
                               const Alphabet& a, const KStrategy& strategy,
                               const CoverLimits& limits) {
    int C = witnessConstant(h2Gens);
    SubgroupGraph g1 = SubgroupGraph::fold(h1Gens, a);
    SubgroupGraph g2 = SubgroupGraph::fold(h2Gens, a);
    if (auto g = conjInto(g2, h2Gens, g1)) throw ConjugateIntoError(*g);

    auto [K, girthCert] = cachedBuildK(a, C, strategy, limits);
    PermCover D = buildDelta(g1.saturate(), K);

    WitnessCertificate cert;
    cert.rank = a.rank;
    cert.h1Gens = h1Gens;
    cert.h2Gens = h2Gens;
    cert.C = C;
    cert.D = std::move(D);
    cert.index = cert.D.degree;
    cert.girthPart = std::move(girthCert);
    SheetAction act(cert.D);
    cert.h1Contained = true;
    for (const Word& w : h1Gens)
        if (act.trace(w, 0) != 0) cert.h1Contained = false;
    cert.h2NoFixedPoint = !h2HasCommonFixedSheet(cert.D, h2Gens);
    if (!cert.h1Contained)
        throw VerificationError("an h1 generator does not lift closed in Delta");
    if (!cert.h2NoFixedPoint)
        throw VerificationError(
            "h2 generators share a fixed sheet in Delta; the separation "
            "argument guarantees this cannot happen");
    return cert;
}

VerifyResult verifyCertificate(const WitnessCertificate& cert) {
    auto fail = [](std::string why) { return VerifyResult{false, std::move(why)}; };
    if (cert.rank < 1) return fail("invalid rank");
    try {
        cert.D.validate();
    } catch (const std::exception& e) {
        return fail(std::string("invalid D: ") + e.what());
    }
    if (cert.D.rank != cert.rank) return fail("D rank mismatch");
    if (cert.index != cert.D.degree) return fail("index does not equal degree of D");
    std::size_t maxLen = 0;
    for (const Word& w : cert.h2Gens) maxLen = std::max(maxLen, w.length());
    if (maxLen == 0) return fail("h2 generators are all trivial");
    if (cert.C < 2 * static_cast<int>(maxLen))
        return fail("C is smaller than twice the longest h2 generator");
    if (cert.girthPart.bound < cert.C)
        return fail("girth certificate bound is below C");
    if (cert.girthPart.shortestCycle)
        return fail("girth certificate admits a short cycle");
    std::string why;
    if (!verifyGirthCertificate(cert.girthPart, &why))
        return fail("girth certificate rejected: " + why);
    SheetAction act(cert.D);
    for (const Word& w : cert.h1Gens)
        if (act.trace(w, 0) != 0)
            return fail("h1 generator " + w.str() + " is not a loop at the basepoint");
    if (!cert.h1Contained) return fail("recorded h1_contained check is false");
    if (!cert.h2NoFixedPoint) return fail("recorded h2_no_fixed_point check is false");
    if (h2HasCommonFixedSheet(cert.D, cert.h2Gens))
        return fail("h2 generators share a fixed sheet: a conjugate of H2 lies in D");
    return {true, ""};
}

std::string QuotientWitness::toJson() const {
    json j{{"rank", rank},
           {"index", index},
           {"generator_images", generatorImages},
           {"h1_images", h1Images},
           {"h2_images", h2Images}};
    return j.dump();
}

QuotientWitness quotientWitness(const WitnessCertificate& cert) {
    VerifyResult v = verifyCertificate(cert);
    if (!v.ok) throw UsageError("certificate does not verify: " + v.reason);
    QuotientWitness q;
    q.rank = cert.rank;
    q.index = cert.index;
    q.generatorImages = cert.D.perms;
    for (const Word& w : cert.h1Gens) q.h1Images.push_back(cosetAction(cert.D, w));
    for (const Word& w : cert.h2Gens) q.h2Images.push_back(cosetAction(cert.D, w));
    return q;
}

std::string ScsResult::toJson() const {
    if (kind == Kind::Conjugate) {
        json j{{"result", "conjugate"}, {"conjugator", conjugator.str()}};
        return j.dump();
    }
    json j{{"result", "witness"},
           {"swapped", swapped},
           {"certificate", json::parse(cert.toJson())}};
    return j.dump();
}

ScsResult scsWitness(const std::vector<Word>& h1Gens,
                     const std::vector<Word>& h2Gens, const Alphabet& a,
                     const KStrategy& strategy, const CoverLimits& limits) {
    SubgroupGraph g1 = SubgroupGraph::fold(h1Gens, a);
    SubgroupGraph g2 = SubgroupGraph::fold(h2Gens, a);
    ScsResult result;
    if (auto g = conjugateWitness(g1, h1Gens, g2, h2Gens)) {
        result.kind = ScsResult::Kind::Conjugate;
        result.conjugator = *g;
        return result;
    }
    result.kind = ScsResult::Kind::Witness;
    if (!conjInto(g2, h2Gens, g1)) {
        result.cert = sicsWitness(h1Gens, h2Gens, a, strategy, limits);
        result.swapped = false;
    } else {
        // H2 is conjugate into H1 but not vice versa; separate H1 instead.
        result.cert = sicsWitness(h2Gens, h1Gens, a, strategy, limits);
        result.swapped = true;
    }
    return result;
}

}  // namespace scs
