#include "scs/precovering.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "scs/star_glue.hpp"

namespace scs {

using nlohmann::json;

namespace {

// Dense key for a handle (piece, directed edge, canonical coset rep).
struct HandleKey {
    std::int64_t strideP, strideD;
    explicit HandleKey(const GraphOfGroups& g) {
        int maxOrd = 1;
        for (const auto& gv : g.vertexGroups) maxOrd = std::max(maxOrd, gv.order);
        strideD = maxOrd;
        strideP = 2LL * g.numEdges() * maxOrd;
    }
    std::int64_t operator()(int piece, int de, int rep) const {
        return piece * strideP + de * strideD + rep;
    }
};

}  // namespace

int PreCovering::addPiece(int vertex, std::vector<int> body) {
    pieces.push_back({vertex, std::move(body)});
    return numPieces() - 1;
}

bool PreCovering::inBody(int piece, int g) const {
    const auto& b = pieces[piece].body;
    return std::binary_search(b.begin(), b.end(), g);
}

int PreCovering::cosetRep(int piece, int de, int g) const {
    const auto& gv = gog->vertexGroups[pieces[piece].vertex];
    const auto& rho = gog->rhoI(de);
    int best = gv.order;
    for (int p : pieces[piece].body) {
        int pg = gv.times(p, g);
        for (int c : rho) best = std::min(best, gv.times(pg, c));
    }
    return best;
}

std::vector<int> PreCovering::faceGroup(int piece, int de, int g) const {
    const auto& gv = gog->vertexGroups[pieces[piece].vertex];
    const auto& rho = gog->rhoI(de);
    std::vector<int> out;
    int gi = gv.inverse(g);
    for (int c = 0; c < static_cast<int>(rho.size()); ++c)
        if (inBody(piece, gv.times(gv.times(g, rho[c]), gi))) out.push_back(c);
    return out;
}

std::vector<Handle> PreCovering::handlesOf(int piece) const {
    std::vector<Handle> out;
    int v = pieces[piece].vertex;
    const auto& gv = gog->vertexGroups[v];
    for (int de = 0; de < 2 * gog->numEdges(); ++de) {
        if (gog->iVert(de) != v) continue;
        const auto& rho = gog->rhoI(de);
        std::vector<char> seen(gv.order, 0);
        for (int g = 0; g < gv.order; ++g) {
            if (seen[g]) continue;
            for (int p : pieces[piece].body) {
                int pg = gv.times(p, g);
                for (int c : rho) seen[gv.times(pg, c)] = 1;
            }
            out.push_back({piece, de, g, faceGroup(piece, de, g)});
        }
    }
    return out;
}

std::vector<Handle> PreCovering::freeHandles() const {
    HandleKey key(*gog);
    std::unordered_set<std::int64_t> used;
    for (const auto& gl : gluings) {
        used.insert(key(gl.a, gl.de, cosetRep(gl.a, gl.de, gl.ga)));
        used.insert(key(gl.b, gl.de ^ 1, cosetRep(gl.b, gl.de ^ 1, gl.gb)));
    }
    std::vector<Handle> out;
    for (int p = 0; p < numPieces(); ++p)
        for (auto& h : handlesOf(p))
            if (!used.count(key(h.piece, h.de, h.rep))) out.push_back(std::move(h));
    return out;
}

void PreCovering::fold() {
    const GraphOfGroups& G = *gog;
    std::vector<char> alive(pieces.size(), 1);
    auto flip = [](PieceGluing& gl) {
        std::swap(gl.a, gl.b);
        std::swap(gl.ga, gl.gb);
        gl.de ^= 1;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        // Face-group alignment: a gluing identifies the face sheets of both
        // sides, so each body must absorb the conjugated face of the other.
        for (const auto& gl : gluings) {
            auto ea = faceGroup(gl.a, gl.de, gl.ga);
            auto eb = faceGroup(gl.b, gl.de ^ 1, gl.gb);
            if (ea == eb) continue;
            const auto& gvA = G.vertexGroups[pieces[gl.a].vertex];
            const auto& gvB = G.vertexGroups[pieces[gl.b].vertex];
            std::vector<int> gensA = pieces[gl.a].body;
            std::vector<int> gensB = pieces[gl.b].body;
            for (int c : eb)
                gensA.push_back(gvA.times(gvA.times(gl.ga, G.rhoI(gl.de)[c]),
                                          gvA.inverse(gl.ga)));
            for (int c : ea)
                gensB.push_back(gvB.times(gvB.times(gl.gb, G.rhoT(gl.de)[c]),
                                          gvB.inverse(gl.gb)));
            pieces[gl.a].body = subgroupClosure(gvA, gensA);
            pieces[gl.b].body = subgroupClosure(gvB, gensB);
            changed = true;
            break;
        }
        if (changed) continue;
        // A handle carrying two gluings: identify the two far sides.
        HandleKey key(G);
        std::unordered_map<std::int64_t, std::pair<int, int>> seen;  // idx, side
        int i1 = -1, i2 = -1, s1 = 0, s2 = 0;
        for (int i = 0; i < static_cast<int>(gluings.size()) && i1 < 0; ++i) {
            const auto& gl = gluings[i];
            std::int64_t ka = key(gl.a, gl.de, cosetRep(gl.a, gl.de, gl.ga));
            std::int64_t kb =
                key(gl.b, gl.de ^ 1, cosetRep(gl.b, gl.de ^ 1, gl.gb));
            for (int side = 0; side < 2 && i1 < 0; ++side) {
                auto [it, fresh] =
                    seen.try_emplace(side ? kb : ka, std::pair{i, side});
                if (!fresh) {
                    i1 = it->second.first;
                    s1 = it->second.second;
                    i2 = i;
                    s2 = side;
                }
            }
        }
        if (i1 < 0) break;
        if (s1) flip(gluings[i1]);
        if (s2) flip(gluings[i2]);
        PieceGluing g1 = gluings[i1], g2 = gluings[i2];
        int p = g1.a, de = g1.de;
        const auto& gv = G.vertexGroups[pieces[p].vertex];
        const auto& ri = G.rhoI(de);
        const auto& rt = G.rhoT(de);
        int w = G.tVert(de);
        const auto& gw = G.vertexGroups[w];
        int c0 = -1;  // g2.ga = pi * g1.ga * ri[c0] with pi in the body
        for (int c = 0; c < static_cast<int>(ri.size()); ++c) {
            int x = gv.times(gv.times(g2.ga, gv.inverse(ri[c])),
                             gv.inverse(g1.ga));
            if (inBody(p, x)) {
                c0 = c;
                break;
            }
        }
        if (c0 < 0)
            throw VerificationError("colliding gluings not in one double coset");
        int h2n = gw.times(g2.gb, gw.inverse(rt[c0]));
        int lambda = gw.times(g1.gb, gw.inverse(h2n));
        int b = g1.b, c = g2.b;
        if (b == c) {
            std::vector<int> gens = pieces[b].body;
            gens.push_back(lambda);
            pieces[b].body = subgroupClosure(gw, gens);
        } else {
            // Merge c into b along the coset map P_c z -> P_b lambda z.
            std::vector<int> gens = pieces[b].body;
            for (int x : pieces[c].body)
                gens.push_back(gw.times(gw.times(lambda, x), gw.inverse(lambda)));
            pieces[b].body = subgroupClosure(gw, gens);
            for (auto& gl : gluings) {
                if (gl.a == c) {
                    gl.a = b;
                    gl.ga = gw.times(lambda, gl.ga);
                }
                if (gl.b == c) {
                    gl.b = b;
                    gl.gb = gw.times(lambda, gl.gb);
                }
            }
            if (basePiece == c) {
                basePiece = b;
                baseRep = gw.times(lambda, baseRep);
            }
            alive[c] = 0;
        }
        gluings.erase(gluings.begin() + i2);
        changed = true;
    }
    // Compact tombstoned pieces.
    std::vector<int> remap(pieces.size(), -1);
    std::vector<Piece> keep;
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (alive[i]) {
            remap[i] = static_cast<int>(keep.size());
            keep.push_back(std::move(pieces[i]));
        }
    pieces = std::move(keep);
    for (auto& gl : gluings) {
        gl.a = remap[gl.a];
        gl.b = remap[gl.b];
    }
    basePiece = remap[basePiece];
}

void PreCovering::validate(bool requireComplete) const {
    if (!gog) throw UsageError("pre-covering has no underlying tree of groups");
    const GraphOfGroups& G = *gog;
    for (const auto& pc : pieces) {
        if (pc.vertex < 0 || pc.vertex >= G.numVertices())
            throw UsageError("piece vertex out of range");
        const auto& gv = G.vertexGroups[pc.vertex];
        if (pc.body.empty() || pc.body.front() != 0 ||
            !std::is_sorted(pc.body.begin(), pc.body.end()) ||
            pc.body != subgroupClosure(gv, pc.body))
            throw UsageError("piece body is not a subgroup");
    }
    HandleKey key(G);
    std::unordered_set<std::int64_t> used;
    for (const auto& gl : gluings) {
        if (gl.de < 0 || gl.de >= 2 * G.numEdges())
            throw UsageError("gluing edge out of range");
        if (gl.a < 0 || gl.a >= numPieces() || gl.b < 0 || gl.b >= numPieces())
            throw UsageError("gluing piece out of range");
        if (pieces[gl.a].vertex != G.iVert(gl.de) ||
            pieces[gl.b].vertex != G.tVert(gl.de))
            throw UsageError("gluing endpoints over the wrong vertices");
        if (gl.ga < 0 || gl.ga >= G.vertexGroups[pieces[gl.a].vertex].order ||
            gl.gb < 0 || gl.gb >= G.vertexGroups[pieces[gl.b].vertex].order)
            throw UsageError("gluing element out of range");
        if (!used.insert(key(gl.a, gl.de, cosetRep(gl.a, gl.de, gl.ga))).second ||
            !used.insert(key(gl.b, gl.de ^ 1, cosetRep(gl.b, gl.de ^ 1, gl.gb)))
                 .second)
            throw VerificationError("handle glued twice");
        if (faceGroup(gl.a, gl.de, gl.ga) != faceGroup(gl.b, gl.de ^ 1, gl.gb))
            throw VerificationError("glued face groups disagree");
    }
    if (basePiece < 0 || basePiece >= numPieces() || baseRep < 0 ||
        baseRep >= G.vertexGroups[pieces[basePiece].vertex].order)
        throw UsageError("basepoint out of range");
    if (numPieces() > 1) {
        std::vector<std::vector<int>> adj(numPieces());
        for (const auto& gl : gluings) {
            adj[gl.a].push_back(gl.b);
            adj[gl.b].push_back(gl.a);
        }
        std::vector<char> seen(numPieces(), 0);
        std::queue<int> q;
        seen[basePiece] = 1;
        q.push(basePiece);
        int count = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    q.push(w);
                }
        }
        if (count != numPieces())
            throw VerificationError("pre-covering is not connected");
    }
    if (requireComplete) {
        if (!freeHandles().empty())
            throw VerificationError("covering still has free handles");
        long d = sheetsOver(0);
        for (int v = 1; v < G.numVertices(); ++v)
            if (sheetsOver(v) != d)
                throw VerificationError("sheet counts differ between vertices");
    }
}

long PreCovering::sheetsOver(int vertex) const {
    long d = 0;
    for (const auto& pc : pieces)
        if (pc.vertex == vertex)
            d += gog->vertexGroups[vertex].order /
                 static_cast<long>(pc.body.size());
    return d;
}

std::string PreCovering::toJson() const {
    json ps = json::array();
    for (const auto& pc : pieces)
        ps.push_back({{"vertex", pc.vertex}, {"body", pc.body}});
    json gs = json::array();
    for (const auto& gl : gluings)
        gs.push_back({{"a", gl.a},
                      {"edge", gl.de},
                      {"ga", gl.ga},
                      {"b", gl.b},
                      {"gb", gl.gb}});
    json j{{"pieces", ps},
           {"gluings", gs},
           {"base", {{"piece", basePiece}, {"rep", baseRep}}}};
    return j.dump();
}

PreCovering PreCovering::fromJson(const GraphOfGroups& g,
                                  const std::string& text) {
    json j = json::parse(text);
    PreCovering z;
    z.gog = &g;
    for (const auto& pc : j.at("pieces"))
        z.addPiece(pc.at("vertex").get<int>(),
                   pc.at("body").get<std::vector<int>>());
    for (const auto& gl : j.at("gluings"))
        z.gluings.push_back({gl.at("a").get<int>(), gl.at("edge").get<int>(),
                             gl.at("ga").get<int>(), gl.at("b").get<int>(),
                             gl.at("gb").get<int>()});
    z.basePiece = j.at("base").at("piece").get<int>();
    z.baseRep = j.at("base").at("rep").get<int>();
    z.validate();
    return z;
}

PreCovering foldSubgroup(const GraphOfGroups& g,
                         const std::vector<GPath>& gens) {
    PreCovering z;
    z.gog = &g;
    z.addPiece(g.base, {0});
    for (const GPath& gen : gens) {
        gen.validate(g);
        if (!gen.closed(g) || gen.startVertex != g.base)
            throw UsageError("generators must be closed paths at the base");
        int k = gen.length();
        if (k == 0) {
            std::vector<int> body = z.pieces[0].body;
            body.push_back(gen.elems[0]);
            z.pieces[0].body = subgroupClosure(g.vertexGroups[g.base], body);
            continue;
        }
        int prev = 0;
        for (int s = 0; s < k; ++s) {
            int de = gen.dirEdges[s];
            int v = g.tVert(de);
            int next = s + 1 == k ? 0 : z.addPiece(v, {0});
            int gb = s + 1 == k ? g.vertexGroups[v].inverse(gen.elems[k]) : 0;
            z.gluings.push_back({prev, de, gen.elems[s], next, gb});
            prev = next;
        }
    }
    z.fold();
    for (const GPath& gen : gens)
        if (!liftsClosed(z, gen))
            throw VerificationError("generator does not lift closed at the base");
    z.validate();
    return z;
}

PreCovering closeNontrivialFaces(PreCovering z) {
    const GraphOfGroups& G = *z.gog;
    // The attachment chain mirrors the (edge, subgroup) transport states; it
    // only grows past any function of that state space when some state graph
    // cycle feeds it forever.
    long cap = 64;
    for (const auto& gv : G.vertexGroups)
        cap += 16L * static_cast<long>(allSubgroups(gv).size()) * G.numEdges();
    HandleKey key(G);
    std::unordered_set<std::int64_t> used;
    for (const auto& gl : z.gluings) {
        used.insert(key(gl.a, gl.de, z.cosetRep(gl.a, gl.de, gl.ga)));
        used.insert(key(gl.b, gl.de ^ 1, z.cosetRep(gl.b, gl.de ^ 1, gl.gb)));
    }
    long attached = 0;
    for (int p = 0; p < z.numPieces(); ++p) {
        for (const auto& h : z.handlesOf(p)) {
            if (h.face.size() <= 1) continue;
            if (used.count(key(p, h.de, h.rep))) continue;
            if (++attached > cap)
                throw NormalizerConditionError(
                    "face closure exceeded " + std::to_string(cap) +
                    " attachments; an edge subgroup has a hyperbolic "
                    "normalizing element");
            const auto& rt = G.rhoT(h.de);
            std::vector<int> body;
            for (int c : h.face) body.push_back(rt[c]);
            std::sort(body.begin(), body.end());
            int q = z.addPiece(G.tVert(h.de), std::move(body));
            z.gluings.push_back({p, h.de, h.rep, q, 0});
            used.insert(key(p, h.de, h.rep));
            used.insert(key(q, h.de ^ 1, z.cosetRep(q, h.de ^ 1, 0)));
        }
    }
    z.validate();
    return z;
}

PreCovering thicken(PreCovering z, int depth) {
    const GraphOfGroups& G = *z.gog;
    HandleKey key(G);
    std::unordered_set<std::int64_t> used;
    for (const auto& gl : z.gluings) {
        used.insert(key(gl.a, gl.de, z.cosetRep(gl.a, gl.de, gl.ga)));
        used.insert(key(gl.b, gl.de ^ 1, z.cosetRep(gl.b, gl.de ^ 1, gl.gb)));
    }
    std::vector<int> dist(z.numPieces(), 0);
    for (int p = 0; p < z.numPieces(); ++p) {
        if (dist[p] >= depth) continue;
        for (const auto& h : z.handlesOf(p)) {
            if (used.count(key(p, h.de, h.rep))) continue;
            if (h.face.size() != 1)
                throw UsageError("thicken needs trivial free faces; close first");
            int q = z.addPiece(G.tVert(h.de), {0});
            dist.push_back(dist[p] + 1);
            z.gluings.push_back({p, h.de, h.rep, q, 0});
            used.insert(key(p, h.de, h.rep));
            used.insert(key(q, h.de ^ 1, z.cosetRep(q, h.de ^ 1, 0)));
        }
    }
    return z;
}

LiftIndex::LiftIndex(const PreCovering& z)
    : z_(&z), key_(2LL * z.gog->numEdges()) {
    for (const auto& gl : z.gluings) {
        halves_[gl.a * key_ + gl.de].push_back(
            {z.cosetRep(gl.a, gl.de, gl.ga), gl.ga, gl.b, gl.gb});
        halves_[gl.b * key_ + (gl.de ^ 1)].push_back(
            {z.cosetRep(gl.b, gl.de ^ 1, gl.gb), gl.gb, gl.a, gl.ga});
    }
}

LiftResult LiftIndex::lift(const GPath& p, int piece, int x) const {
    const PreCovering& z = *z_;
    const GraphOfGroups& G = *z.gog;
    if (z.pieces[piece].vertex != p.startVertex)
        throw UsageError("lift starts over the wrong vertex");
    LiftResult res;
    int v = p.startVertex;
    x = G.vertexGroups[v].times(x, p.elems[0]);
    for (int s = 0; s < p.length(); ++s) {
        int de = p.dirEdges[s];
        const auto& gv = G.vertexGroups[v];
        int rep = z.cosetRep(piece, de, x);
        const Half* hit = nullptr;
        auto it = halves_.find(piece * key_ + de);
        if (it != halves_.end())
            for (const auto& h : it->second)
                if (h.rep == rep) {
                    hit = &h;
                    break;
                }
        if (!hit) {
            res.stayed = false;
            res.piece = piece;
            res.rep = x;
            return res;
        }
        const auto& ri = G.rhoI(de);
        const auto& rt = G.rhoT(de);
        int c0 = -1;  // x = pi * gIn * ri[c0]
        for (int c = 0; c < static_cast<int>(ri.size()); ++c)
            if (z.inBody(piece, gv.times(gv.times(x, gv.inverse(ri[c])),
                                         gv.inverse(hit->gIn)))) {
                c0 = c;
                break;
            }
        if (c0 < 0)
            throw VerificationError("handle lookup disagrees with coset solve");
        v = G.tVert(de);
        piece = hit->partner;
        x = G.vertexGroups[v].times(G.vertexGroups[v].times(hit->gOut, rt[c0]),
                                    p.elems[s + 1]);
        ++res.crossings;
    }
    res.piece = piece;
    res.rep = x;
    return res;
}

LiftResult liftPath(const PreCovering& z, const GPath& p, int startPiece,
                    int startRep) {
    return LiftIndex(z).lift(p, startPiece, startRep);
}

bool liftsClosed(const PreCovering& z, const GPath& p) {
    if (p.startVertex != z.pieces[z.basePiece].vertex || !p.closed(*z.gog))
        throw UsageError("membership paths must be closed at the base vertex");
    LiftResult r = liftPath(z, p, z.basePiece, z.baseRep);
    if (!r.stayed || r.piece != z.basePiece) return false;
    const auto& gv = z.gog->vertexGroups[z.pieces[z.basePiece].vertex];
    return z.inBody(z.basePiece, gv.times(r.rep, gv.inverse(z.baseRep)));
}

int eLength(const PreCovering& z, const GPath& p) {
    LiftResult r = liftPath(z, p, z.basePiece, z.baseRep);
    if (!r.stayed) throw UsageError("path does not lift fully");
    return r.crossings;
}

AssociatedTuple associatedTuple(const GraphOfGroups& g, int de) {
    AssociatedTuple t;
    t.vertex = g.tVert(de);
    const auto& gw = g.vertexGroups[t.vertex];
    const auto& rho = g.rhoT(de);
    std::vector<char> seen(gw.order, 0);
    for (int x = 0; x < gw.order; ++x) {
        if (seen[x]) continue;
        for (int c : rho) seen[gw.times(x, c)] = 1;
        t.bReps.push_back(x);
    }
    return t;
}

PreCovering completeCover(PreCovering y1, int girthBound, std::uint64_t seed,
                          std::vector<std::string>* buildLog) {
    const GraphOfGroups& G = *y1.gog;
    EdgeOrder eo = edgeOrder(G);
    PreCovering z = std::move(y1);
    int prevMax = -1;
    for (int round = 0;; ++round) {
        if (round > 2 * G.numEdges() + 2)
            throw VerificationError("cover completion exceeded its round bound");
        std::vector<Handle> fh = z.freeHandles();
        if (fh.empty()) break;
        int maxE = fh.front().de;
        for (const auto& h : fh) {
            if (h.face.size() != 1)
                throw VerificationError("free handle with nontrivial face");
            if (eo.less(maxE, h.de)) maxE = h.de;
        }
        if (round > 0 && !eo.less(maxE, prevMax))
            throw VerificationError("free-handle edge order did not decrease");
        prevMax = maxE;
        std::vector<Handle> top;
        for (const auto& h : fh)
            if (h.de == maxE) top.push_back(h);
        int r = static_cast<int>(top.size());
        AssociatedTuple tup = associatedTuple(G, maxE);
        int s = static_cast<int>(tup.bReps.size());
        StarGluing schema = glueStars(r, s, girthBound, seed + round * 1000003u);
        int n = z.numPieces();
        PreCovering nz;
        nz.gog = z.gog;
        nz.pieces.reserve(static_cast<std::size_t>(n) * schema.numR +
                          schema.numS);
        for (int copy = 0; copy < schema.numR; ++copy) {
            for (const auto& pc : z.pieces) nz.pieces.push_back(pc);
            for (const auto& gl : z.gluings)
                nz.gluings.push_back({gl.a + copy * n, gl.de, gl.ga,
                                      gl.b + copy * n, gl.gb});
        }
        int sBase = nz.numPieces();
        for (int copy = 0; copy < schema.numS; ++copy)
            nz.addPiece(tup.vertex, {0});
        for (int j = 0; j < schema.numR * r; ++j) {
            const Handle& h = top[j % r];
            int m = schema.matching[j];
            nz.gluings.push_back({h.piece + (j / r) * n, maxE, h.rep,
                                  sBase + m / s, tup.bReps[m % s]});
        }
        nz.basePiece = z.basePiece;
        nz.baseRep = z.baseRep;
        if (buildLog)
            buildLog->push_back(
                "round " + std::to_string(round) + ": edge " +
                std::to_string(maxE) + ", r=" + std::to_string(r) +
                ", s=" + std::to_string(s) +
                ", copies=" + std::to_string(schema.numR) +
                ", hubs=" + std::to_string(schema.numS));
        z = std::move(nz);
    }
    z.validate(true);
    return z;
}

}  // namespace scs
