#include <random>

#include "scs/errors.hpp"

#include "doctest.h"
#include "scs/graph_of_groups.hpp"

using namespace scs;

namespace {

GraphOfGroups psl() {
    return GraphOfGroups::amalgam(FiniteGroupTable::cyclic(2),
                                  FiniteGroupTable::cyclic(3),
                                  FiniteGroupTable::trivial(), {0}, {0});
}

GraphOfGroups c4c6() {
    return GraphOfGroups::amalgam(FiniteGroupTable::cyclic(4),
                                  FiniteGroupTable::cyclic(6),
                                  FiniteGroupTable::cyclic(2), {0, 2}, {0, 3});
}

GraphOfGroups s3s3() {
    return GraphOfGroups::amalgam(FiniteGroupTable::dihedral(3),
                                  FiniteGroupTable::dihedral(3),
                                  FiniteGroupTable::cyclic(2), {0, 3}, {0, 3});
}

GPath randomPath(const GraphOfGroups& g, std::mt19937_64& rng, int maxLen) {
    GPath p;
    p.startVertex = static_cast<int>(rng() % g.numVertices());
    int v = p.startVertex;
    p.elems.push_back(
        static_cast<int>(rng() % g.vertexGroups[v].order));
    int len = static_cast<int>(rng() % (maxLen + 1));
    for (int i = 0; i < len; ++i) {
        std::vector<int> outgoing;
        for (int de = 0; de < 2 * g.numEdges(); ++de)
            if (g.iVert(de) == v) outgoing.push_back(de);
        if (outgoing.empty()) break;
        int de = outgoing[rng() % outgoing.size()];
        p.dirEdges.push_back(de);
        v = g.tVert(de);
        p.elems.push_back(
            static_cast<int>(rng() % g.vertexGroups[v].order));
    }
    return p;
}

// Produces an equivalent path by random coset shifts and edge detours.
GPath fatten(const GraphOfGroups& g, GPath p, std::mt19937_64& rng, int moves) {
    for (int m = 0; m < moves; ++m) {
        if (p.length() > 0 && rng() % 2) {
            // push an edge-group element across edge i
            int i = static_cast<int>(rng() % p.length());
            int de = p.dirEdges[i];
            const FiniteGroupTable& ge = g.edgeGroup(de);
            int c = static_cast<int>(rng() % ge.order);
            const FiniteGroupTable& gi = g.vertexGroups[g.iVert(de)];
            const FiniteGroupTable& gt = g.vertexGroups[g.tVert(de)];
            p.elems[i] = gi.times(p.elems[i], g.rhoI(de)[c]);
            p.elems[i + 1] =
                gt.times(g.rhoT(de)[ge.inverse(c)], p.elems[i + 1]);
        } else {
            // splice a backtracking detour e . rhoT(c) . e-bar at position i
            int i = static_cast<int>(rng() % p.elems.size());
            int v = i == 0 ? p.startVertex : g.tVert(p.dirEdges[i - 1]);
            std::vector<int> outgoing;
            for (int de = 0; de < 2 * g.numEdges(); ++de)
                if (g.iVert(de) == v) outgoing.push_back(de);
            if (outgoing.empty()) continue;
            int de = outgoing[rng() % outgoing.size()];
            const FiniteGroupTable& ge = g.edgeGroup(de);
            int c = static_cast<int>(rng() % ge.order);
            const FiniteGroupTable& gv = g.vertexGroups[v];
            // g_i == (g_i rhoI(c)^-1) . e . rhoT(c) . e-bar . 1
            p.elems[i] = gv.times(p.elems[i], g.rhoI(de)[ge.inverse(c)]);
            p.elems.insert(p.elems.begin() + i + 1, {g.rhoT(de)[c], 0});
            p.dirEdges.insert(p.dirEdges.begin() + i,
                              {de, GraphOfGroups::opposite(de)});
        }
    }
    return p;
}

bool samePath(const GPath& a, const GPath& b) {
    return a.startVertex == b.startVertex && a.elems == b.elems &&
           a.dirEdges == b.dirEdges;
}

}  // namespace

TEST_CASE("group table constructors") {
    for (int n : {1, 2, 3, 6}) {
        FiniteGroupTable c = FiniteGroupTable::cyclic(n);
        c.validate();
        CHECK(c.order == n);
    }
    FiniteGroupTable s3 = FiniteGroupTable::dihedral(3);
    s3.validate();
    CHECK(s3.order == 6);
    CHECK(allSubgroups(s3).size() == 6);
    CHECK(allSubgroups(FiniteGroupTable::cyclic(6)).size() == 4);
    CHECK(subgroupClosure(s3, {1}).size() == 3);
    CHECK(subgroupClosure(s3, {3}).size() == 2);
    CHECK(subgroupClosure(s3, {1, 3}).size() == 6);
    CHECK(isMonomorphism(FiniteGroupTable::cyclic(2), s3, {0, 3}));
    CHECK(!isMonomorphism(FiniteGroupTable::cyclic(2), s3, {0, 1}));
    CHECK(!isMonomorphism(FiniteGroupTable::cyclic(2), s3, {0, 0}));
    auto rt = FiniteGroupTable::fromJson(s3.toJson());
    CHECK(rt.mul == s3.mul);
}

TEST_CASE("amalgam shape and json round trip") {
    for (GraphOfGroups g : {psl(), c4c6(), s3s3()}) {
        g.validate();
        CHECK(g.numVertices() == 2);
        CHECK(g.numEdges() == 1);
        CHECK(g.iVert(0) == 0);
        CHECK(g.tVert(0) == 1);
        CHECK(g.iVert(1) == 1);
        CHECK(g.opposite(0) == 1);
        GraphOfGroups rt = GraphOfGroups::fromJson(g.toJson());
        rt.validate();
        CHECK(rt.toJson() == g.toJson());
    }
}

TEST_CASE("path grammar round trip") {
    GraphOfGroups g = s3s3();
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        GPath p = randomPath(g, rng, 5);
        p.validate(g);
        GPath q = GPath::parse(g, p.str(g));
        CHECK(samePath(p, q));
    }
    CHECK_THROWS_AS(GPath::parse(g, "9@0"), UsageError);
}

TEST_CASE("reduction is confluent under random fattening") {
    std::mt19937_64 rng(31);
    for (GraphOfGroups g : {psl(), c4c6(), s3s3()}) {
        for (int trial = 0; trial < 400; ++trial) {
            GPath p = randomPath(g, rng, 4);
            GPath fat = fatten(g, p, rng, 1 + static_cast<int>(rng() % 3));
            fat.validate(g);
            GPath rp = reducePath(g, p);
            GPath rf = reducePath(g, fat);
            CHECK(samePath(rp, rf));
            // reducing again is a no-op
            CHECK(samePath(rp, reducePath(g, rp)));
            if (fat.closed(g)) CHECK(pathLength(g, fat) == rp.length());
        }
    }
}

TEST_CASE("inverse and concatenation") {
    GraphOfGroups g = s3s3();
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 60; ++trial) {
        GPath p = randomPath(g, rng, 4);
        GPath inv = pathInverse(g, p);
        CHECK(inv.startVertex == p.endVertex(g));
        CHECK(inv.endVertex(g) == p.startVertex);
        GPath round = reducePath(g, pathConcat(g, p, inv));
        CHECK(round.length() == 0);
        CHECK(round.elems[0] == 0);
        CHECK(samePath(reducePath(g, pathInverse(g, inv)), reducePath(g, p)));
    }
    GPath t = trivialPath(1);
    CHECK(t.length() == 0);
    CHECK(t.elems[0] == 0);
}

TEST_CASE("edge order on a three-vertex path") {
    GraphOfGroups g;
    g.vertexGroups = {FiniteGroupTable::trivial(), FiniteGroupTable::trivial(),
                      FiniteGroupTable::trivial()};
    g.edges.push_back({0, 1, FiniteGroupTable::trivial(), {0}, {0}});
    g.edges.push_back({1, 2, FiniteGroupTable::trivial(), {0}, {0}});
    g.validate();
    EdgeOrder eo = edgeOrder(g);
    CHECK(eo.m[0] == 1);  // towards v1, one edge remains beyond
    CHECK(eo.m[1] == 0);
    CHECK(eo.m[2] == 0);
    CHECK(eo.m[3] == 1);
    CHECK(eo.less(1, 0));
    CHECK(eo.less(2, 3));
    CHECK(eo.less(0, 3));  // tie on m broken by edge id
}

TEST_CASE("normalizer condition pins") {
    CHECK(checkNormalizerCondition(psl()).verdict ==
          NormalizerReport::Verdict::Holds);
    CHECK(checkNormalizerCondition(s3s3()).verdict ==
          NormalizerReport::Verdict::Holds);
    NormalizerReport r = checkNormalizerCondition(c4c6());
    CHECK(r.verdict == NormalizerReport::Verdict::Fails);
    CHECK(r.dirEdge >= 0);
    CHECK(r.subgroup.size() > 1);
}
