#include <algorithm>
#include <random>

#include "doctest.h"
#include "scs/multigraph.hpp"

using namespace scs;

TEST_CASE("small girth pins") {
    Multigraph loop(1);
    loop.addEdge(0, 0);
    CHECK(girthSerial(loop, 10) == 1);

    Multigraph doubled(2);
    doubled.addEdge(0, 1);
    doubled.addEdge(0, 1);
    CHECK(girthSerial(doubled, 10) == 2);

    for (int n : {3, 4, 7, 12}) {
        Multigraph cyc(n);
        for (int i = 0; i < n; ++i) cyc.addEdge(i, (i + 1) % n);
        CHECK(girthSerial(cyc, 2 * n) == n);
        CHECK(girthFromSource(cyc, 0, 2 * n) == n);
    }

    Multigraph tree(4);
    tree.addEdge(0, 1);
    tree.addEdge(0, 2);
    tree.addEdge(2, 3);
    CHECK(!girthSerial(tree, 100).has_value());
    CHECK(tree.connected());
    tree.addEdge(1, 2);
    CHECK(girthSerial(tree, 100) == 3);
}

TEST_CASE("cap semantics") {
    Multigraph cyc(9);
    for (int i = 0; i < 9; ++i) cyc.addEdge(i, (i + 1) % 9);
    CHECK(!girthSerial(cyc, 8).has_value());
    CHECK(girthSerial(cyc, 9) == 9);
}

TEST_CASE("connectivity") {
    Multigraph g(3);
    g.addEdge(0, 1);
    CHECK(!g.connected());
    g.addEdge(1, 2);
    CHECK(g.connected());
    CHECK(Multigraph(0).connected());
}

TEST_CASE("serial and parallel agree on random multigraphs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 120);
        int degree = 1 + static_cast<int>(rng() % 5);
        std::vector<int> stubs;
        for (int v = 0; v < n; ++v)
            for (int d = 0; d < degree; ++d) stubs.push_back(v);
        if (stubs.size() % 2) stubs.push_back(0);
        std::shuffle(stubs.begin(), stubs.end(), rng);
        Multigraph g(n);
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2)
            g.addEdge(stubs[i], stubs[i + 1]);
        int cap = 1 + static_cast<int>(rng() % (2 * n));
        CHECK(girthSerial(g, cap) == girthParallel(g, cap));
    }
}
