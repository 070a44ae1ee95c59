#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>

#include "scs/multigraph.hpp"

// Times the serial girth scan against the OpenMP one on configuration-model
// random regular multigraphs and checks that they agree.
int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 20000;
    int degree = argc > 2 ? std::atoi(argv[2]) : 4;
    int cap = argc > 3 ? std::atoi(argv[3]) : 64;
    std::uint64_t seed = argc > 4 ? std::strtoull(argv[4], nullptr, 10) : 7;
    if (n < 2 || degree < 1 || (static_cast<long>(n) * degree) % 2 != 0) {
        std::fprintf(stderr, "usage: bench_girth [n] [degree] [cap] [seed]\n");
        return 2;
    }
    std::mt19937_64 rng(seed);
    std::vector<int> stubs(static_cast<std::size_t>(n) * degree);
    for (std::size_t i = 0; i < stubs.size(); ++i)
        stubs[i] = static_cast<int>(i) / degree;
    std::shuffle(stubs.begin(), stubs.end(), rng);
    scs::Multigraph g(n);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2)
        g.addEdge(stubs[i], stubs[i + 1]);

    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    auto serial = scs::girthSerial(g, cap);
    auto t1 = clock::now();
    auto parallel = scs::girthParallel(g, cap);
    auto t2 = clock::now();
    double ds = std::chrono::duration<double>(t1 - t0).count();
    double dp = std::chrono::duration<double>(t2 - t1).count();
    std::printf("n=%d degree=%d cap=%d girth=%s\n", n, degree, cap,
                serial ? std::to_string(*serial).c_str() : "none");
    std::printf("serial   %.3fs\nparallel %.3fs  (speedup %.2fx)\n", ds, dp,
                ds / (dp > 0 ? dp : 1e-9));
    if (serial != parallel) {
        std::fprintf(stderr, "MISMATCH between serial and parallel girth\n");
        return 1;
    }
    return 0;
}
