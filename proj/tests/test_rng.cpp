#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "sktk/rng.hpp"

using namespace sktk;

TEST_CASE("counter rng replays deterministically") {
    CounterRng a(42);
    CounterRng b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    CounterRng c(43);
    CounterRng d(42);
    int equal = 0;
    for (int i = 0; i < 100; ++i) {
        if (c.next_u64() == d.next_u64()) {
            ++equal;
        }
    }
    CHECK(equal == 0);
}

TEST_CASE("substreams are distinct and reproducible") {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t stream = 0; stream < 64; ++stream) {
        CounterRng rng(7, stream);
        firsts.insert(rng.next_u64());
    }
    CHECK(firsts.size() == 64);
    CHECK(substream_seed(7, 3) == substream_seed(7, 3));
    CHECK(substream_seed(7, 3) != substream_seed(7, 4));
    CHECK(substream_seed(8, 3) != substream_seed(7, 3));
}

TEST_CASE("uniform doubles live in [0,1) with the right mean") {
    CounterRng rng(1234);
    const int draws = 200000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    const double mean = sum / draws;
    // 5 sigma band around 1/2 for the mean of uniforms
    CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * draws));
}

TEST_CASE("exponential waiting times have the right mean") {
    CounterRng rng(777);
    const int draws = 200000;
    const double rate = 2.5;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        sum += rng.next_exponential(rate);
    }
    const double mean = sum / draws;
    CHECK(std::abs(mean - 1.0 / rate) < 5.0 / (rate * std::sqrt(draws)));
}

TEST_CASE("bounded draws cover the range uniformly") {
    CounterRng rng(55);
    std::vector<int> counts(7, 0);
    const int draws = 70000;
    for (int i = 0; i < draws; ++i) {
        const auto v = rng.next_below(7);
        CHECK(v < 7);
        ++counts[static_cast<std::size_t>(v)];
    }
    for (int c : counts) {
        CHECK(std::abs(c - draws / 7) < 5 * std::sqrt(draws / 7.0));
    }
}
