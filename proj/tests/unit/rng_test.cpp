#include "balint/rng.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using balint::Rng;
using balint::RngStream;

namespace {

std::vector<std::uint64_t> first_words(const RngStream& s, int count) {
    Rng rng(s);
    std::vector<std::uint64_t> out;
    for (int i = 0; i < count; ++i) out.push_back(rng.next_u64());
    return out;
}

} // namespace

TEST_CASE("identical stream descriptors replay the same sequence") {
    const RngStream s{42, 7};
    CHECK(first_words(s, 64) == first_words(s, 64));
}

TEST_CASE("seed and stream index both select the sequence") {
    const auto base = first_words({42, 7}, 16);
    CHECK(base != first_words({43, 7}, 16));
    CHECK(base != first_words({42, 8}, 16));
    CHECK(base != first_words(RngStream{42, 7}.substream(0), 16));
}

TEST_CASE("substreams are a pure function of parent and tag") {
    const RngStream parent{1, 2};
    CHECK(parent.substream(5) == parent.substream(5));
    CHECK(parent.substream(5) != parent.substream(6));
    CHECK(parent.substream(5).master_seed == 1);
}

TEST_CASE("uniform draws lie in [0,1) with the right moments") {
    Rng rng({3, 0});
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(sum2 / n - mean * mean - 1.0 / 12.0) < 2e-3);
}

TEST_CASE("uniform_open never returns the endpoints") {
    Rng rng({9, 9});
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform_open();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("normal draws have zero mean, unit variance, no skew") {
    Rng rng({11, 0});
    const int n = 400000;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s1 += z;
        s2 += z * z;
        s3 += z * z * z;
    }
    CHECK(std::abs(s1 / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(s3 / n) < 4.0 * std::sqrt(15.0 / n));
}

TEST_CASE("gamma draws match shape/rate moments", "[gamma]") {
    for (const auto [shape, rate] : {std::pair{1.0, 1.5}, std::pair{0.4, 2.0}, std::pair{3.5, 0.7}}) {
        Rng rng({static_cast<std::uint64_t>(shape * 100), 1});
        const int n = 300000;
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double g = rng.gamma(shape, rate);
            REQUIRE(g > 0.0);
            s1 += g;
            s2 += g * g;
        }
        const double mean = shape / rate;
        const double var = shape / (rate * rate);
        CHECK(std::abs(s1 / n - mean) < 4.0 * std::sqrt(var / n));
        CHECK(std::abs((s2 / n - (s1 / n) * (s1 / n)) / var - 1.0) < 0.05);
    }
}

TEST_CASE("neighbouring streams are uncorrelated") {
    Rng a({5, 100});
    Rng b({5, 101});
    const int n = 200000;
    double sab = 0.0;
    for (int i = 0; i < n; ++i) sab += (a.uniform() - 0.5) * (b.uniform() - 0.5);
    const double corr = sab / n * 12.0;
    CHECK(std::abs(corr) < 4.0 / std::sqrt(n));
}

TEST_CASE("fnv1a64 matches published test vectors") {
    CHECK(balint::fnv1a64("") == 0xCBF29CE484222325ull);
    CHECK(balint::fnv1a64("a") == 0xAF63DC4C8601EC8Cull);
}
