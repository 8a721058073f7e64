#include <doctest.h>

#include <map>
#include <random>

#include "engines.hpp"
#include "npdist/sequence.hpp"
#include "oracles.hpp"

using namespace npdist;
using testing_engines::engine_1e6;

TEST_CASE("a_of matches the published initial values") {
    const auto& e = engine_1e6();
    CHECK(a_of(e, 1) == 1);
    CHECK(a_of(e, 2) == 1);
    CHECK(a_of(e, 3) == 2);
    CHECK(a_of(e, 4) == 1);
    CHECK(a_of(e, 5) == 2);
    CHECK(a_of(e, 6) == 1);
    CHECK(a_of(e, 7) == 4);
    CHECK_THROWS_AS(a_of(e, 0), std::invalid_argument);
    CHECK_THROWS_AS(a_of(e, 999'990), RangeError);
}

TEST_CASE("stream_a produces countdown blocks") {
    const auto& e = engine_1e6();
    auto values = [](const std::vector<SequenceRecord>& recs) {
        std::vector<uint64_t> v;
        for (auto r : recs) v.push_back(r.a);
        return v;
    };
    CHECK(values(stream_a(e, 1, 7)) == std::vector<uint64_t>{1, 1, 2, 1, 2, 1, 4});
    CHECK(values(stream_a(e, 7, 10)) == std::vector<uint64_t>{4, 3, 2, 1});
    CHECK(values(stream_a(e, 2, 2)) == std::vector<uint64_t>{1});
    CHECK_THROWS_AS(stream_a(e, 0, 5), std::invalid_argument);
    CHECK_THROWS_AS(stream_a(e, 5, 4), std::invalid_argument);
    CHECK_THROWS_AS(stream_a(e, 1, 999'990), RangeError);
}

TEST_CASE("stream_a equals pointwise a_of on random windows") {
    const auto& e = engine_1e6();
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 1'000; ++i) {
        const uint64_t lo = 1 + rng() % 900'000;
        const uint64_t hi = lo + rng() % 64;
        const auto recs = stream_a(e, lo, hi);
        REQUIRE(recs.size() == hi - lo + 1);
        for (const auto& r : recs) {
            REQUIRE(r.a == a_of(e, r.n));
        }
    }
}

TEST_CASE("every stream value lands on the nearest prime") {
    const auto& e = engine_1e6();
    // Brute-force the defining property with trial division, independent of
    // the sieve: n + a_n prime and nothing prime in between.
    for_each_a(e, 1, 100'000, [&](uint64_t n, uint64_t a) {
        REQUIRE(a >= 1);
        REQUIRE(oracle::is_prime(n + a));
        for (uint64_t t = 1; t < a; ++t) REQUIRE(!oracle::is_prime(n + t));
    });
}

TEST_CASE("a_of at primes equals the following gap; block ends reach 1") {
    const auto& e = engine_1e6();
    e.for_each_prime(2, 50'000, [&](uint64_t p) {
        REQUIRE(a_of(e, p) == e.next_prime(p) - p);
        REQUIRE(a_of(e, e.next_prime(p) - 1) == 1);
    });
}

TEST_CASE("solution_count examples") {
    const auto& e = engine_1e6();
    CHECK(solution_count(e, 1, 10) == 5);   // n in {1, 2, 4, 6, 10}
    CHECK(solution_count(e, 4, 10) == 1);   // n = 7
    CHECK(solution_count(e, 100, 10) == 0);
    CHECK(solution_count(e, 2, 1) == 0);
    CHECK(solution_count(e, 1, 1) == 1);
    CHECK_THROWS_AS(solution_count(e, 0, 10), std::invalid_argument);
    CHECK_THROWS_AS(solution_count(e, 1, 2'000'000), RangeError);
}

TEST_CASE("solution_count agrees with direct enumeration") {
    const auto& e = engine_1e6();
    const uint64_t x = 5'000;
    std::map<uint64_t, uint64_t> direct;
    for_each_a(e, 1, x, [&](uint64_t, uint64_t a) { ++direct[a]; });
    for (uint64_t a = 1; a <= 40; ++a) {
        const uint64_t want = direct.count(a) ? direct[a] : 0;
        REQUIRE(solution_count(e, a, x) == want);
    }
}

TEST_CASE("solution counts partition [1, x]") {
    const auto& e = engine_1e6();
    const uint64_t x = 10'000;
    uint64_t total = 0;
    for (uint64_t a = 1; a <= 256; ++a) total += solution_count(e, a, x);
    CHECK(total == x);
}

TEST_CASE("gcd characterization holds on the oracle range") {
    const auto& e = engine_1e6();
    for (uint64_t n = 2; n <= 2'000; ++n) {
        REQUIRE(gcd_characterization_check(e, n));
    }
    CHECK(gcd_characterization_check(e, 7));
    CHECK(gcd_characterization_check(e, 100));
    CHECK(gcd_characterization_check(e, 10'000));
    CHECK_THROWS_AS(gcd_characterization_check(e, 1), std::invalid_argument);
}
