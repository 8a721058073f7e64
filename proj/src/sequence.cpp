#include "npdist/sequence.hpp"

namespace npdist {

uint64_t a_of(const PrimeEngine& engine, uint64_t n) {
    if (n < 1) throw std::invalid_argument("a_of: need n >= 1");
    return engine.next_prime(n) - n;
}

std::vector<SequenceRecord> stream_a(const PrimeEngine& engine, uint64_t lo, uint64_t hi) {
    std::vector<SequenceRecord> out;
    out.reserve(hi - lo + 1);
    for_each_a(engine, lo, hi, [&](uint64_t n, uint64_t a) { out.push_back({n, a}); });
    return out;
}

uint64_t solution_count(const PrimeEngine& engine, uint64_t a, uint64_t x) {
    if (a < 1) throw std::invalid_argument("solution_count: need a >= 1");
    if (x == 0) return 0;
    if (a > engine.limit() || x > engine.limit() - a)
        throw RangeError("solution_count: needs x + a <= sieve limit");

    uint64_t count = (a == 1) ? 1 : 0;  // n = 1 lies before the first block
    PrimeCursor cursor(engine, 2);
    uint64_t last = 2;
    while (auto q = cursor.next()) {
        if (*q > x + a) break;
        if (*q - last >= a) ++count;  // solution n = q - a, inside [p_k, x]
        last = *q;
    }
    return count;
}

bool gcd_characterization_check(const PrimeEngine& engine, uint64_t n) {
    if (n < 2) throw std::invalid_argument("gcd_characterization_check: need n >= 2");
    const uint64_t expected = a_of(engine, n);
    auto smallest_prime_factor = [](uint64_t m) {
        if (m % 2 == 0) return uint64_t{2};
        for (uint64_t j = 3; j * j <= m; j += 2)
            if (m % j == 0) return j;
        return m;
    };
    for (uint64_t t = 1; t <= expected; ++t) {
        if (smallest_prime_factor(n + t) > n) return t == expected;
    }
    return false;  // unreachable: n + expected is prime
}

}  // namespace npdist
