#pragma once

#include <cstdint>
#include <vector>

#include "npdist/sieve.hpp"

namespace npdist {

// a_n = distance from n to the next prime (OEIS A013632).
struct SequenceRecord {
    uint64_t n;
    uint64_t a;  // a_n >= 1; n + a_n is prime; no prime in (n, n + a_n)
};

// a_n = next_prime(n) - n. Requires the next prime after n to be sieved.
uint64_t a_of(const PrimeEngine& engine, uint64_t n);

// Visits (n, a_n) for every n in [lo, hi]. Produced gap-by-gap: within each
// inter-prime block [p_k, p_{k+1} - 1] the values count down d_k, ..., 1,
// so the cost is O(hi - lo) plus one prime scan, not one prime lookup per n.
template <typename F>
void for_each_a(const PrimeEngine& engine, uint64_t lo, uint64_t hi, F&& f) {
    if (lo < 1 || lo > hi) throw std::invalid_argument("for_each_a: need 1 <= lo <= hi");
    PrimeCursor cursor(engine, lo);
    auto q = cursor.next();
    for (uint64_t n = lo; n <= hi; ++n) {
        while (q && n >= *q) q = cursor.next();
        if (!q) throw RangeError("for_each_a: next prime after range exceeds sieve limit");
        f(n, *q - n);
    }
}

std::vector<SequenceRecord> stream_a(const PrimeEngine& engine, uint64_t lo, uint64_t hi);

// #{n <= x : a_n = a}. Counted blockwise over gaps (a gap d_k >= a
// contributes the single solution n = p_{k+1} - a when that n <= x), plus
// the n = 1 fringe for a = 1; O(pi(x + a)) instead of O(x).
uint64_t solution_count(const PrimeEngine& engine, uint64_t a, uint64_t x);

// Cross-validates a_of(n) against the coprimality characterization of the
// sequence: a_n is the smallest t >= 1 with gcd(n!, n+t) = 1, evaluated
// without forming n! by checking smallest-prime-factor(n + t) > n.
bool gcd_characterization_check(const PrimeEngine& engine, uint64_t n);

}  // namespace npdist
