#pragma once

// Shared, lazily built engines for the test suites. Inline statics, so each
// engine is constructed once per test binary no matter how many TUs use it.

#include "npdist/sieve.hpp"

namespace testing_engines {

inline const npdist::PrimeEngine& engine_1e6() {
    static const npdist::PrimeEngine e(1'000'000);
    return e;
}

inline const npdist::PrimeEngine& engine_2m() {
    static const npdist::PrimeEngine e(2'000'000);
    return e;
}

// Covers the first 1e6 gaps: p_{1000001} = 15485867.
inline const npdist::PrimeEngine& engine_16m() {
    static const npdist::PrimeEngine e(15'500'000);
    return e;
}

}  // namespace testing_engines
