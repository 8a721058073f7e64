#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "npdist/numeric.hpp"
#include "npdist/sieve.hpp"

namespace npdist {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr uint64_t kDefaultExactCap = 100'000;
inline constexpr double kLogProductRelTol = 1e-9;

// Inputs of the closed forms for S_n = sum_{i<=n} a_i, n >= 3:
//   p_lo = p_pi(n), p_hi = p_pi(n)+1, sum_d2 = sum_{k <= pi(n)-1} d_k^2.
struct ClosedSumParts {
    uint64_t n;
    uint64_t p_lo;
    uint64_t p_hi;
    uint64_t sum_d2;
};

// Unified closed form, valid for every n >= 3 (the composite-branch
// expression, to which the prime branch reduces):
//   S_n = (p_lo^2 + 2 (n+1-p_lo) p_hi + sum_d2 - n^2 - n) / 2.
// The bracket is provably even; an odd bracket signals an implementation
// bug and throws std::logic_error.
u128 closed_sum_from_parts(const ClosedSumParts& parts);

// Prime-branch form S_n = (2 p_hi - p_lo + sum_d2) / 2, valid when n is
// prime (n = p_lo). Kept as a redundant cross-check of the unified form.
u128 closed_sum_prime_branch(const ClosedSumParts& parts);

// S_n by streaming a_1..a_n (the oracle route). 128-bit accumulation.
u128 sum_a_brute(const PrimeEngine& engine, uint64_t n);

// S_n via the closed form; n = 1, 2 are special-cased (the identity
// starts at n = 3).
u128 sum_a_closed(const PrimeEngine& engine, uint64_t n);

// log P_{n-1} (nats) and exact P_{n-1}, where P_m = a_1 ... a_m. Note the
// deliberate off-by-one: input n yields the product of the first n-1
// terms, matching the closed form
//   P_{n-1} = prod_{k<=pi(n)-1} d_k! * prod_{k=1..n-p_lo} (p_hi - p_lo - k + 1),
// whose tail (a falling factorial) is empty when n is prime. Requires n >= 3.
double prod_a_closed_log(const PrimeEngine& engine, uint64_t n);
double prod_a_brute_log(const PrimeEngine& engine, uint64_t n);
BigInt prod_a_closed_exact(const PrimeEngine& engine, uint64_t n,
                           uint64_t exact_cap = kDefaultExactCap);
BigInt prod_a_brute_exact(const PrimeEngine& engine, uint64_t n,
                          uint64_t exact_cap = kDefaultExactCap);

enum class IdentityBranch { prime_branch, composite_branch, unified };

const char* to_string(IdentityBranch b);

struct IdentityReport {
    uint64_t n = 0;
    u128 s_closed = 0;
    u128 s_brute = 0;
    double log_p_closed = 0.0;
    double log_p_brute = 0.0;
    bool has_exact = false;
    BigInt p_exact_closed;
    BigInt p_exact_brute;
    IdentityBranch branch_used = IdentityBranch::unified;
    bool passing = false;
    std::string error;  // non-empty if an operand operation failed
};

// One report per n; operand errors are captured per item, never aborting
// the batch.
std::vector<IdentityReport> verify_identities(const PrimeEngine& engine,
                                              const std::vector<uint64_t>& ns,
                                              bool exact_products,
                                              uint64_t exact_cap = kDefaultExactCap);

// Streaming closed-vs-brute verification of every n in [3, n_hi] in one
// pass: integer sum equality, log-product agreement, optional exact product
// equality up to exact_hi, prime-branch consistency, and bracket parity.
struct SweepOptions {
    uint64_t n_hi = 1'000'000;
    uint64_t exact_hi = 0;  // 0 disables exact product comparison
    double log_rel_tol = kLogProductRelTol;
};

struct SweepOutcome {
    uint64_t checked = 0;
    uint64_t sum_mismatches = 0;
    uint64_t log_mismatches = 0;
    uint64_t exact_mismatches = 0;
    uint64_t branch_mismatches = 0;
    uint64_t parity_failures = 0;
    uint64_t primes_checked = 0;
    uint64_t first_failing_n = 0;  // 0 = none
    double max_log_rel_err = 0.0;

    bool all_ok() const {
        return sum_mismatches == 0 && log_mismatches == 0 && exact_mismatches == 0 &&
               branch_mismatches == 0 && parity_failures == 0;
    }
};

SweepOutcome sweep_verify_identities(const PrimeEngine& engine, const SweepOptions& opt);

}  // namespace npdist
