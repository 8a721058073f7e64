#include "npdist/identities.hpp"

#include <cmath>

#include "npdist/gapstats.hpp"
#include "npdist/sequence.hpp"

namespace npdist {

namespace {

i128 closed_sum_bracket(const ClosedSumParts& p) {
    const i128 n = p.n;
    return static_cast<i128>(p.p_lo) * p.p_lo +
           i128{2} * (n + 1 - static_cast<i128>(p.p_lo)) * p.p_hi +
           static_cast<i128>(p.sum_d2) - n * n - n;
}

BigInt factorial_big(uint64_t d) {
    BigInt f = 1;
    for (uint64_t j = 2; j <= d; ++j) f *= j;
    return f;
}

// Falling factorial d * (d-1) * ... * (d - terms + 1); empty product = 1.
BigInt falling_big(uint64_t d, uint64_t terms) {
    BigInt f = 1;
    for (uint64_t j = 0; j < terms; ++j) f *= (d - j);
    return f;
}

struct ClosedProductParts {
    uint64_t p_lo;
    uint64_t p_hi;
    uint64_t tail_terms;  // n - p_lo; 0 when n is prime
};

ClosedProductParts product_parts(const PrimeEngine& e, uint64_t n) {
    const uint64_t m = e.prime_count(n);
    const uint64_t p_lo = e.nth_prime(m);
    const uint64_t p_hi = e.next_prime(n);
    return {p_lo, p_hi, n - p_lo};
}

}  // namespace

u128 closed_sum_from_parts(const ClosedSumParts& parts) {
    const i128 bracket = closed_sum_bracket(parts);
    if (bracket < 0 || (bracket & 1))
        throw std::logic_error("closed sum: bracket must be even and nonnegative");
    return static_cast<u128>(bracket) >> 1;
}

u128 closed_sum_prime_branch(const ClosedSumParts& parts) {
    const i128 bracket = i128{2} * parts.p_hi - parts.p_lo + parts.sum_d2;
    if (bracket < 0 || (bracket & 1))
        throw std::logic_error("closed sum (prime branch): bracket must be even and nonnegative");
    return static_cast<u128>(bracket) >> 1;
}

u128 sum_a_brute(const PrimeEngine& engine, uint64_t n) {
    if (n < 1) throw std::invalid_argument("sum_a_brute: need n >= 1");
    u128 s = 0;
    for_each_a(engine, 1, n, [&](uint64_t, uint64_t a) { s += a; });
    return s;
}

u128 sum_a_closed(const PrimeEngine& engine, uint64_t n) {
    if (n < 1) throw std::invalid_argument("sum_a_closed: need n >= 1");
    if (n == 1) return 1;
    if (n == 2) return 2;
    const uint64_t m = engine.prime_count(n);
    const uint64_t p_lo = engine.nth_prime(m);
    const uint64_t p_hi = engine.next_prime(n);
    const GapAggregate agg = accumulate_to(engine, m - 1, BoundMode::gap_index);
    return closed_sum_from_parts({n, p_lo, p_hi, agg.sum_d2});
}

double prod_a_closed_log(const PrimeEngine& engine, uint64_t n) {
    if (n < 3) throw std::invalid_argument("prod_a_closed_log: need n >= 3");
    const auto parts = product_parts(engine, n);
    const uint64_t m = engine.prime_count(n);
    const GapAggregate agg = accumulate_to(engine, m - 1, BoundMode::gap_index);
    const uint64_t d = parts.p_hi - parts.p_lo;
    return agg.sum_log_d_factorial() + log_factorial(d) -
           log_factorial(d - parts.tail_terms);
}

double prod_a_brute_log(const PrimeEngine& engine, uint64_t n) {
    if (n < 3) throw std::invalid_argument("prod_a_brute_log: need n >= 3");
    KahanSum s;
    for_each_a(engine, 1, n - 1,
               [&](uint64_t, uint64_t a) { s.add(std::log(static_cast<double>(a))); });
    return s.value();
}

BigInt prod_a_closed_exact(const PrimeEngine& engine, uint64_t n, uint64_t exact_cap) {
    if (n < 3) throw std::invalid_argument("prod_a_closed_exact: need n >= 3");
    if (n > exact_cap) throw ExactCapError("prod_a_closed_exact: n exceeds exact cap");
    const auto parts = product_parts(engine, n);
    BigInt p = 1;
    GapAccumulator acc(engine);
    while (acc.aggregate().last_prime < parts.p_lo) {
        const uint64_t before = acc.aggregate().last_prime;
        acc.consume_one();
        p *= factorial_big(acc.aggregate().last_prime - before);
    }
    const uint64_t d = parts.p_hi - parts.p_lo;
    p *= falling_big(d, parts.tail_terms);
    return p;
}

BigInt prod_a_brute_exact(const PrimeEngine& engine, uint64_t n, uint64_t exact_cap) {
    if (n < 3) throw std::invalid_argument("prod_a_brute_exact: need n >= 3");
    if (n > exact_cap) throw ExactCapError("prod_a_brute_exact: n exceeds exact cap");
    BigInt p = 1;
    for_each_a(engine, 1, n - 1, [&](uint64_t, uint64_t a) { p *= a; });
    return p;
}

const char* to_string(IdentityBranch b) {
    switch (b) {
        case IdentityBranch::prime_branch: return "prime_branch";
        case IdentityBranch::composite_branch: return "composite_branch";
        case IdentityBranch::unified: return "unified";
    }
    return "?";
}

std::vector<IdentityReport> verify_identities(const PrimeEngine& engine,
                                              const std::vector<uint64_t>& ns,
                                              bool exact_products, uint64_t exact_cap) {
    std::vector<IdentityReport> reports;
    reports.reserve(ns.size());
    for (uint64_t n : ns) {
        IdentityReport r;
        r.n = n;
        try {
            if (n == 0) throw std::invalid_argument("verify: need n >= 1");
            if (n <= 2) {
                // Below the identities' starting point: S_1 = 1, S_2 = 2,
                // P_0 = P_1 = 1.
                r.s_closed = r.s_brute = n;
                r.log_p_closed = r.log_p_brute = 0.0;
                if (exact_products) {
                    r.has_exact = true;
                    r.p_exact_closed = r.p_exact_brute = 1;
                }
                r.branch_used = IdentityBranch::unified;
            } else {
                r.branch_used = engine.is_prime(n) ? IdentityBranch::prime_branch
                                                   : IdentityBranch::composite_branch;
                r.s_closed = sum_a_closed(engine, n);
                r.s_brute = sum_a_brute(engine, n);
                r.log_p_closed = prod_a_closed_log(engine, n);
                r.log_p_brute = prod_a_brute_log(engine, n);
                if (exact_products) {
                    r.has_exact = true;
                    r.p_exact_closed = prod_a_closed_exact(engine, n, exact_cap);
                    r.p_exact_brute = prod_a_brute_exact(engine, n, exact_cap);
                }
            }
            const bool sums_ok = r.s_closed == r.s_brute;
            const bool logs_ok = std::abs(r.log_p_closed - r.log_p_brute) <=
                                 kLogProductRelTol * std::max(1.0, std::abs(r.log_p_brute));
            const bool exact_ok = !r.has_exact || r.p_exact_closed == r.p_exact_brute;
            r.passing = sums_ok && logs_ok && exact_ok;
        } catch (const std::exception& ex) {
            r.passing = false;
            r.error = ex.what();
        }
        reports.push_back(std::move(r));
    }
    return reports;
}

SweepOutcome sweep_verify_identities(const PrimeEngine& engine, const SweepOptions& opt) {
    SweepOutcome out;
    if (opt.n_hi < 3) return out;

    PrimeCursor cursor(engine, 3);
    auto next = cursor.next();
    if (!next) throw RangeError("sweep: sieve limit too small");

    // Block state at n: p_lo = p_pi(n), p_hi = p_pi(n)+1, prefix aggregates
    // over gaps 1..pi(n)-1, plus running big-integer product of d_k!.
    uint64_t p_lo = 3, p_hi = *next;
    uint64_t prefix_d2 = 1;  // d_1^2
    KahanSum prefix_logfact;  // log d_1! = 0
    BigInt blocks_prod = 1;
    const bool exact_on = opt.exact_hi >= 3;

    u128 s_brute = 2;     // S_2
    KahanSum lp_brute;    // log P_2 = 0
    BigInt bp_brute = 1;  // P_2
    uint64_t prev_a = 1;  // a_2

    auto note_failure = [&](uint64_t n) {
        if (out.first_failing_n == 0) out.first_failing_n = n;
    };

    for (uint64_t n = 3; n <= opt.n_hi; ++n) {
        if (n == p_hi) {
            const uint64_t d = p_hi - p_lo;
            prefix_d2 += d * d;
            prefix_logfact.add(log_factorial(d));
            if (exact_on && n <= opt.exact_hi) blocks_prod *= factorial_big(d);
            p_lo = p_hi;
            next = cursor.next();
            if (!next) throw RangeError("sweep: next prime exceeds sieve limit");
            p_hi = *next;
        }

        lp_brute.add(std::log(static_cast<double>(prev_a)));  // folds in a_{n-1}
        const uint64_t a_n = p_hi - n;
        s_brute += a_n;

        const ClosedSumParts parts{n, p_lo, p_hi, prefix_d2};
        u128 s_closed = 0;
        bool parity_ok = true;
        try {
            s_closed = closed_sum_from_parts(parts);
        } catch (const std::logic_error&) {
            parity_ok = false;
            ++out.parity_failures;
            note_failure(n);
        }
        if (parity_ok && s_closed != s_brute) {
            ++out.sum_mismatches;
            note_failure(n);
        }

        if (n == p_lo) {  // n prime: redundant branch cross-check
            ++out.primes_checked;
            try {
                if (closed_sum_prime_branch(parts) != s_closed) {
                    ++out.branch_mismatches;
                    note_failure(n);
                }
            } catch (const std::logic_error&) {
                ++out.parity_failures;
                note_failure(n);
            }
        }

        const uint64_t d = p_hi - p_lo;
        const uint64_t tail_terms = n - p_lo;
        const double log_closed =
            prefix_logfact.value() + log_factorial(d) - log_factorial(d - tail_terms);
        const double err = std::abs(log_closed - lp_brute.value());
        const double rel = err / std::max(1.0, std::abs(lp_brute.value()));
        out.max_log_rel_err = std::max(out.max_log_rel_err, rel);
        if (rel > opt.log_rel_tol) {
            ++out.log_mismatches;
            note_failure(n);
        }

        if (exact_on && n <= opt.exact_hi) {
            bp_brute *= prev_a;
            const BigInt closed_exact = blocks_prod * falling_big(d, tail_terms);
            if (closed_exact != bp_brute) {
                ++out.exact_mismatches;
                note_failure(n);
            }
        }

        prev_a = a_n;
        ++out.checked;
    }
    return out;
}

}  // namespace npdist
