#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "npdist/errors.hpp"

namespace npdist {

struct SieveConfig {
    uint64_t limit = 100'000'000;      // largest value that must be sieved
    uint32_t segment_bytes = 1u << 18; // bytes of sieving window per pass
    uint32_t parallel_segments = 0;    // sieving worker threads, 0 = auto
};

// Segmented bit-packed sieve over the odd numbers in [3, limit]; 2 is a
// special case. One bit per odd value (bit i <-> 2i+3), plus per-chunk
// cumulative prime and twin-pair counts for O(chunk) rank queries.
//
// All query methods on a fully constructed engine are read-only and safe
// for concurrent use. Queries with arguments beyond config.limit throw
// RangeError; the engine never extends itself. The one exception is
// is_prime, which answers any 64-bit argument (bitmap lookup up to the
// limit, deterministic Miller-Rabin beyond it).
class PrimeEngine {
public:
    explicit PrimeEngine(SieveConfig cfg);
    explicit PrimeEngine(uint64_t limit) : PrimeEngine(SieveConfig{.limit = limit}) {}

    const SieveConfig& config() const { return cfg_; }
    uint64_t limit() const { return cfg_.limit; }

    // Largest prime <= limit.
    uint64_t largest_prime() const { return largest_prime_; }

    bool is_prime(uint64_t n) const;

    // pi(x) = #{p prime : p <= x}. Requires x <= limit.
    uint64_t prime_count(uint64_t x) const;

    // p_k with 1-based indexing (p_1 = 2). Requires p_k <= limit.
    uint64_t nth_prime(uint64_t k) const;

    // Smallest prime strictly greater than n; equals p_{pi(n)+1}.
    // Requires the answer to be <= limit.
    uint64_t next_prime(uint64_t n) const;

    // #{p <= x : p and p+2 both prime}. Requires x + 2 <= limit.
    uint64_t twin_prime_count(uint64_t x) const;

    // Primes p with lo <= p <= hi, increasing. Requires 2 <= lo <= hi <= limit.
    std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi) const;

    template <typename F>
    void for_each_prime(uint64_t lo, uint64_t hi, F&& f) const {
        if (lo < 2 || lo > hi) throw std::invalid_argument("for_each_prime: need 2 <= lo <= hi");
        if (hi > cfg_.limit) throw RangeError("for_each_prime: hi exceeds sieve limit");
        if (lo <= 2) f(uint64_t{2});
        uint64_t first = std::max<uint64_t>(lo, 3);
        if ((first & 1) == 0) ++first;
        uint64_t last = (hi & 1) ? hi : hi - 1;
        if (last < first) return;
        uint64_t i = bit_of(first);
        uint64_t iend = bit_of(last);
        uint64_t wi = i >> 6;
        uint64_t w = words_[wi] & (~uint64_t{0} << (i & 63));
        const uint64_t wend = iend >> 6;
        while (wi <= wend) {
            uint64_t m = w;
            if (wi == wend) m &= mask_upto(iend & 63);
            while (m) {
                unsigned b = std::countr_zero(m);
                m &= m - 1;
                f(value_of((wi << 6) + b));
            }
            if (++wi > wend) break;
            w = words_[wi];
        }
    }

private:
    friend class PrimeCursor;

    static uint64_t bit_of(uint64_t odd_value) { return (odd_value - 3) >> 1; }
    static uint64_t value_of(uint64_t bit) { return 2 * bit + 3; }
    static uint64_t mask_upto(uint64_t b) {
        return b == 63 ? ~uint64_t{0} : ((uint64_t{1} << (b + 1)) - 1);
    }

    uint64_t word_at(uint64_t wi) const { return wi < words_.size() ? words_[wi] : 0; }
    uint64_t twin_pairs_in_word(uint64_t wi) const;
    uint64_t count_primes_upto_bit(uint64_t bit) const;
    uint64_t count_twins_upto_bit(uint64_t bit) const;

    void build();

    SieveConfig cfg_;
    uint64_t num_bits_ = 0;  // odd slots in [3, limit]
    std::vector<uint64_t> words_;
    // Per chunk of kChunkWords words: cumulative counts over all earlier chunks.
    static constexpr uint64_t kChunkWords = 8;
    std::vector<uint64_t> cum_primes_;
    std::vector<uint64_t> cum_twins_;
    uint64_t largest_prime_ = 2;
};

// Pull-style iterator over the primes strictly greater than a starting
// point, in increasing order. next()/peek() return nullopt once the next
// prime would exceed the engine's limit.
class PrimeCursor {
public:
    PrimeCursor(const PrimeEngine& engine, uint64_t after);

    std::optional<uint64_t> next();
    std::optional<uint64_t> peek();

private:
    void scan();

    const PrimeEngine* eng_;
    bool emit_two_ = false;
    uint64_t wi_ = 0;
    uint64_t word_ = 0;
    std::optional<uint64_t> ahead_;
    bool exhausted_ = false;
};

}  // namespace npdist
