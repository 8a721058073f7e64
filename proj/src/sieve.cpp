#include "npdist/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <thread>

#include "npdist/numeric.hpp"

namespace npdist {

namespace {

// Odd primes up to `bound` by a plain byte sieve; used as base primes.
std::vector<uint64_t> odd_primes_upto(uint64_t bound) {
    std::vector<uint64_t> primes;
    if (bound < 3) return primes;
    std::vector<uint8_t> mark(bound + 1, 1);
    for (uint64_t i = 3; i * i <= bound; i += 2)
        if (mark[i])
            for (uint64_t j = i * i; j <= bound; j += 2 * i) mark[j] = 0;
    for (uint64_t i = 3; i <= bound; i += 2)
        if (mark[i]) primes.push_back(i);
    return primes;
}

}  // namespace

PrimeEngine::PrimeEngine(SieveConfig cfg) : cfg_(cfg) {
    if (cfg_.limit < 2) throw std::invalid_argument("SieveConfig: limit must be >= 2");
    if (cfg_.segment_bytes < 1024 || cfg_.segment_bytes % 2 != 0)
        throw std::invalid_argument("SieveConfig: segment_bytes must be even and >= 1024");
    build();
}

void PrimeEngine::build() {
    num_bits_ = cfg_.limit >= 3 ? (cfg_.limit - 3) / 2 + 1 : 0;
    const uint64_t num_words = (num_bits_ + 63) / 64;
    words_.assign(num_words, ~uint64_t{0});

    if (num_bits_ > 0) {
        const auto base = odd_primes_upto(isqrt_u64(cfg_.limit));

        // Segments are aligned to whole words so concurrent workers never
        // touch the same word.
        const uint64_t seg_bits = ((uint64_t{cfg_.segment_bytes} * 8 + 63) / 64) * 64;
        const uint64_t n_segments = (num_bits_ + seg_bits - 1) / seg_bits;

        auto sieve_segment = [&](uint64_t s) {
            const uint64_t b0 = s * seg_bits;
            const uint64_t b1 = std::min(b0 + seg_bits, num_bits_);
            const uint64_t v0 = value_of(b0);
            const uint64_t v1 = value_of(b1 - 1);
            for (uint64_t p : base) {
                if (p * p > v1) break;
                uint64_t m = p * p;
                if (m < v0) {
                    m = ((v0 + p - 1) / p) * p;
                    if ((m & 1) == 0) m += p;
                }
                for (uint64_t b = bit_of(m); b < b1; b += p)
                    words_[b >> 6] &= ~(uint64_t{1} << (b & 63));
            }
        };

        unsigned threads = cfg_.parallel_segments
                               ? cfg_.parallel_segments
                               : std::max(1u, std::thread::hardware_concurrency());
        threads = static_cast<unsigned>(std::min<uint64_t>(threads, n_segments));
        if (threads <= 1) {
            for (uint64_t s = 0; s < n_segments; ++s) sieve_segment(s);
        } else {
            std::atomic<uint64_t> next{0};
            std::vector<std::thread> pool;
            pool.reserve(threads);
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back([&] {
                    for (uint64_t s = next.fetch_add(1); s < n_segments;
                         s = next.fetch_add(1))
                        sieve_segment(s);
                });
            for (auto& th : pool) th.join();
        }

        // Clear padding bits above num_bits_ so popcounts stay clean.
        if (num_bits_ % 64 != 0) words_.back() &= mask_upto((num_bits_ - 1) & 63);
    }

    const uint64_t n_chunks = (words_.size() + kChunkWords - 1) / kChunkWords;
    cum_primes_.assign(n_chunks + 1, 0);
    cum_twins_.assign(n_chunks + 1, 0);
    for (uint64_t c = 0; c < n_chunks; ++c) {
        uint64_t p = 0, t = 0;
        const uint64_t w0 = c * kChunkWords;
        const uint64_t w1 = std::min<uint64_t>(w0 + kChunkWords, words_.size());
        for (uint64_t w = w0; w < w1; ++w) {
            p += std::popcount(words_[w]);
            t += twin_pairs_in_word(w);
        }
        cum_primes_[c + 1] = cum_primes_[c] + p;
        cum_twins_[c + 1] = cum_twins_[c] + t;
    }

    largest_prime_ = 2;
    for (uint64_t wi = words_.size(); wi-- > 0;) {
        if (words_[wi]) {
            unsigned b = 63 - std::countl_zero(words_[wi]);
            largest_prime_ = value_of((wi << 6) + b);
            break;
        }
    }
}

uint64_t PrimeEngine::twin_pairs_in_word(uint64_t wi) const {
    const uint64_t w = words_[wi];
    uint64_t t = std::popcount(w & (w >> 1));
    t += (w >> 63) & word_at(wi + 1) & 1;
    return t;
}

uint64_t PrimeEngine::count_primes_upto_bit(uint64_t bit) const {
    const uint64_t c = bit / (kChunkWords * 64);
    uint64_t n = cum_primes_[c];
    const uint64_t wend = bit >> 6;
    for (uint64_t w = c * kChunkWords; w < wend; ++w) n += std::popcount(words_[w]);
    n += std::popcount(words_[wend] & mask_upto(bit & 63));
    return n;
}

uint64_t PrimeEngine::count_twins_upto_bit(uint64_t bit) const {
    const uint64_t c = bit / (kChunkWords * 64);
    uint64_t n = cum_twins_[c];
    const uint64_t wend = bit >> 6;
    for (uint64_t w = c * kChunkWords; w < wend; ++w) n += twin_pairs_in_word(w);
    const uint64_t w = words_[wend];
    n += std::popcount(w & (w >> 1) & mask_upto(bit & 63));
    if ((bit & 63) == 63) n += (w >> 63) & word_at(wend + 1) & 1;
    return n;
}

bool PrimeEngine::is_prime(uint64_t n) const {
    if (n > cfg_.limit) return is_prime_u64(n);
    if (n < 2) return false;
    if (n == 2) return true;
    if ((n & 1) == 0) return false;
    const uint64_t b = bit_of(n);
    return (words_[b >> 6] >> (b & 63)) & 1;
}

uint64_t PrimeEngine::prime_count(uint64_t x) const {
    if (x > cfg_.limit) throw RangeError("prime_count: argument exceeds sieve limit");
    if (x < 2) return 0;
    if (x < 3) return 1;
    return 1 + count_primes_upto_bit(bit_of(x & 1 ? x : x - 1));
}

uint64_t PrimeEngine::nth_prime(uint64_t k) const {
    if (k == 0) throw std::invalid_argument("nth_prime: index is 1-based");
    if (k == 1) return 2;
    const uint64_t r = k - 1;  // rank among odd primes
    if (r > cum_primes_.back())
        throw RangeError("nth_prime: index beyond sieved range");
    const auto it = std::lower_bound(cum_primes_.begin() + 1, cum_primes_.end(), r);
    const uint64_t c = static_cast<uint64_t>(it - cum_primes_.begin()) - 1;
    uint64_t seen = cum_primes_[c];
    const uint64_t w1 = std::min<uint64_t>((c + 1) * kChunkWords, words_.size());
    for (uint64_t w = c * kChunkWords; w < w1; ++w) {
        const unsigned pc = std::popcount(words_[w]);
        if (seen + pc >= r) {
            uint64_t m = words_[w];
            for (uint64_t j = seen + 1; j < r; ++j) m &= m - 1;
            return value_of((w << 6) + std::countr_zero(m));
        }
        seen += pc;
    }
    throw RangeError("nth_prime: index beyond sieved range");
}

uint64_t PrimeEngine::next_prime(uint64_t n) const {
    if (n < 2) return 2;
    const uint64_t i0 = n < 3 ? 0 : bit_of(n) + 1;
    if (i0 < num_bits_) {
        uint64_t wi = i0 >> 6;
        uint64_t w = words_[wi] & (~uint64_t{0} << (i0 & 63));
        while (true) {
            if (w) return value_of((wi << 6) + std::countr_zero(w));
            if (++wi >= words_.size()) break;
            w = words_[wi];
        }
    }
    throw RangeError("next_prime: next prime after argument exceeds sieve limit");
}

uint64_t PrimeEngine::twin_prime_count(uint64_t x) const {
    if (x > cfg_.limit - 2)
        throw RangeError("twin_prime_count: needs x + 2 <= sieve limit");
    if (x < 3) return 0;
    return count_twins_upto_bit(bit_of(x & 1 ? x : x - 1));
}

std::vector<uint64_t> PrimeEngine::primes_in(uint64_t lo, uint64_t hi) const {
    std::vector<uint64_t> out;
    for_each_prime(lo, hi, [&](uint64_t p) { out.push_back(p); });
    return out;
}

PrimeCursor::PrimeCursor(const PrimeEngine& engine, uint64_t after) : eng_(&engine) {
    emit_two_ = after < 2;
    const uint64_t i0 = after < 3 ? 0 : PrimeEngine::bit_of(after) + 1;
    if (i0 >= eng_->num_bits_) {
        exhausted_ = true;
    } else {
        wi_ = i0 >> 6;
        word_ = eng_->words_[wi_] & (~uint64_t{0} << (i0 & 63));
    }
}

void PrimeCursor::scan() {
    while (!exhausted_) {
        if (word_) {
            const unsigned b = std::countr_zero(word_);
            word_ &= word_ - 1;
            ahead_ = PrimeEngine::value_of((wi_ << 6) + b);
            return;
        }
        if (++wi_ >= eng_->words_.size()) {
            exhausted_ = true;
            break;
        }
        word_ = eng_->words_[wi_];
    }
    ahead_ = std::nullopt;
}

std::optional<uint64_t> PrimeCursor::peek() {
    if (emit_two_) return 2;
    if (!ahead_ && !exhausted_) scan();
    return ahead_;
}

std::optional<uint64_t> PrimeCursor::next() {
    if (emit_two_) {
        emit_two_ = false;
        return 2;
    }
    auto p = peek();
    ahead_ = std::nullopt;
    return p;
}

}  // namespace npdist
