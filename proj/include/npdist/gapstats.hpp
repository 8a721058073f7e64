#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "npdist/numeric.hpp"
#include "npdist/sieve.hpp"

namespace npdist {

// How accumulation targets are interpreted: either "consume gaps d_1..d_k
// with k <= target" or "consume every gap lying fully inside [2, target]",
// i.e. gaps with p_{k+1} <= target.
enum class BoundMode { gap_index, prime_value };

// Prefix aggregates over prime gaps d_i = p_{i+1} - p_i, i = 1..k.
// Real accumulators are Kahan-compensated and summed in a fixed
// left-to-right index order; the compensation terms are part of the state
// so a reloaded snapshot continues bit-identically.
struct GapAggregate {
    uint64_t k = 0;           // gaps consumed; primes p_1..p_{k+1} seen
    uint64_t last_prime = 2;  // p_{k+1}
    uint64_t sum_d = 0;       // sum d_i  (= last_prime - 2 by telescoping)
    uint64_t sum_d2 = 0;      // sum d_i^2
    uint64_t twin_gaps = 0;   // #{i <= k : d_i = 2}
    KahanSum log_d;           // sum log d_i         (log d_1 = log 1 = 0)
    KahanSum log_d_fact;      // sum log d_i!

    double sum_log_d() const { return log_d.value(); }
    double sum_log_d_factorial() const { return log_d_fact.value(); }

    // Bit-exact equality, including compensation terms.
    bool operator==(const GapAggregate& o) const {
        auto bits = [](double v) { return std::bit_cast<uint64_t>(v); };
        return k == o.k && last_prime == o.last_prime && sum_d == o.sum_d &&
               sum_d2 == o.sum_d2 && twin_gaps == o.twin_gaps &&
               bits(log_d.sum) == bits(o.log_d.sum) &&
               bits(log_d.comp) == bits(o.log_d.comp) &&
               bits(log_d_fact.sum) == bits(o.log_d_fact.sum) &&
               bits(log_d_fact.comp) == bits(o.log_d_fact.comp);
    }
};

// Streams gaps off a PrimeEngine and folds them into a GapAggregate.
// Construction from a snapshot resumes exactly where the snapshot stopped.
class GapAccumulator {
public:
    explicit GapAccumulator(const PrimeEngine& engine)
        : eng_(&engine), cursor_(engine, 2) {}

    GapAccumulator(const PrimeEngine& engine, const GapAggregate& resume_from)
        : eng_(&engine), agg_(resume_from), cursor_(engine, resume_from.last_prime) {
        if (resume_from.last_prime > engine.limit() ||
            !engine.is_prime(resume_from.last_prime))
            throw std::invalid_argument(
                "gap accumulator: snapshot's last prime is not a sieved prime here");
    }

    const GapAggregate& aggregate() const { return agg_; }

    // Consume gaps until the target bound is reached. prime_value mode
    // stops before any gap whose closing prime exceeds target (and never
    // errors for target <= limit); gap_index mode consumes exactly
    // target - k further gaps and throws RangeError if the sieve cannot
    // supply them.
    void advance(uint64_t target, BoundMode mode);

    // Closing prime of the next gap, if it exists within the limit.
    std::optional<uint64_t> peek_next_prime() { return cursor_.peek(); }

    // Consume exactly one gap.
    void consume_one();

private:
    const PrimeEngine* eng_;
    GapAggregate agg_;
    PrimeCursor cursor_;
};

// One-shot accumulation from scratch.
GapAggregate accumulate_to(const PrimeEngine& engine, uint64_t target, BoundMode mode);

// d_k = p_{k+1} - p_k, 1-based.
uint64_t gap_at(const PrimeEngine& engine, uint64_t k);

// exp( (sum_{i=2..n} log d_i - sum_{i=2..n} log log i) / n ), evaluated
// entirely in log space. The divisor is deliberately n even though both
// products have n-1 factors; the discrepancy is a bounded factor and this
// is the conventional form of the ratio.
double geometric_mean_ratio(const PrimeEngine& engine, uint64_t n);

inline constexpr int kCheckpointVersion = 1;

// On-disk snapshot: a single JSON object with hex-float reals and a CRC-32
// over the canonical serialization. `extra` is an optional caller-owned
// payload preserved verbatim (and covered by the checksum).
struct Checkpoint {
    int version = kCheckpointVersion;
    uint64_t engine_limit = 0;
    GapAggregate aggregate;
    std::string created_at;
    nlohmann::ordered_json extra;  // null when absent
};

Checkpoint save_checkpoint(const GapAggregate& agg, uint64_t engine_limit,
                           const std::filesystem::path& path,
                           const nlohmann::ordered_json& extra = nullptr);

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace npdist
