#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace npdist {

using u128 = unsigned __int128;
using i128 = __int128;

// Kahan compensated accumulator. `sum` is the running estimate, `comp` the
// carried correction; both must be checkpointed together for bit-identical
// resumption. Summation order is part of every contract that uses this.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

// log(d!) in nats. Direct cumulative table for d <= 256 (every prime gap
// below 1e9 is at most 282, so this path dominates); lgamma(d+1) beyond.
double log_factorial(uint64_t d);

// Harmonic number H(m) = 1 + 1/2 + ... + 1/m, H(0) = 0.
// Table-backed; grows on demand.
double harmonic_number(uint64_t m);

uint64_t isqrt_u64(uint64_t n);

// Deterministic Miller-Rabin, valid for every 64-bit input.
bool is_prime_u64(uint64_t n);

std::string u128_to_string(u128 v);

// Parses "12345", "1e6", "2.5e3" (must be integral) into a u64.
std::optional<uint64_t> parse_u64_sci(const std::string& s);

// Lossless text round-trip for binary64 ("%a" hex-float form).
std::string double_to_hex(double v);
std::optional<double> double_from_hex(const std::string& s);

// CRC-32 (IEEE 802.3, reflected) over a byte string.
uint32_t crc32(const void* data, size_t len);

}  // namespace npdist
