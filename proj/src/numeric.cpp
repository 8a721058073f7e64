#include "npdist/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <vector>

namespace npdist {

namespace {

constexpr int kLogFactTableSize = 257;

const std::array<double, kLogFactTableSize>& log_fact_table() {
    static const auto table = [] {
        std::array<double, kLogFactTableSize> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (int d = 1; d < kLogFactTableSize; ++d) {
            acc += std::log(static_cast<long double>(d));
            t[d] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

std::vector<double>& harmonic_table() {
    static std::vector<double> t = {0.0, 1.0};
    return t;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<u128>(a) * b % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

double log_factorial(uint64_t d) {
    if (d < kLogFactTableSize) return log_fact_table()[d];
    return std::lgamma(static_cast<double>(d) + 1.0);
}

double harmonic_number(uint64_t m) {
    auto& t = harmonic_table();
    if (m >= t.size()) {
        size_t old = t.size();
        t.resize(m + 1);
        long double acc = t[old - 1];
        for (size_t j = old; j <= m; ++j) {
            acc += 1.0L / static_cast<long double>(j);
            t[j] = static_cast<double>(acc);
        }
    }
    return t[m];
}

uint64_t isqrt_u64(uint64_t n) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n && (r + 1) != 0) ++r;
    return r;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                       23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // This witness set is deterministic for all n < 2^64.
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                       23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    char buf[48];
    int pos = 0;
    while (v > 0) {
        buf[pos++] = static_cast<char>('0' + static_cast<unsigned>(v % 10));
        v /= 10;
    }
    std::string s(buf, buf + pos);
    std::reverse(s.begin(), s.end());
    return s;
}

std::optional<uint64_t> parse_u64_sci(const std::string& s) {
    if (s.empty()) return std::nullopt;
    bool plain = s.find_first_not_of("0123456789") == std::string::npos;
    if (plain) {
        errno = 0;
        char* end = nullptr;
        unsigned long long v = std::strtoull(s.c_str(), &end, 10);
        if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
        return static_cast<uint64_t>(v);
    }
    // Scientific / decimal form, e.g. "1e6"; must denote an integer that a
    // double represents exactly (safe below 2^53).
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
    if (!(v >= 0.0) || v > 9.007199254740992e15) return std::nullopt;
    double rounded = std::nearbyint(v);
    if (rounded != v) return std::nullopt;
    return static_cast<uint64_t>(rounded);
}

std::string double_to_hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

std::optional<double> double_from_hex(const std::string& s) {
    if (s.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

uint32_t crc32(const void* data, size_t len) {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k)
                c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    const auto* p = static_cast<const unsigned char*>(data);
    uint32_t c = 0xFFFFFFFFu;
    for (size_t i = 0; i < len; ++i) c = table[(c ^ p[i]) & 0xFFu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

}  // namespace npdist
