#include "npdist/gapstats.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace npdist {

void GapAccumulator::consume_one() {
    auto q = cursor_.next();
    if (!q)
        throw RangeError(
            "gap accumulation: next prime exceeds the sieve limit "
            "(an index bound k needs p_{k+1} sieved; raise the limit or lower the bound)");
    const uint64_t d = *q - agg_.last_prime;
    agg_.sum_d += d;
    agg_.sum_d2 += d * d;
    if (d == 2) ++agg_.twin_gaps;
    agg_.log_d.add(std::log(static_cast<double>(d)));
    agg_.log_d_fact.add(log_factorial(d));
    agg_.last_prime = *q;
    ++agg_.k;
}

void GapAccumulator::advance(uint64_t target, BoundMode mode) {
    if (mode == BoundMode::prime_value) {
        if (target > eng_->limit())
            throw RangeError("gap accumulation: prime-value bound exceeds sieve limit");
        while (true) {
            auto q = cursor_.peek();
            if (!q || *q > target) break;
            consume_one();
        }
    } else {
        while (agg_.k < target) consume_one();
    }
}

GapAggregate accumulate_to(const PrimeEngine& engine, uint64_t target, BoundMode mode) {
    GapAccumulator acc(engine);
    acc.advance(target, mode);
    return acc.aggregate();
}

uint64_t gap_at(const PrimeEngine& engine, uint64_t k) {
    if (k == 0) throw std::invalid_argument("gap_at: index is 1-based");
    return engine.nth_prime(k + 1) - engine.nth_prime(k);
}

double geometric_mean_ratio(const PrimeEngine& engine, uint64_t n) {
    if (n < 2) throw std::invalid_argument("geometric_mean_ratio: need n >= 2");
    const GapAggregate agg = accumulate_to(engine, n, BoundMode::gap_index);
    KahanSum loglog;
    for (uint64_t i = 2; i <= n; ++i)
        loglog.add(std::log(std::log(static_cast<double>(i))));
    return std::exp((agg.sum_log_d() - loglog.value()) / static_cast<double>(n));
}

namespace {

nlohmann::ordered_json aggregate_to_json(const GapAggregate& a) {
    nlohmann::ordered_json j;
    j["k"] = a.k;
    j["last_prime"] = a.last_prime;
    j["sum_d"] = a.sum_d;
    j["sum_d2"] = a.sum_d2;
    j["twin_gaps"] = a.twin_gaps;
    j["sum_log_d"] = double_to_hex(a.log_d.sum);
    j["sum_log_d_comp"] = double_to_hex(a.log_d.comp);
    j["sum_log_d_factorial"] = double_to_hex(a.log_d_fact.sum);
    j["sum_log_d_factorial_comp"] = double_to_hex(a.log_d_fact.comp);
    return j;
}

GapAggregate aggregate_from_json(const nlohmann::ordered_json& j) {
    GapAggregate a;
    a.k = j.at("k").get<uint64_t>();
    a.last_prime = j.at("last_prime").get<uint64_t>();
    a.sum_d = j.at("sum_d").get<uint64_t>();
    a.sum_d2 = j.at("sum_d2").get<uint64_t>();
    a.twin_gaps = j.at("twin_gaps").get<uint64_t>();
    auto hex = [&](const char* key) {
        auto v = double_from_hex(j.at(key).get<std::string>());
        if (!v) throw CheckpointCorruptError("checkpoint: malformed hex float");
        return *v;
    };
    a.log_d.sum = hex("sum_log_d");
    a.log_d.comp = hex("sum_log_d_comp");
    a.log_d_fact.sum = hex("sum_log_d_factorial");
    a.log_d_fact.comp = hex("sum_log_d_factorial_comp");
    return a;
}

std::string utc_timestamp() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

Checkpoint save_checkpoint(const GapAggregate& agg, uint64_t engine_limit,
                           const std::filesystem::path& path,
                           const nlohmann::ordered_json& extra) {
    Checkpoint cp;
    cp.engine_limit = engine_limit;
    cp.aggregate = agg;
    cp.created_at = utc_timestamp();
    cp.extra = extra;

    nlohmann::ordered_json j;
    j["version"] = cp.version;
    j["engine_limit"] = cp.engine_limit;
    j["created_at"] = cp.created_at;
    j["aggregate"] = aggregate_to_json(agg);
    if (!extra.is_null()) j["extra"] = extra;
    const std::string payload = j.dump();
    char crc[16];
    std::snprintf(crc, sizeof crc, "0x%08X", crc32(payload.data(), payload.size()));
    j["crc32"] = crc;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointIoError("checkpoint: cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw CheckpointIoError("checkpoint: write failed: " + path.string());
    return cp;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointIoError("checkpoint: cannot open for reading: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw CheckpointIoError("checkpoint: read failed: " + path.string());

    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(buf.str());
    } catch (const nlohmann::json::exception&) {
        throw CheckpointCorruptError("checkpoint: unparsable or truncated payload");
    }

    try {
        if (!j.is_object() || !j.contains("crc32"))
            throw CheckpointCorruptError("checkpoint: missing checksum");
        const std::string stored_crc = j.at("crc32").get<std::string>();
        j.erase("crc32");
        const std::string payload = j.dump();
        char crc[16];
        std::snprintf(crc, sizeof crc, "0x%08X", crc32(payload.data(), payload.size()));
        if (stored_crc != crc)
            throw CheckpointCorruptError("checkpoint: checksum mismatch");

        const int version = j.at("version").get<int>();
        if (version != kCheckpointVersion)
            throw CheckpointVersionError("checkpoint: unsupported version " +
                                         std::to_string(version));

        Checkpoint cp;
        cp.version = version;
        cp.engine_limit = j.at("engine_limit").get<uint64_t>();
        cp.created_at = j.at("created_at").get<std::string>();
        cp.aggregate = aggregate_from_json(j.at("aggregate"));
        cp.extra = j.contains("extra") ? nlohmann::ordered_json(j.at("extra"))
                                       : nlohmann::ordered_json(nullptr);
        return cp;
    } catch (const nlohmann::json::exception&) {
        throw CheckpointCorruptError("checkpoint: missing or mistyped field");
    }
}

}  // namespace npdist
