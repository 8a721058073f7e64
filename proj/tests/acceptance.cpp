// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. `--calibrate` additionally prints the observed values
// behind every frozen bound below.

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "npdist/asymptotics.hpp"
#include "npdist/cli.hpp"
#include "npdist/gapstats.hpp"
#include "npdist/identities.hpp"
#include "npdist/sequence.hpp"
#include "npdist/sieve.hpp"

using namespace npdist;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// ---------------------------------------------------------------------------
// Frozen bounds. The mathematics above desk scale only pins growth rates
// with unspecified constants, so these regression bounds were computed once
// by this implementation (observed values in the trailing comments, printed
// by --calibrate) and are enforced verbatim ever since.
// ---------------------------------------------------------------------------

constexpr double kHarmonicResidualBound = 2.0;   // observed max 0.6364 on 1e4..1e8
constexpr double kLemma6ResidualBound = 1.0;     // observed max |.| 0.2238 on 1e3..1e6
constexpr double kSumRatioMin = 0.1;             // fixed; observed min 0.6594 on 1e3..1e8
constexpr double kSumUpperMax = 10.0;            // fixed; observed max 0.6686 on 1e3..1e8
constexpr double kLogRatioMin = 0.5;             // observed min raw/x 1.2460 on 1e3..1e8
constexpr double kLogRatioLogFactor = 0.5;       // raw/x <= this*log x; observed max 0.1804
constexpr double kSlopeLow = 1.0;
constexpr double kSlopeHigh = 23.0 / 18.0;
constexpr double kMinRSquared = 0.99;

bool g_calibrate = false;
int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << what
              << '\n';
    if (!pass) ++g_failures;
}

void calibration(const std::string& line) {
    if (g_calibrate) std::cout << "      [calibration] " << line << '\n';
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Trial-division oracles, independent of the sieve.
bool oracle_is_prime(uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (uint64_t j = 3; j * j <= n; j += 2)
        if (n % j == 0) return false;
    return true;
}

struct CliResult {
    int code;
    std::string out;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str()};
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--calibrate") == 0) g_calibrate = true;

    std::cout << "building prime engine to 1e8 ..." << std::flush;
    const auto t_build = Clock::now();
    const PrimeEngine engine(SieveConfig{.limit = 100'002'048});
    std::cout << " done in " << fmt(seconds_since(t_build)) << " s\n";

    // -----------------------------------------------------------------
    // Criteria 1-3: one streaming sweep covers the sum identity, both
    // product identities, and the prime-branch/tail consistency.
    // -----------------------------------------------------------------
    {
        const auto t0 = Clock::now();
        SweepOptions opt;
        opt.n_hi = 1'000'000;
        opt.exact_hi = 10'000;
        opt.log_rel_tol = 1e-9;
        const auto sweep = sweep_verify_identities(engine, opt);
        const double dt = seconds_since(t0);

        report(1, sweep.sum_mismatches == 0 && sweep.parity_failures == 0 &&
                      sweep.checked == 1'000'000 - 2 && dt < 30.0,
               "sum identity closed == brute for all 3 <= n <= 1e6, exact (" +
                   fmt(dt) + " s)");
        report(2, sweep.exact_mismatches == 0 && sweep.log_mismatches == 0,
               "product identity: exact equality to 1e4, log agreement <= 1e-9 to 1e6 "
               "(max rel err " + fmt(sweep.max_log_rel_err) + ")");
        report(3, sweep.branch_mismatches == 0 && sweep.primes_checked == 78'498 - 1,
               "prime/composite branch consistency at every prime n <= 1e6 (" +
                   std::to_string(sweep.primes_checked) + " primes)");
        calibration("sweep max_log_rel_err = " + fmt(sweep.max_log_rel_err));
    }

    // -----------------------------------------------------------------
    // Criterion 4: ground truth of the first seven terms.
    // -----------------------------------------------------------------
    {
        const std::vector<uint64_t> expected = {1, 1, 2, 1, 2, 1, 4};
        std::vector<uint64_t> got;
        for (const auto& rec : stream_a(engine, 1, 7)) got.push_back(rec.a);
        report(4, got == expected, "a_1..a_7 = 1,1,2,1,2,1,4");
    }

    // -----------------------------------------------------------------
    // Criterion 5: every value a <= 30 occurs at least 5 times below 1e7,
    // and the solution counts partition [1, 1e5].
    // -----------------------------------------------------------------
    {
        bool enough = true;
        uint64_t min_count = UINT64_MAX;
        for (uint64_t a = 1; a <= 30; ++a) {
            const uint64_t c = solution_count(engine, a, 10'000'000);
            min_count = std::min(min_count, c);
            if (c < 5) enough = false;
        }
        uint64_t total = 0;
        for (uint64_t a = 1; a <= 256; ++a) total += solution_count(engine, a, 100'000);
        report(5, enough && total == 100'000,
               "solution_count(a, 1e7) >= 5 for a <= 30 (min " + std::to_string(min_count) +
                   "); counts partition 1e5");
        calibration("min solution_count over a <= 30 at 1e7: " + std::to_string(min_count));
    }

    // -----------------------------------------------------------------
    // Criterion 6: harmonic-sum residual bound on 1e4..1e8.
    // -----------------------------------------------------------------
    {
        const auto t0 = Clock::now();
        const std::vector<uint64_t> grid = {10'000, 100'000, 1'000'000, 10'000'000,
                                            100'000'000};
        const auto rows = table_harmonic(engine, grid);
        double worst = 0.0;
        for (const auto& r : rows) worst = std::max(worst, std::abs(*r.residual));
        const double dt = seconds_since(t0);
        report(6, worst <= kHarmonicResidualBound && dt < 120.0,
               "harmonic residual |.| <= " + fmt(kHarmonicResidualBound) + " on 1e4..1e8 "
               "(worst " + fmt(worst) + ", " + fmt(dt) + " s)");
        for (const auto& r : rows)
            calibration("harmonic x=" + std::to_string(r.x) + " raw=" + fmt(r.raw) +
                        " residual=" + fmt(*r.residual));
    }

    // -----------------------------------------------------------------
    // Criterion 7: gap-log residual bound on 1e3..1e6 (gap-index bound).
    // -----------------------------------------------------------------
    {
        const std::vector<uint64_t> grid = {1'000, 10'000, 100'000, 1'000'000};
        const auto rows = table_lemma6(engine, grid);
        double worst = 0.0;
        for (const auto& r : rows) worst = std::max(worst, std::abs(*r.residual));
        report(7, worst <= kLemma6ResidualBound,
               "lemma6 residual |.| <= " + fmt(kLemma6ResidualBound) + " on 1e3..1e6 "
               "(worst " + fmt(worst) + ")");
        for (const auto& r : rows)
            calibration("lemma6 x=" + std::to_string(r.x) + " raw=" + fmt(r.raw) +
                        " residual=" + fmt(*r.residual));
    }

    // -----------------------------------------------------------------
    // Criterion 8: sum-growth sandwich plus the gap-square power-law fit.
    // -----------------------------------------------------------------
    {
        const std::vector<uint64_t> grid = {1'000, 10'000, 100'000, 1'000'000,
                                            10'000'000, 100'000'000};
        const auto rows = table_sum_a(engine, grid);
        double worst_lower = 1e300, worst_upper = 0.0;
        for (const auto& r : rows) {
            worst_lower = std::min(worst_lower, r.ratio);
            worst_upper = std::max(worst_upper, *r.residual);
            calibration("sum x=" + std::to_string(r.x) + " ratio=" + fmt(r.ratio) +
                        " upper=" + fmt(*r.residual));
        }
        const auto g = gap_square_exponent(engine, {10'000, 100'000, 1'000'000, 10'000'000});
        calibration("gaps2 slope=" + fmt(g.fit.slope) + " r2=" + fmt(g.fit.r_squared));
        const bool sandwich = worst_lower >= kSumRatioMin && worst_upper <= kSumUpperMax;
        const bool fit_ok = g.fit.slope > kSlopeLow && g.fit.slope < kSlopeHigh &&
                            g.fit.r_squared >= kMinRSquared;
        report(8, sandwich && fit_ok,
               "sum sandwich ratio in [" + fmt(kSumRatioMin) + ", ...], upper <= " +
                   fmt(kSumUpperMax) + "; slope " + fmt(g.fit.slope) + " in (1, 23/18), r2 " +
                   fmt(g.fit.r_squared));
    }

    // -----------------------------------------------------------------
    // Criterion 9: log-sum sandwich and the concrete 0.09 p_k - 3 bound.
    // -----------------------------------------------------------------
    {
        const std::vector<uint64_t> grid = {1'000, 10'000, 100'000, 1'000'000,
                                            10'000'000, 100'000'000};
        const auto rows = table_log_a(engine, grid);
        bool sandwich = true, paper_bound = true;
        double worst_ratio = 1e300;
        for (const auto& r : rows) {
            const double per_x = r.ratio;  // raw / x
            worst_ratio = std::min(worst_ratio, per_x);
            if (per_x < kLogRatioMin ||
                per_x > kLogRatioLogFactor * std::log(static_cast<double>(r.x)))
                sandwich = false;
            const uint64_t p_k = engine.nth_prime(engine.prime_count(r.x));
            if (!(r.raw > 0.09 * static_cast<double>(p_k) - 3.0)) paper_bound = false;
            calibration("logsum x=" + std::to_string(r.x) + " raw/x=" + fmt(per_x) +
                        " raw/(xlogx)=" + fmt(*r.residual));
        }
        report(9, sandwich && paper_bound,
               "log-sum raw/x in [" + fmt(kLogRatioMin) + ", " + fmt(kLogRatioLogFactor) +
                   " log x] (min " + fmt(worst_ratio) + "); raw > 0.09 p_k - 3 at every point");
    }

    // -----------------------------------------------------------------
    // Criterion 10: oracle suite for the sieve and the gcd characterization.
    // -----------------------------------------------------------------
    {
        bool ok = true;
        uint64_t pi = 0, twins = 0, next_idx = 0;
        std::vector<uint64_t> primes;
        for (uint64_t n = 2; n <= 100'002; ++n)
            if (oracle_is_prime(n)) primes.push_back(n);
        for (uint64_t x = 0; x <= 100'000; ++x) {
            if (next_idx < primes.size() && primes[next_idx] == x) {
                ++pi;
                ++next_idx;
                if (oracle_is_prime(x + 2)) ++twins;
            }
            if (engine.prime_count(x) != pi) ok = false;
            if (engine.twin_prime_count(x) != twins) ok = false;
        }
        for (size_t k = 0; k < primes.size() && primes[k] <= 100'000; ++k)
            if (engine.nth_prime(k + 1) != primes[k]) ok = false;
        {
            uint64_t n = 0;
            for (uint64_t p : primes) {
                if (p > 100'000) break;
                while (n < p)
                    if (engine.next_prime(n++) != p) ok = false;
            }
        }
        bool gcd_ok = true;
        for (uint64_t n = 2; n <= 10'000; ++n)
            if (!gcd_characterization_check(engine, n)) gcd_ok = false;
        report(10, ok && gcd_ok,
               "pi/nth/next/twin match trial division to 1e5; gcd characterization to 1e4");
    }

    // -----------------------------------------------------------------
    // Criterion 11: byte-identical determinism and checkpoint resume.
    // -----------------------------------------------------------------
    {
        const std::vector<std::string> det = {"asympt", "--which", "harmonic",
                                              "--grid",  "1e4,1e5,1e6", "--format", "csv"};
        const auto a = run_cli(det);
        const auto b = run_cli(det);
        const bool deterministic = a.code == 0 && a.out == b.out && !a.out.empty();

        const auto ckpt = fs::temp_directory_path() / "npdist_acceptance_ckpt.json";
        fs::remove(ckpt);
        const std::vector<std::string> base = {"asympt", "--which", "harmonic", "--grid",
                                               "1e4,1e5,1e6", "--format", "csv",
                                               "--limit", "2e6"};
        const auto full = run_cli(base);
        auto partial = base;
        partial.insert(partial.end(),
                       {"--stop-after", "1", "checkpoint", "--save", ckpt.string()});
        const auto stopped = run_cli(partial);
        auto resume = base;
        resume.insert(resume.end(), {"checkpoint", "--resume", ckpt.string()});
        const auto resumed = run_cli(resume);
        const bool resume_ok = full.code == 0 && stopped.code == 0 && resumed.code == 0 &&
                               resumed.out == full.out && !full.out.empty();
        fs::remove(ckpt);

        report(11, deterministic && resume_ok,
               "repeated runs byte-identical; checkpoint+resume reproduces the full output");
    }

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: ")
              << (g_failures == 0 ? std::string() : std::to_string(g_failures)) << '\n';
    return g_failures;
}
