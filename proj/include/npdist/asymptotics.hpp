#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "npdist/gapstats.hpp"
#include "npdist/sieve.hpp"

namespace npdist {

// One row of an asymptotics table: a raw sum at x, the expected growth
// term as a normalizer, their ratio, and (where a main term with an error
// scale exists) a scaled residual.
struct RatioRow {
    uint64_t x = 0;
    double raw = 0.0;
    double normalizer = 0.0;
    double ratio = 0.0;
    std::optional<double> residual;
    std::string label;
};

enum class TableKind { sum_a, harmonic, log_a, lemma6, gaps2, panaitopol };

// CLI token for a table (also the row label): sum, harmonic, logsum,
// lemma6, gaps2, panaitopol.
const char* table_label(TableKind kind);
std::optional<TableKind> table_kind_from_label(const std::string& label);

// Resumable position of a streaming table pass: the gap aggregate plus the
// one table-specific compensated accumulator that is not derivable from it
// (sum of H(d_k) for the harmonic table, sum of log log i for panaitopol).
struct WalkerState {
    GapAggregate agg;
    KahanSum extra;
};

// Computes table rows at strictly increasing snapshot points in a single
// streaming pass over the gaps. All sums over n <= x are evaluated
// blockwise (a full inter-prime block contributes a closed sub-sum), so a
// pass costs O(pi(x)), not O(x). This sequential walk is the reproducible
// reference mode: identical call sequences produce bit-identical rows.
class TableWalker {
public:
    TableWalker(const PrimeEngine& engine, TableKind kind)
        : eng_(&engine), kind_(kind), acc_(engine) {}

    TableWalker(const PrimeEngine& engine, TableKind kind, const WalkerState& state)
        : eng_(&engine), kind_(kind), acc_(engine, state.agg), extra_(state.extra) {}

    TableKind kind() const { return kind_; }
    WalkerState state() const { return {acc_.aggregate(), extra_}; }

    // x must be strictly greater than any previously passed value.
    RatioRow row_at(uint64_t x);

private:
    const PrimeEngine* eng_;
    TableKind kind_;
    GapAccumulator acc_;
    KahanSum extra_;
    uint64_t last_x_ = 0;
};

// Growth-diagnostic tables over a strictly increasing grid.
std::vector<RatioRow> table_sum_a(const PrimeEngine&, const std::vector<uint64_t>& grid);
std::vector<RatioRow> table_harmonic(const PrimeEngine&, const std::vector<uint64_t>& grid);
std::vector<RatioRow> table_log_a(const PrimeEngine&, const std::vector<uint64_t>& grid);
std::vector<RatioRow> table_lemma6(const PrimeEngine&, const std::vector<uint64_t>& grid);
std::vector<RatioRow> table_panaitopol(const PrimeEngine&, const std::vector<uint64_t>& grid);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
};

struct GapSquareReport {
    ExponentFit fit;                // log-log least squares of sum d^2 vs x
    std::vector<RatioRow> rows;     // per-point rows with ratio sum d^2 / (x log^3 x)
};

// Least squares of log raw against log x over table rows. Needs >= 3 rows
// with positive raw values.
ExponentFit fit_power_law(const std::vector<RatioRow>& rows);

// Fits log(sum of d^2 over gaps inside [2, x]) against log x; needs at
// least three grid points (InsufficientPointsError otherwise).
GapSquareReport gap_square_exponent(const PrimeEngine&, const std::vector<uint64_t>& grid);

}  // namespace npdist
