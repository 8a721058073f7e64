#include "npdist/asymptotics.hpp"

#include <cmath>

#include "npdist/identities.hpp"

namespace npdist {

namespace {

void check_grid(const std::vector<uint64_t>& grid, uint64_t min_x) {
    if (grid.empty()) throw std::invalid_argument("grid must be non-empty");
    uint64_t prev = 0;
    for (uint64_t x : grid) {
        if (x < min_x) throw std::invalid_argument("grid value below table's minimum x");
        if (x <= prev) throw std::invalid_argument("grid must be strictly increasing");
        prev = x;
    }
}

std::vector<RatioRow> run_table(const PrimeEngine& e, TableKind kind,
                                const std::vector<uint64_t>& grid, uint64_t min_x) {
    check_grid(grid, min_x);
    TableWalker walker(e, kind);
    std::vector<RatioRow> rows;
    rows.reserve(grid.size());
    for (uint64_t x : grid) rows.push_back(walker.row_at(x));
    return rows;
}

}  // namespace

const char* table_label(TableKind kind) {
    switch (kind) {
        case TableKind::sum_a: return "sum";
        case TableKind::harmonic: return "harmonic";
        case TableKind::log_a: return "logsum";
        case TableKind::lemma6: return "lemma6";
        case TableKind::gaps2: return "gaps2";
        case TableKind::panaitopol: return "panaitopol";
    }
    return "?";
}

std::optional<TableKind> table_kind_from_label(const std::string& label) {
    for (TableKind k : {TableKind::sum_a, TableKind::harmonic, TableKind::log_a,
                        TableKind::lemma6, TableKind::gaps2, TableKind::panaitopol})
        if (label == table_label(k)) return k;
    return std::nullopt;
}

RatioRow TableWalker::row_at(uint64_t x) {
    if (x <= last_x_) throw std::invalid_argument("table snapshots must be strictly increasing");
    last_x_ = x;

    RatioRow row;
    row.x = x;
    row.label = table_label(kind_);
    const double xd = static_cast<double>(x);

    switch (kind_) {
        case TableKind::sum_a: {
            // raw = S_x exactly via the closed form, fed by the streaming
            // prefix (gaps fully inside [2, x]).
            u128 s;
            if (x < 3) {
                s = x;
            } else {
                acc_.advance(x, BoundMode::prime_value);
                const auto& agg = acc_.aggregate();
                auto q = acc_.peek_next_prime();
                if (!q) throw RangeError("sum table: next prime after x exceeds sieve limit");
                s = closed_sum_from_parts({x, agg.last_prime, *q, agg.sum_d2});
            }
            row.raw = static_cast<double>(s);
            row.normalizer = xd * std::log(xd);
            row.ratio = row.raw / row.normalizer;
            row.residual = row.raw / std::pow(xd, 23.0 / 18.0);
            break;
        }
        case TableKind::harmonic:
        case TableKind::log_a: {
            // Full blocks [p_k, p_{k+1}-1] with p_{k+1} <= x+1 contribute a
            // closed sub-sum; the straddling block contributes a partial
            // tail; n = 1 contributes 1/a_1 = 1 resp. log a_1 = 0.
            if (x > eng_->limit())
                throw RangeError("table: x exceeds sieve limit");
            const bool harmonic = kind_ == TableKind::harmonic;
            while (true) {
                auto q = acc_.peek_next_prime();
                if (!q || *q > x + 1) break;
                const uint64_t d = *q - acc_.aggregate().last_prime;
                extra_.add(harmonic ? harmonic_number(d) : log_factorial(d));
                acc_.consume_one();
            }
            double partial = 0.0;
            const uint64_t lp = acc_.aggregate().last_prime;
            if (lp <= x) {
                auto q = acc_.peek_next_prime();
                if (!q) throw RangeError("table: next prime after x exceeds sieve limit");
                const uint64_t d = *q - lp;
                const uint64_t terms = x - lp + 1;
                partial = harmonic
                              ? harmonic_number(d) - harmonic_number(d - terms)
                              : log_factorial(d) - log_factorial(d - terms);
            }
            if (harmonic) {
                row.raw = 1.0 + extra_.value() + partial;
                row.normalizer = xd * std::log(std::log(xd)) / std::log(xd);
                row.ratio = row.raw / row.normalizer;
                row.residual = (row.raw - row.normalizer) / (xd / std::log(xd));
            } else {
                row.raw = extra_.value() + partial;
                row.normalizer = xd;
                row.ratio = row.raw / xd;
                row.residual = row.raw / (xd * std::log(xd));
            }
            break;
        }
        case TableKind::lemma6: {
            acc_.advance(x, BoundMode::gap_index);
            row.raw = acc_.aggregate().sum_log_d();
            row.normalizer = xd * std::log(std::log(xd));
            row.ratio = row.raw / row.normalizer;
            row.residual = (row.raw - row.normalizer) / xd;
            break;
        }
        case TableKind::gaps2: {
            acc_.advance(x, BoundMode::prime_value);
            const double lx = std::log(xd);
            row.raw = static_cast<double>(acc_.aggregate().sum_d2);
            row.normalizer = xd * lx * lx * lx;
            row.ratio = row.raw / row.normalizer;
            break;
        }
        case TableKind::panaitopol: {
            const uint64_t k0 = acc_.aggregate().k;
            acc_.advance(x, BoundMode::gap_index);
            for (uint64_t i = std::max<uint64_t>(2, k0 + 1); i <= x; ++i)
                extra_.add(std::log(std::log(static_cast<double>(i))));
            row.raw = std::exp((acc_.aggregate().sum_log_d() - extra_.value()) / xd);
            row.normalizer = 1.0;
            row.ratio = row.raw;
            break;
        }
    }
    return row;
}

std::vector<RatioRow> table_sum_a(const PrimeEngine& e, const std::vector<uint64_t>& grid) {
    return run_table(e, TableKind::sum_a, grid, 2);
}

std::vector<RatioRow> table_harmonic(const PrimeEngine& e, const std::vector<uint64_t>& grid) {
    return run_table(e, TableKind::harmonic, grid, 2);
}

std::vector<RatioRow> table_log_a(const PrimeEngine& e, const std::vector<uint64_t>& grid) {
    return run_table(e, TableKind::log_a, grid, 2);
}

std::vector<RatioRow> table_lemma6(const PrimeEngine& e, const std::vector<uint64_t>& grid) {
    return run_table(e, TableKind::lemma6, grid, 2);
}

std::vector<RatioRow> table_panaitopol(const PrimeEngine& e, const std::vector<uint64_t>& grid) {
    return run_table(e, TableKind::panaitopol, grid, 2);
}

ExponentFit fit_power_law(const std::vector<RatioRow>& rows) {
    if (rows.size() < 3)
        throw InsufficientPointsError("power-law fit: need at least 3 grid points");
    const size_t n = rows.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& r : rows) {
        if (!(r.raw > 0)) throw std::invalid_argument("power-law fit: raw sum must be positive");
        const double lx = std::log(static_cast<double>(r.x));
        const double ly = std::log(r.raw);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly, syy += ly * ly;
    }
    ExponentFit fit;
    const double nd = static_cast<double>(n);
    const double denom = nd * sxx - sx * sx;
    fit.slope = (nd * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / nd;
    fit.points_used = static_cast<int>(n);
    const double ss_tot = syy - sy * sy / nd;
    double ss_res = 0;
    for (const auto& r : rows) {
        const double pred = fit.intercept + fit.slope * std::log(static_cast<double>(r.x));
        const double diff = std::log(r.raw) - pred;
        ss_res += diff * diff;
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

GapSquareReport gap_square_exponent(const PrimeEngine& e, const std::vector<uint64_t>& grid) {
    if (grid.size() < 3)
        throw InsufficientPointsError("gap_square_exponent: need at least 3 grid points");
    GapSquareReport report;
    report.rows = run_table(e, TableKind::gaps2, grid, 3);
    report.fit = fit_power_law(report.rows);
    return report;
}

}  // namespace npdist
