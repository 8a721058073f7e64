#include "npdist/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "npdist/asymptotics.hpp"
#include "npdist/gapstats.hpp"
#include "npdist/identities.hpp"
#include "npdist/sequence.hpp"
#include "npdist/sieve.hpp"

namespace npdist::cli {

namespace {

using nlohmann::ordered_json;

// The engine sieves a little past --limit so that boundary queries at the
// limit itself (next_prime, a_n, straddling blocks) stay answerable; 2048
// exceeds every known prime gap below 2^64.
constexpr uint64_t kLimitPadding = 2048;
constexpr uint64_t kDefaultLimit = 100'000'000;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

uint64_t need_u64(const std::string& s, const char* what) {
    auto v = parse_u64_sci(s);
    if (!v) throw UsageError(std::string("invalid integer for ") + what + ": '" + s + "'");
    return *v;
}

std::vector<uint64_t> parse_grid(const std::string& csv, const char* what) {
    std::vector<uint64_t> grid;
    std::string token;
    std::stringstream ss(csv);
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) grid.push_back(need_u64(token, what));
    }
    if (grid.empty()) throw UsageError(std::string(what) + ": empty list");
    for (size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw UsageError(std::string(what) + ": values must be strictly increasing");
    return grid;
}

// ---------------------------------------------------------------------------
// Structured output: one document = named columns + rows of typed cells,
// plus optional top-level metadata (e.g. the gaps2 power-law fit).
// CSV and JSON are the stable formats; table is human-oriented.
// ---------------------------------------------------------------------------

using Cell = std::variant<std::monostate, uint64_t, double, bool, std::string>;

struct Doc {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    ordered_json meta;  // object; emitted after rows
};

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cell_to_text(const Cell& c, bool human) {
    if (std::holds_alternative<std::monostate>(c)) return human ? "-" : "";
    if (const auto* u = std::get_if<uint64_t>(&c)) return std::to_string(*u);
    if (const auto* d = std::get_if<double>(&c)) {
        if (human) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10g", *d);
            return buf;
        }
        return format_real(*d);
    }
    if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return std::get<std::string>(c);
}

void write_csv(const Doc& doc, std::ostream& os) {
    for (size_t i = 0; i < doc.columns.size(); ++i)
        os << (i ? "," : "") << doc.columns[i];
    os << '\n';
    for (const auto& row : doc.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << cell_to_text(row[i], false);
        os << '\n';
    }
    for (const auto& [key, value] : doc.meta.items()) {
        os << "# " << key;
        for (const auto& [k2, v2] : value.items()) {
            os << ' ' << k2 << '=';
            if (v2.is_number_float())
                os << format_real(v2.get<double>());
            else
                os << v2.dump();
        }
        os << '\n';
    }
}

void write_json(const Doc& doc, std::ostream& os) {
    ordered_json j;
    auto& rows = j["rows"] = ordered_json::array();
    for (const auto& row : doc.rows) {
        ordered_json r;
        for (size_t i = 0; i < row.size(); ++i) {
            const Cell& c = row[i];
            if (std::holds_alternative<std::monostate>(c))
                r[doc.columns[i]] = nullptr;
            else if (const auto* u = std::get_if<uint64_t>(&c))
                r[doc.columns[i]] = *u;
            else if (const auto* d = std::get_if<double>(&c))
                r[doc.columns[i]] = *d;
            else if (const auto* b = std::get_if<bool>(&c))
                r[doc.columns[i]] = *b;
            else
                r[doc.columns[i]] = std::get<std::string>(c);
        }
        rows.push_back(std::move(r));
    }
    for (const auto& [key, value] : doc.meta.items()) j[key] = value;
    os << j.dump(2) << '\n';
}

void write_table(const Doc& doc, std::ostream& os) {
    std::vector<size_t> width(doc.columns.size());
    std::vector<std::vector<std::string>> cells;
    for (size_t i = 0; i < doc.columns.size(); ++i) width[i] = doc.columns[i].size();
    cells.reserve(doc.rows.size());
    for (const auto& row : doc.rows) {
        std::vector<std::string> line;
        for (size_t i = 0; i < row.size(); ++i) {
            line.push_back(cell_to_text(row[i], true));
            width[i] = std::max(width[i], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    auto pad = [&](const std::string& s, size_t w) {
        return s + std::string(w - s.size(), ' ');
    };
    for (size_t i = 0; i < doc.columns.size(); ++i)
        os << (i ? "  " : "") << pad(doc.columns[i], width[i]);
    os << '\n';
    for (size_t i = 0; i < doc.columns.size(); ++i)
        os << (i ? "  " : "") << std::string(width[i], '-');
    os << '\n';
    for (const auto& line : cells) {
        for (size_t i = 0; i < line.size(); ++i) os << (i ? "  " : "") << pad(line[i], width[i]);
        os << '\n';
    }
    for (const auto& [key, value] : doc.meta.items()) {
        os << key << ':';
        for (const auto& [k2, v2] : value.items()) {
            os << ' ' << k2 << '=';
            if (v2.is_number_float())
                os << cell_to_text(Cell{v2.get<double>()}, true);
            else
                os << v2.dump();
        }
        os << '\n';
    }
}

void write_doc(const Doc& doc, const std::string& format, std::ostream& os) {
    if (format == "csv")
        write_csv(doc, os);
    else if (format == "json")
        write_json(doc, os);
    else
        write_table(doc, os);
}

Cell real_cell(double v) { return Cell{v}; }
Cell opt_real_cell(const std::optional<double>& v) {
    return v ? Cell{*v} : Cell{std::monostate{}};
}

std::vector<Cell> ratio_row_cells(const RatioRow& r) {
    return {Cell{r.x}, real_cell(r.raw), real_cell(r.normalizer), real_cell(r.ratio),
            opt_real_cell(r.residual), Cell{r.label}};
}

// ---------------------------------------------------------------------------
// Per-run configuration shared by every subcommand.
// ---------------------------------------------------------------------------

struct RunConfig {
    uint64_t limit = kDefaultLimit;
    std::string format = "table";
    std::string output_path;  // empty = stdout
    uint32_t threads = 0;
};

PrimeEngine make_engine(const RunConfig& cfg) {
    SieveConfig sc;
    sc.limit = cfg.limit + kLimitPadding;
    sc.parallel_segments = cfg.threads;
    return PrimeEngine(sc);
}

// An explicit exact cap may not exceed the sieve limit; the default cap is
// clamped to it.
uint64_t resolve_exact_cap(const std::string& flag, const RunConfig& cfg) {
    if (flag.empty()) return std::min(kDefaultExactCap, cfg.limit);
    const uint64_t cap = need_u64(flag, "--exact-cap");
    if (cap > cfg.limit) throw UsageError("--exact-cap must not exceed --limit");
    return cap;
}

// Emits through --output when set.
int emit(const Doc& doc, const RunConfig& cfg, std::ostream& out) {
    if (cfg.output_path.empty()) {
        write_doc(doc, cfg.format, out);
        return 0;
    }
    std::ofstream f(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open output file: " + cfg.output_path);
    write_doc(doc, cfg.format, f);
    if (!f.flush()) throw Error("write failed: " + cfg.output_path);
    return 0;
}

// ---------------------------------------------------------------------------
// asympt, with optional checkpointing at grid boundaries. Run state lives
// in the checkpoint's caller payload: table kind, grid, output format,
// rows already computed (hex-float, re-emitted bit-identically), and the
// walker's table-specific accumulator.
// ---------------------------------------------------------------------------

ordered_json walker_extra_json(const TableWalker& walker, const std::string& which,
                               const std::string& format,
                               const std::vector<uint64_t>& grid,
                               const std::vector<RatioRow>& rows) {
    ordered_json e;
    e["kind"] = "asympt";
    e["which"] = which;
    e["format"] = format;
    e["grid"] = grid;
    const WalkerState st = walker.state();
    e["extra_sum"] = double_to_hex(st.extra.sum);
    e["extra_comp"] = double_to_hex(st.extra.comp);
    auto& jr = e["rows"] = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json o;
        o["x"] = r.x;
        o["raw"] = double_to_hex(r.raw);
        o["normalizer"] = double_to_hex(r.normalizer);
        o["ratio"] = double_to_hex(r.ratio);
        o["residual"] = r.residual ? ordered_json(double_to_hex(*r.residual))
                                   : ordered_json(nullptr);
        o["label"] = r.label;
        jr.push_back(std::move(o));
    }
    return e;
}

double hex_field(const ordered_json& j, const char* key) {
    auto v = double_from_hex(j.at(key).get<std::string>());
    if (!v) throw CheckpointCorruptError("checkpoint: malformed hex float in run state");
    return *v;
}

std::vector<RatioRow> rows_from_extra(const ordered_json& e) {
    std::vector<RatioRow> rows;
    for (const auto& o : e.at("rows")) {
        RatioRow r;
        r.x = o.at("x").get<uint64_t>();
        r.raw = hex_field(o, "raw");
        r.normalizer = hex_field(o, "normalizer");
        r.ratio = hex_field(o, "ratio");
        if (!o.at("residual").is_null()) {
            auto v = double_from_hex(o.at("residual").get<std::string>());
            if (!v) throw CheckpointCorruptError("checkpoint: malformed hex float in run state");
            r.residual = *v;
        }
        r.label = o.at("label").get<std::string>();
        rows.push_back(std::move(r));
    }
    return rows;
}

int run_asympt(const RunConfig& cfg, const std::string& which,
               const std::vector<uint64_t>& grid, uint64_t stop_after,
               const std::string& save_path, const std::string& resume_path,
               std::ostream& out, std::ostream& err) {
    const auto kind = table_kind_from_label(which);
    if (!kind) throw UsageError("asympt: unknown table '" + which + "'");

    const PrimeEngine engine = make_engine(cfg);
    std::vector<RatioRow> rows;
    std::optional<TableWalker> walker;

    if (!resume_path.empty()) {
        const Checkpoint cp = load_checkpoint(resume_path);
        const auto& e = cp.extra;
        try {
            if (!e.is_object() || e.at("kind") != "asympt" || e.at("which") != which ||
                e.at("format") != cfg.format ||
                e.at("grid").get<std::vector<uint64_t>>() != grid ||
                cp.engine_limit != engine.limit())
                throw CheckpointError(
                    "checkpoint does not match this run (which/grid/format/limit)");
            rows = rows_from_extra(e);
            WalkerState st;
            st.agg = cp.aggregate;
            st.extra.sum = hex_field(e, "extra_sum");
            st.extra.comp = hex_field(e, "extra_comp");
            walker.emplace(engine, *kind, st);
        } catch (const nlohmann::json::exception&) {
            throw CheckpointCorruptError("checkpoint: malformed run state");
        }
        if (rows.size() > grid.size())
            throw CheckpointError("checkpoint holds more rows than the requested grid");
    } else {
        walker.emplace(engine, *kind);
    }

    for (size_t i = rows.size(); i < grid.size(); ++i) {
        if (stop_after > 0 && rows.size() >= stop_after) break;
        rows.push_back(walker->row_at(grid[i]));
        if (!save_path.empty())
            save_checkpoint(walker->state().agg, engine.limit(), save_path,
                            walker_extra_json(*walker, which, cfg.format, grid, rows));
    }

    if (rows.size() < grid.size()) {
        err << "asympt: stopped after " << rows.size() << " of " << grid.size()
            << " grid points; resume with `checkpoint --resume`\n";
        return 0;
    }

    Doc doc;
    doc.columns = {"x", "raw", "normalizer", "ratio", "residual", "label"};
    for (const auto& r : rows) doc.rows.push_back(ratio_row_cells(r));
    if (*kind == TableKind::gaps2) {
        const ExponentFit fit = fit_power_law(rows);
        doc.meta["fit"] = {{"slope", fit.slope},
                           {"intercept", fit.intercept},
                           {"r_squared", fit.r_squared},
                           {"points_used", fit.points_used}};
    }
    return emit(doc, cfg, out);
}

int run_checkpoint_standalone(const RunConfig& cfg, const std::string& save_path,
                              const std::string& resume_path, std::ostream& out,
                              std::ostream& err) {
    if (!save_path.empty()) {
        const PrimeEngine engine = make_engine(cfg);
        GapAccumulator acc(engine);
        acc.advance(engine.limit(), BoundMode::prime_value);
        ordered_json extra;
        extra["kind"] = "aggregate";
        save_checkpoint(acc.aggregate(), engine.limit(), save_path, extra);
        err << "checkpoint: saved full gap aggregate (k=" << acc.aggregate().k
            << ") to " << save_path << '\n';
        return 0;
    }
    const Checkpoint cp = load_checkpoint(resume_path);
    Doc doc;
    doc.columns = {"k",          "last_prime",   "sum_d",     "sum_d2",
                   "twin_gaps",  "sum_log_d",    "sum_log_d_factorial",
                   "engine_limit", "created_at"};
    const auto& a = cp.aggregate;
    doc.rows.push_back({Cell{a.k}, Cell{a.last_prime}, Cell{a.sum_d}, Cell{a.sum_d2},
                        Cell{a.twin_gaps}, real_cell(a.sum_log_d()),
                        real_cell(a.sum_log_d_factorial()), Cell{cp.engine_limit},
                        Cell{cp.created_at}});
    return emit(doc, cfg, out);
}

// ---------------------------------------------------------------------------

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"next-prime distance sequence toolkit (OEIS A013632)", "npdist"};
    app.fallthrough();
    app.require_subcommand(0);
    app.set_version_flag("--version", "npdist 0.1.0");

    std::string limit_s = "1e8", format = "table", output_path, threads_s = "0";
    app.add_option("--limit", limit_s, "sieve bound; queries beyond it are errors (default 1e8)");
    app.add_option("--format", format, "output format (default table)")
        ->check(CLI::IsMember({"csv", "json", "table"}));
    app.add_option("--output", output_path, "write output to this file instead of stdout");
    app.add_option("--threads", threads_s, "sieving threads, 0 = auto; never affects values");

    auto* seq = app.add_subcommand("seq", "stream (n, a_n) over a range");
    std::string seq_from, seq_to;
    seq->add_option("--from", seq_from, "first n")->required();
    seq->add_option("--to", seq_to, "last n")->required();

    auto* sum = app.add_subcommand("sum", "S_n = a_1 + ... + a_n");
    std::string sum_n;
    bool sum_closed = false, sum_brute = false, sum_both = false;
    sum->add_option("--n", sum_n)->required();
    sum->add_flag("--closed", sum_closed, "closed form only (default)");
    sum->add_flag("--brute", sum_brute, "brute force only");
    sum->add_flag("--both", sum_both, "both routes plus a match column");

    auto* prod = app.add_subcommand("prod", "P_{n-1} = a_1 * ... * a_{n-1}");
    std::string prod_n, prod_cap_s;
    bool prod_exact = false, prod_log = false;
    prod->add_option("--n", prod_n)->required();
    prod->add_flag("--exact", prod_exact, "exact big-integer product");
    prod->add_flag("--log", prod_log, "log-space product in nats (default)");
    prod->add_option("--exact-cap", prod_cap_s, "largest n allowed in exact mode (default 1e5)");

    auto* count = app.add_subcommand("count", "#{n <= x : a_n = a}");
    std::string count_a, count_x;
    count->add_option("--a", count_a)->required();
    count->add_option("--x", count_x)->required();

    auto* verify = app.add_subcommand("verify", "closed-form vs brute-force identity reports");
    std::string verify_ns, verify_cap_s;
    bool verify_exact = false;
    verify->add_option("--n", verify_ns, "comma-separated list of n")->required();
    verify->add_flag("--exact", verify_exact, "also compare exact big-integer products");
    verify->add_option("--exact-cap", verify_cap_s, "largest n allowed in exact mode (default 1e5)");

    auto* asympt = app.add_subcommand("asympt", "asymptotic ratio/residual tables");
    std::string which, grid_s = "1e3,1e4,1e5,1e6,1e7,1e8", stop_after_s = "0";
    asympt->add_option("--which", which, "one of sum|harmonic|logsum|lemma6|gaps2|panaitopol")
        ->required()
        ->check(CLI::IsMember({"sum", "harmonic", "logsum", "lemma6", "gaps2", "panaitopol"}));
    asympt->add_option("--grid", grid_s, "comma-separated snapshot points (default 1e3..1e8)");
    asympt->add_option("--stop-after", stop_after_s,
                       "process at most this many grid points (0 = all); use with checkpoint");

    auto* ckpt = app.add_subcommand("checkpoint", "save/resume gap-aggregate state");
    std::string save_path, resume_path;
    ckpt->add_option("--save", save_path, "write a checkpoint file here");
    ckpt->add_option("--resume", resume_path, "load state from this checkpoint file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << "npdist 0.1.0\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "npdist: " << e.what() << '\n';
        err << app.help();
        return 1;
    }

    RunConfig cfg;
    cfg.limit = need_u64(limit_s, "--limit");
    if (cfg.limit < 2) throw UsageError("--limit must be >= 2");
    cfg.format = format;
    cfg.output_path = output_path;
    cfg.threads = static_cast<uint32_t>(need_u64(threads_s, "--threads"));

    const bool has_ckpt = ckpt->parsed();
    if (has_ckpt && save_path.empty() && resume_path.empty())
        throw UsageError("checkpoint: needs --save or --resume");

    std::vector<CLI::App*> actions;
    for (CLI::App* s : {seq, sum, prod, count, verify, asympt})
        if (s->parsed()) actions.push_back(s);
    if (actions.size() > 1) throw UsageError("give at most one action subcommand");
    if (actions.empty() && !has_ckpt) {
        err << app.help();
        return 1;
    }
    if (has_ckpt && !actions.empty() && actions[0] != asympt)
        throw UsageError("checkpoint composes with asympt only");

    if (actions.empty())
        return run_checkpoint_standalone(cfg, save_path, resume_path, out, err);

    if (actions[0] == seq) {
        const uint64_t lo = need_u64(seq_from, "--from"), hi = need_u64(seq_to, "--to");
        if (lo < 1 || lo > hi) throw UsageError("seq: need 1 <= from <= to");
        const PrimeEngine engine = make_engine(cfg);
        Doc doc;
        doc.columns = {"n", "a_n"};
        for_each_a(engine, lo, hi,
                   [&](uint64_t n, uint64_t a) { doc.rows.push_back({Cell{n}, Cell{a}}); });
        return emit(doc, cfg, out);
    }

    if (actions[0] == sum) {
        if (sum_closed + sum_brute + sum_both > 1)
            throw UsageError("sum: --closed, --brute and --both are mutually exclusive");
        const uint64_t n = need_u64(sum_n, "--n");
        if (n < 1) throw UsageError("sum: need n >= 1");
        const PrimeEngine engine = make_engine(cfg);
        Doc doc;
        int rc = 0;
        if (sum_both) {
            const u128 c = sum_a_closed(engine, n), b = sum_a_brute(engine, n);
            doc.columns = {"n", "s_closed", "s_brute", "match"};
            doc.rows.push_back(
                {Cell{n}, Cell{u128_to_string(c)}, Cell{u128_to_string(b)}, Cell{c == b}});
            if (c != b) rc = 3;
        } else if (sum_brute) {
            doc.columns = {"n", "s_brute"};
            doc.rows.push_back({Cell{n}, Cell{u128_to_string(sum_a_brute(engine, n))}});
        } else {
            doc.columns = {"n", "s_closed"};
            doc.rows.push_back({Cell{n}, Cell{u128_to_string(sum_a_closed(engine, n))}});
        }
        emit(doc, cfg, out);
        return rc;
    }

    if (actions[0] == prod) {
        if (prod_exact && prod_log)
            throw UsageError("prod: --exact and --log are mutually exclusive");
        const uint64_t n = need_u64(prod_n, "--n");
        const uint64_t cap = resolve_exact_cap(prod_cap_s, cfg);
        const PrimeEngine engine = make_engine(cfg);
        Doc doc;
        if (prod_exact) {
            doc.columns = {"n", "p"};
            doc.rows.push_back({Cell{n}, Cell{prod_a_closed_exact(engine, n, cap).str()}});
        } else {
            doc.columns = {"n", "log_p"};
            doc.rows.push_back({Cell{n}, real_cell(prod_a_closed_log(engine, n))});
        }
        return emit(doc, cfg, out);
    }

    if (actions[0] == count) {
        const uint64_t a = need_u64(count_a, "--a"), x = need_u64(count_x, "--x");
        if (a < 1) throw UsageError("count: need a >= 1");
        const PrimeEngine engine = make_engine(cfg);
        Doc doc;
        doc.columns = {"a", "x", "count"};
        doc.rows.push_back({Cell{a}, Cell{x}, Cell{solution_count(engine, a, x)}});
        return emit(doc, cfg, out);
    }

    if (actions[0] == verify) {
        std::vector<uint64_t> ns;
        {
            std::stringstream ss(verify_ns);
            std::string token;
            while (std::getline(ss, token, ','))
                if (!token.empty()) ns.push_back(need_u64(token, "--n"));
            if (ns.empty()) throw UsageError("verify: --n list is empty");
        }
        const uint64_t cap = resolve_exact_cap(verify_cap_s, cfg);
        const PrimeEngine engine = make_engine(cfg);
        const auto reports = verify_identities(engine, ns, verify_exact, cap);
        Doc doc;
        doc.columns = {"n",          "branch",       "s_closed",      "s_brute",
                       "log_p_closed", "log_p_brute", "p_exact_closed", "p_exact_brute",
                       "passing",    "error"};
        bool any_error = false, any_failing = false;
        for (const auto& r : reports) {
            any_error |= !r.error.empty();
            any_failing |= !r.passing;
            doc.rows.push_back(
                {Cell{r.n}, Cell{std::string(to_string(r.branch_used))},
                 Cell{u128_to_string(r.s_closed)}, Cell{u128_to_string(r.s_brute)},
                 real_cell(r.log_p_closed), real_cell(r.log_p_brute),
                 r.has_exact ? Cell{r.p_exact_closed.str()} : Cell{std::monostate{}},
                 r.has_exact ? Cell{r.p_exact_brute.str()} : Cell{std::monostate{}},
                 Cell{r.passing},
                 r.error.empty() ? Cell{std::monostate{}} : Cell{r.error}});
        }
        emit(doc, cfg, out);
        if (any_error) return 2;
        return any_failing ? 3 : 0;
    }

    // asympt, possibly composed with checkpoint
    const auto grid = parse_grid(grid_s, "--grid");
    const uint64_t stop_after = need_u64(stop_after_s, "--stop-after");
    return run_asympt(cfg, which, grid, stop_after, has_ckpt ? save_path : "",
                      has_ckpt ? resume_path : "", out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return run_impl(args, out, err);
    } catch (const UsageError& e) {
        err << "npdist: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "npdist: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "npdist: " << e.what() << '\n';
        return 2;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace npdist::cli
