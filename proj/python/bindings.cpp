#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "npdist/asymptotics.hpp"
#include "npdist/gapstats.hpp"
#include "npdist/identities.hpp"
#include "npdist/sequence.hpp"
#include "npdist/sieve.hpp"

namespace py = pybind11;
using namespace npdist;

namespace {

py::object py_bigint(const std::string& decimal) {
    return py::module_::import("builtins").attr("int")(decimal);
}

py::object u128_to_py(u128 v) { return py_bigint(u128_to_string(v)); }

BoundMode mode_from_string(const std::string& s) {
    if (s == "gap_index") return BoundMode::gap_index;
    if (s == "prime_value") return BoundMode::prime_value;
    throw py::value_error("mode must be 'gap_index' or 'prime_value'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "next-prime distance sequence toolkit (OEIS A013632)";

    py::register_exception<RangeError>(m, "RangeError");
    py::register_exception<ExactCapError>(m, "ExactCapError");
    py::register_exception<InsufficientPointsError>(m, "InsufficientPointsError");
    py::register_exception<CheckpointError>(m, "CheckpointError");

    py::class_<SieveConfig>(m, "SieveConfig")
        .def(py::init([](uint64_t limit, uint32_t segment_bytes, uint32_t parallel_segments) {
                 return SieveConfig{limit, segment_bytes, parallel_segments};
             }),
             py::arg("limit"), py::arg("segment_bytes") = (1u << 18),
             py::arg("parallel_segments") = 0)
        .def_readwrite("limit", &SieveConfig::limit)
        .def_readwrite("segment_bytes", &SieveConfig::segment_bytes)
        .def_readwrite("parallel_segments", &SieveConfig::parallel_segments);

    py::class_<PrimeEngine>(m, "PrimeEngine")
        .def(py::init<uint64_t>(), py::arg("limit"),
             py::call_guard<py::gil_scoped_release>())
        .def(py::init<SieveConfig>(), py::arg("config"),
             py::call_guard<py::gil_scoped_release>())
        .def_property_readonly("limit", &PrimeEngine::limit)
        .def_property_readonly("largest_prime", &PrimeEngine::largest_prime)
        .def("is_prime", &PrimeEngine::is_prime, py::arg("n"))
        .def("prime_count", &PrimeEngine::prime_count, py::arg("x"))
        .def("nth_prime", &PrimeEngine::nth_prime, py::arg("k"))
        .def("next_prime", &PrimeEngine::next_prime, py::arg("n"))
        .def("twin_prime_count", &PrimeEngine::twin_prime_count, py::arg("x"))
        .def("primes_in", &PrimeEngine::primes_in, py::arg("lo"), py::arg("hi"))
        .def("__repr__", [](const PrimeEngine& e) {
            return "PrimeEngine(limit=" + std::to_string(e.limit()) + ")";
        });

    py::class_<GapAggregate>(m, "GapAggregate")
        .def_readonly("k", &GapAggregate::k)
        .def_readonly("last_prime", &GapAggregate::last_prime)
        .def_readonly("sum_d", &GapAggregate::sum_d)
        .def_readonly("sum_d2", &GapAggregate::sum_d2)
        .def_readonly("twin_gaps", &GapAggregate::twin_gaps)
        .def_property_readonly("sum_log_d", &GapAggregate::sum_log_d)
        .def_property_readonly("sum_log_d_factorial", &GapAggregate::sum_log_d_factorial)
        .def("__eq__", [](const GapAggregate& a, const GapAggregate& b) { return a == b; })
        .def("__repr__", [](const GapAggregate& a) {
            return "GapAggregate(k=" + std::to_string(a.k) +
                   ", last_prime=" + std::to_string(a.last_prime) + ")";
        });

    m.def("gap_at", &gap_at, py::arg("engine"), py::arg("k"));
    m.def(
        "accumulate_to",
        [](const PrimeEngine& e, uint64_t target, const std::string& mode) {
            return accumulate_to(e, target, mode_from_string(mode));
        },
        py::arg("engine"), py::arg("target"), py::arg("mode"));
    m.def("geometric_mean_ratio", &geometric_mean_ratio, py::arg("engine"), py::arg("n"));

    py::class_<Checkpoint>(m, "Checkpoint")
        .def_readonly("version", &Checkpoint::version)
        .def_readonly("engine_limit", &Checkpoint::engine_limit)
        .def_readonly("aggregate", &Checkpoint::aggregate)
        .def_readonly("created_at", &Checkpoint::created_at);

    m.def(
        "save_checkpoint",
        [](const GapAggregate& agg, uint64_t engine_limit, const std::filesystem::path& p) {
            return save_checkpoint(agg, engine_limit, p);
        },
        py::arg("aggregate"), py::arg("engine_limit"), py::arg("path"));
    m.def("load_checkpoint", &load_checkpoint, py::arg("path"));

    m.def("a_of", &a_of, py::arg("engine"), py::arg("n"));
    m.def(
        "stream_a",
        [](const PrimeEngine& e, uint64_t lo, uint64_t hi) {
            std::vector<std::pair<uint64_t, uint64_t>> out;
            out.reserve(hi >= lo ? hi - lo + 1 : 0);
            for (const auto& r : stream_a(e, lo, hi)) out.emplace_back(r.n, r.a);
            return out;
        },
        py::arg("engine"), py::arg("lo"), py::arg("hi"));
    m.def("solution_count", &solution_count, py::arg("engine"), py::arg("a"), py::arg("x"));
    m.def("gcd_characterization_check", &gcd_characterization_check, py::arg("engine"),
          py::arg("n"));

    m.def(
        "sum_a_closed",
        [](const PrimeEngine& e, uint64_t n) { return u128_to_py(sum_a_closed(e, n)); },
        py::arg("engine"), py::arg("n"));
    m.def(
        "sum_a_brute",
        [](const PrimeEngine& e, uint64_t n) { return u128_to_py(sum_a_brute(e, n)); },
        py::arg("engine"), py::arg("n"));
    m.def("prod_a_closed_log", &prod_a_closed_log, py::arg("engine"), py::arg("n"));
    m.def("prod_a_brute_log", &prod_a_brute_log, py::arg("engine"), py::arg("n"));
    m.def(
        "prod_a_closed_exact",
        [](const PrimeEngine& e, uint64_t n, uint64_t cap) {
            return py_bigint(prod_a_closed_exact(e, n, cap).str());
        },
        py::arg("engine"), py::arg("n"), py::arg("exact_cap") = kDefaultExactCap);
    m.def(
        "prod_a_brute_exact",
        [](const PrimeEngine& e, uint64_t n, uint64_t cap) {
            return py_bigint(prod_a_brute_exact(e, n, cap).str());
        },
        py::arg("engine"), py::arg("n"), py::arg("exact_cap") = kDefaultExactCap);

    m.def(
        "verify_identities",
        [](const PrimeEngine& e, const std::vector<uint64_t>& ns, bool exact, uint64_t cap) {
            py::list out;
            for (const auto& r : verify_identities(e, ns, exact, cap)) {
                py::dict d;
                d["n"] = r.n;
                d["branch"] = to_string(r.branch_used);
                d["s_closed"] = u128_to_py(r.s_closed);
                d["s_brute"] = u128_to_py(r.s_brute);
                d["log_p_closed"] = r.log_p_closed;
                d["log_p_brute"] = r.log_p_brute;
                if (r.has_exact) {
                    d["p_exact_closed"] = py_bigint(r.p_exact_closed.str());
                    d["p_exact_brute"] = py_bigint(r.p_exact_brute.str());
                }
                d["passing"] = r.passing;
                d["error"] = r.error;
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("engine"), py::arg("ns"), py::arg("exact_products") = false,
        py::arg("exact_cap") = kDefaultExactCap);

    py::class_<RatioRow>(m, "RatioRow")
        .def_readonly("x", &RatioRow::x)
        .def_readonly("raw", &RatioRow::raw)
        .def_readonly("normalizer", &RatioRow::normalizer)
        .def_readonly("ratio", &RatioRow::ratio)
        .def_readonly("residual", &RatioRow::residual)
        .def_readonly("label", &RatioRow::label)
        .def("__repr__", [](const RatioRow& r) {
            return "RatioRow(x=" + std::to_string(r.x) + ", label=" + r.label + ")";
        });

    py::class_<ExponentFit>(m, "ExponentFit")
        .def_readonly("slope", &ExponentFit::slope)
        .def_readonly("intercept", &ExponentFit::intercept)
        .def_readonly("r_squared", &ExponentFit::r_squared)
        .def_readonly("points_used", &ExponentFit::points_used);

    py::class_<GapSquareReport>(m, "GapSquareReport")
        .def_readonly("fit", &GapSquareReport::fit)
        .def_readonly("rows", &GapSquareReport::rows);

    m.def("table_sum_a", &table_sum_a, py::arg("engine"), py::arg("grid"));
    m.def("table_harmonic", &table_harmonic, py::arg("engine"), py::arg("grid"));
    m.def("table_log_a", &table_log_a, py::arg("engine"), py::arg("grid"));
    m.def("table_lemma6", &table_lemma6, py::arg("engine"), py::arg("grid"));
    m.def("table_panaitopol", &table_panaitopol, py::arg("engine"), py::arg("grid"));
    m.def("gap_square_exponent", &gap_square_exponent, py::arg("engine"), py::arg("grid"));
}
