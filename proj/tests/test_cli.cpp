#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "npdist/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = npdist::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const char* name) { return fs::temp_directory_path() / name; }

}  // namespace

TEST_CASE("seq emits csv rows ending in 7,4") {
    const auto r = run_cli({"seq", "--from", "1", "--to", "7", "--format", "csv",
                            "--limit", "1000"});
    CHECK(r.code == 0);
    CHECK(r.out == "n,a_n\n1,1\n2,1\n3,2\n4,1\n5,2\n6,1\n7,4\n");
}

TEST_CASE("verify exits 0 on the identity examples") {
    CHECK(run_cli({"verify", "--n", "3,4,5,9", "--exact", "--limit", "1000"}).code == 0);
    CHECK(run_cli({"verify", "--n", "2", "--exact", "--limit", "1000"}).code == 0);
    CHECK(run_cli({"verify", "--n", "1", "--limit", "1000"}).code == 0);
}

TEST_CASE("verify reports per-item errors with exit 2") {
    const auto r = run_cli({"verify", "--n", "5,12345678", "--limit", "1000", "--format", "csv"});
    CHECK(r.code == 2);
    CHECK(r.out.find("true") != std::string::npos);   // n = 5 still verified
    CHECK(r.out.find("false") != std::string::npos);  // errored item marked failing
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli({"frobnicate"}).code == 1);
    CHECK(run_cli({"seq", "--from", "5"}).code == 1);             // missing --to
    CHECK(run_cli({"seq", "--from", "9", "--to", "3"}).code == 1);
    CHECK(run_cli({"seq", "--from", "x", "--to", "3"}).code == 1);
    CHECK(run_cli({"sum", "--n", "10", "--closed", "--brute"}).code == 1);
    CHECK(run_cli({"asympt", "--which", "nope", "--grid", "10,20"}).code == 1);
    CHECK(run_cli({"asympt", "--which", "sum", "--grid", "20,10", "--limit", "100"}).code == 1);
    CHECK(run_cli({"checkpoint"}).code == 1);
    CHECK(run_cli({"sum", "--n", "5", "--format", "yaml"}).code == 1);
    CHECK(run_cli({"prod", "--n", "5", "--exact-cap", "1e6", "--limit", "1e4"}).code == 1);
    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({"count", "--a", "3", "--x", "10", "checkpoint", "--save", "/tmp/x"}).code == 1);
}

TEST_CASE("range errors exit 2") {
    CHECK(run_cli({"sum", "--n", "1e7", "--limit", "1e4"}).code == 2);
    CHECK(run_cli({"seq", "--from", "1", "--to", "1e7", "--limit", "1e4"}).code == 2);
    CHECK(run_cli({"prod", "--n", "1e6", "--exact", "--limit", "2e6"}).code == 2);  // exact cap
    CHECK(run_cli({"asympt", "--which", "lemma6", "--grid", "1e5,1e6", "--limit", "1e5"}).code == 2);
    CHECK(run_cli({"checkpoint", "--resume", "/tmp/npdist_missing_ckpt.json"}).code == 2);
}

TEST_CASE("sum routes and the match column") {
    auto closed = run_cli({"sum", "--n", "7", "--format", "csv", "--limit", "100"});
    CHECK(closed.code == 0);
    CHECK(closed.out == "n,s_closed\n7,12\n");
    auto brute = run_cli({"sum", "--n", "7", "--brute", "--format", "csv", "--limit", "100"});
    CHECK(brute.out == "n,s_brute\n7,12\n");
    auto both = run_cli({"sum", "--n", "1000", "--both", "--format", "csv", "--limit", "2000"});
    CHECK(both.code == 0);
    CHECK(both.out.find(",true") != std::string::npos);
}

TEST_CASE("prod exact and log") {
    auto exact = run_cli({"prod", "--n", "9", "--exact", "--format", "csv", "--limit", "100"});
    CHECK(exact.code == 0);
    CHECK(exact.out == "n,p\n9,48\n");
    auto logp = run_cli({"prod", "--n", "3", "--format", "csv", "--limit", "100"});
    CHECK(logp.code == 0);
    CHECK(logp.out == "n,log_p\n3,0\n");
}

TEST_CASE("count subcommand") {
    auto r = run_cli({"count", "--a", "4", "--x", "10", "--format", "csv", "--limit", "100"});
    CHECK(r.code == 0);
    CHECK(r.out == "a,x,count\n4,10,1\n");
}

TEST_CASE("csv and json carry identical numeric content") {
    const std::vector<std::string> base = {"asympt", "--which", "harmonic", "--grid",
                                           "100,1000,10000", "--limit", "1e5"};
    auto csv_args = base;
    csv_args.push_back("--format");
    csv_args.push_back("csv");
    auto json_args = base;
    json_args.push_back("--format");
    json_args.push_back("json");
    const auto csv = run_cli(csv_args);
    const auto js = run_cli(json_args);
    REQUIRE(csv.code == 0);
    REQUIRE(js.code == 0);

    const auto parsed = nlohmann::json::parse(js.out);
    REQUIRE(parsed.at("rows").size() == 3);

    std::istringstream lines(csv.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "x,raw,normalizer,ratio,residual,label");
    size_t i = 0;
    std::string line;
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string x, raw, norm, ratio, residual, label;
        std::getline(cells, x, ',');
        std::getline(cells, raw, ',');
        std::getline(cells, norm, ',');
        std::getline(cells, ratio, ',');
        std::getline(cells, residual, ',');
        std::getline(cells, label, ',');
        const auto& row = parsed.at("rows").at(i);
        REQUIRE(std::stoull(x) == row.at("x").get<uint64_t>());
        // 17 significant digits: parse back to the identical double.
        REQUIRE(std::stod(raw) == row.at("raw").get<double>());
        REQUIRE(std::stod(norm) == row.at("normalizer").get<double>());
        REQUIRE(std::stod(ratio) == row.at("ratio").get<double>());
        REQUIRE(std::stod(residual) == row.at("residual").get<double>());
        REQUIRE(label == row.at("label").get<std::string>());
        ++i;
    }
    CHECK(i == 3);
}

TEST_CASE("identical invocations are byte-identical") {
    const std::vector<std::string> args = {"asympt", "--which", "harmonic", "--grid",
                                           "1e3,1e4,1e5", "--format", "csv", "--limit", "2e5"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("gaps2 emits a fit footer in csv and a fit object in json") {
    const auto csv = run_cli({"asympt", "--which", "gaps2", "--grid", "1e3,1e4,1e5",
                              "--format", "csv", "--limit", "2e5"});
    CHECK(csv.code == 0);
    CHECK(csv.out.find("# fit slope=") != std::string::npos);
    const auto js = run_cli({"asympt", "--which", "gaps2", "--grid", "1e3,1e4,1e5",
                             "--format", "json", "--limit", "2e5"});
    const auto parsed = nlohmann::json::parse(js.out);
    CHECK(parsed.at("fit").at("points_used") == 3);
    CHECK(parsed.at("fit").at("r_squared").get<double>() >= 0.99);
}

TEST_CASE("checkpointed run resumes to byte-identical output") {
    const auto ckpt = temp_file("npdist_cli_resume.json");
    fs::remove(ckpt);
    const std::vector<std::string> common = {"asympt", "--which",  "harmonic",
                                             "--grid", "1e3,1e4,1e5", "--format",
                                             "csv",    "--limit",  "2e5"};

    auto uninterrupted = run_cli(common);
    REQUIRE(uninterrupted.code == 0);

    // Interrupt after two grid points, saving at each boundary.
    auto partial = common;
    partial.insert(partial.end(), {"--stop-after", "2", "checkpoint", "--save", ckpt.string()});
    const auto stopped = run_cli(partial);
    CHECK(stopped.code == 0);
    CHECK(stopped.out.empty());
    CHECK(stopped.err.find("stopped after 2") != std::string::npos);

    auto resume = common;
    resume.insert(resume.end(), {"checkpoint", "--resume", ckpt.string()});
    const auto resumed = run_cli(resume);
    CHECK(resumed.code == 0);
    CHECK(resumed.out == uninterrupted.out);

    // Resuming a mismatched configuration is rejected.
    auto wrong = common;
    wrong[4] = "1e3,1e4,1e6";
    wrong.insert(wrong.end(), {"checkpoint", "--resume", ckpt.string()});
    CHECK(run_cli(wrong).code == 2);
    fs::remove(ckpt);
}

TEST_CASE("stop-after at or past the grid length is a complete run") {
    const std::vector<std::string> base = {"asympt", "--which", "sum", "--grid",
                                           "1e3,1e4", "--format", "csv", "--limit", "1e5"};
    const auto full = run_cli(base);
    auto capped = base;
    capped.insert(capped.end(), {"--stop-after", "2"});
    auto beyond = base;
    beyond.insert(beyond.end(), {"--stop-after", "99"});
    CHECK(run_cli(capped).out == full.out);
    CHECK(run_cli(beyond).out == full.out);
}

TEST_CASE("resuming an already-complete checkpoint just re-emits the output") {
    const auto ckpt = temp_file("npdist_cli_complete.json");
    fs::remove(ckpt);
    const std::vector<std::string> base = {"asympt", "--which", "lemma6", "--grid",
                                           "1e2,1e3", "--format", "csv", "--limit", "1e5"};
    auto save = base;
    save.insert(save.end(), {"checkpoint", "--save", ckpt.string()});
    const auto first = run_cli(save);
    REQUIRE(first.code == 0);
    auto resume = base;
    resume.insert(resume.end(), {"checkpoint", "--resume", ckpt.string()});
    const auto again = run_cli(resume);
    CHECK(again.code == 0);
    CHECK(again.out == first.out);
    fs::remove(ckpt);
}

TEST_CASE("standalone checkpoint saves and summarizes") {
    const auto ckpt = temp_file("npdist_cli_standalone.json");
    fs::remove(ckpt);
    const auto saved = run_cli({"checkpoint", "--save", ckpt.string(), "--limit", "1e4"});
    CHECK(saved.code == 0);
    REQUIRE(fs::exists(ckpt));
    const auto shown = run_cli({"checkpoint", "--resume", ckpt.string(), "--format", "csv"});
    CHECK(shown.code == 0);
    CHECK(shown.out.find("k,last_prime,sum_d") == 0);
    fs::remove(ckpt);
}

TEST_CASE("output lands in --output file, stdout stays empty") {
    const auto path = temp_file("npdist_cli_output.csv");
    fs::remove(path);
    const auto r = run_cli({"seq", "--from", "1", "--to", "3", "--format", "csv",
                            "--limit", "100", "--output", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream content;
    content << f.rdbuf();
    CHECK(content.str() == "n,a_n\n1,1\n2,1\n3,2\n");
    fs::remove(path);
}

TEST_CASE("thread count never changes emitted values") {
    const std::vector<std::string> base = {"asympt", "--which", "logsum", "--grid",
                                           "1e3,1e4,1e5", "--format", "csv", "--limit", "2e5",
                                           "--threads"};
    auto one = base, four = base;
    one.push_back("1");
    four.push_back("4");
    const auto a = run_cli(one);
    const auto b = run_cli(four);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("help and version exit 0") {
    CHECK(run_cli({"--help"}).code == 0);
    const auto v = run_cli({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("npdist") != std::string::npos);
}
