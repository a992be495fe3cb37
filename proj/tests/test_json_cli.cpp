#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fockoplab/json_io.hpp"

using namespace fockoplab;
using io::json;

namespace {

const char* kOpExample = R"({
  "psi": {"kind": "exp_quadratic", "a0": [0,0], "a1": [0,0], "a2": [0.375,0]},
  "a": [0,0], "lambda": [0.5,0], "p": 2, "alpha": 1.0, "flavor": "fp"
})";

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

#ifdef FOCK_OPLAB_CLI_PATH
int run_cli(const std::string& args, const std::string& out_file) {
    const std::string cmd =
        std::string(FOCK_OPLAB_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string scratch_dir() {
    const std::string dir = "/tmp/fock_oplab_test";
    REQUIRE(std::system(("mkdir -p " + dir).c_str()) == 0);
    return dir;
}
#endif

}  // namespace

TEST_CASE("function JSON round trips") {
    const EntireFunction items[] = {
        EntireFunction{ExpQuadratic{{0.25, -1}, {2, 0.5}, {-0.375, 0.125}}},
        EntireFunction{PolyTimesExpQuad({{1, 2}, {0, -1}}, ExpQuadratic{{0, 0}, {1, 0}, {0, 0}})},
        EntireFunction{expm1_quadratic_over_z({0.25, 0.0}, 32)},
    };
    for (const auto& f : items) {
        const json j = io::to_json(f);
        const EntireFunction back = io::function_from_json(j);
        CHECK(io::to_json(back).dump() == j.dump());
    }
}

TEST_CASE("operator JSON round trips and rejects junk") {
    const json j = json::parse(kOpExample);
    const WeightedCompOp W = io::operator_from_json(j);
    CHECK(W.ctx.p == 2.0);
    CHECK(W.ctx.alpha == 1.0);
    const json again = io::to_json(W);
    CHECK(io::to_json(io::operator_from_json(again)).dump() == again.dump());

    CHECK_THROWS_AS(io::operator_from_json(json::parse(R"({"a": [0,0]})")), ConfigInvalid);
    CHECK_THROWS_AS(io::function_from_json(json::parse(R"({"kind": "mystery"})")), ConfigInvalid);
    CHECK_THROWS_AS(io::context_from_json(json::parse(R"({"p": "inf", "alpha": 1, "flavor": "fp"})")),
                    ConfigInvalid);
}

TEST_CASE("infinite norms serialize as a string flag") {
    NormResult r;
    r.value = std::numeric_limits<double>::infinity();
    r.method = NormMethod::ExactGaussian;
    const json j = io::to_json(r);
    CHECK(j.at("value") == "inf");
}

TEST_CASE("classification reports are deterministic") {
    const WeightedCompOp W = io::operator_from_json(json::parse(kOpExample));
    const std::string a = io::to_json(classify(W)).dump();
    const std::string b = io::to_json(classify(W)).dump();
    CHECK(a == b);
    const json j = json::parse(a);
    CHECK(j.at("verdict") == "BoundedNotCompact");
    CHECK(j.at("certificate").at("type") == "quadratic_form");
}

#ifdef FOCK_OPLAB_CLI_PATH

TEST_CASE("command line classify") {
    const std::string dir = scratch_dir();
    const std::string op_path = dir + "/op.json";
    {
        std::ofstream out(op_path);
        out << kOpExample;
    }
    const std::string out_file = dir + "/classify_out.txt";
    const int rc = run_cli("classify --op " + op_path, out_file);
    CHECK(rc == 0);
    const json report = json::parse(slurp(out_file));
    CHECK(report.at("results").at("verdict") == "BoundedNotCompact");
    CHECK(report.at("software_version").is_string());

    // the echoed config re-parses to an operator with identical results
    const WeightedCompOp W = io::operator_from_json(report.at("config").at("op"));
    CHECK(io::to_json(classify(W)).dump() == report.at("results").dump());
}

TEST_CASE("command line norm") {
    const std::string dir = scratch_dir();
    const std::string fn_path = dir + "/fn.json";
    {
        std::ofstream out(fn_path);
        out << R"({"kind": "exp_quadratic", "a0": [0,0], "a1": [0,0], "a2": [0,0]})";
    }
    const std::string out_file = dir + "/norm_out.txt";
    const int rc = run_cli("norm --function " + fn_path + " --p 1 --alpha 3.0 --tol 1e-10",
                           out_file);
    CHECK(rc == 0);
    const json report = json::parse(slurp(out_file));
    CHECK(std::abs(report.at("results").at("value").get<double>() - 1.0) < 1e-10);
}

TEST_CASE("command line iterate emits CSV rows") {
    const std::string dir = scratch_dir();
    const std::string op_path = dir + "/op.json";
    {
        std::ofstream out(op_path);
        out << kOpExample;
    }
    const std::string csv_path = dir + "/iterates.csv";
    const std::string out_file = dir + "/iterate_out.txt";
    const int rc = run_cli(
        "iterate --op " + op_path + " --n 8 --eval-grid 2.0 9 --csv " + csv_path, out_file);
    CHECK(rc == 0);
    const std::string csv = slurp(csv_path);
    CHECK(csv.find("n,re_c0n") == 0);
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 9);  // header + 8 rows
}

TEST_CASE("command line exit codes") {
    const std::string dir = scratch_dir();
    const std::string out_file = dir + "/err_out.txt";
    CHECK(run_cli("classify --op /nonexistent/op.json", out_file) == 1);

    // dynamics on an unbounded operator violates the suite hypotheses
    const std::string op_path = dir + "/bad_op.json";
    {
        std::ofstream out(op_path);
        out << R"({"psi": {"kind": "exp_quadratic", "a0": [0,0], "a1": [0,0], "a2": [0.6,0]},
                   "a": [0,0], "lambda": [0.5,0], "p": 2, "alpha": 1.0})";
    }
    CHECK(run_cli("dynamics --op " + op_path + " --suite supercyclicity --N 8", out_file) == 2);
}

TEST_CASE("command line dynamics supercyclicity report") {
    const std::string dir = scratch_dir();
    const std::string op_path = dir + "/op.json";
    {
        std::ofstream out(op_path);
        out << kOpExample;
    }
    const std::string out_file = dir + "/dyn_out.txt";
    const std::string csv_path = dir + "/dyn_seq.csv";
    const int rc = run_cli("dynamics --op " + op_path + " --suite supercyclicity --N 24 --csv " +
                               csv_path,
                           out_file);
    CHECK(rc == 0);
    const json report = json::parse(slurp(out_file));
    CHECK(report.at("results").at("verdict") == "NotSupercyclic");
    CHECK(report.at("results").at("case") == "RealLambdaAngleCriterion");
    CHECK(slurp(csv_path).find("name,n,log_value") == 0);
}

#endif  // FOCK_OPLAB_CLI_PATH
