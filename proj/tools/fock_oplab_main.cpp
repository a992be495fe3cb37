#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "fockoplab/json_io.hpp"
#include "fockoplab/verify.hpp"
#include "fockoplab/version.hpp"

namespace {

using fockoplab::io::json;
using Clock = std::chrono::steady_clock;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fockoplab::ConfigInvalid("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw fockoplab::ConfigInvalid(std::string("JSON parse error in ") + path + ": " + e.what());
    }
    return j;
}

struct ReportWriter {
    json config;
    std::vector<std::string> warnings;
    std::optional<std::string> out_path;
    Clock::time_point start = Clock::now();
    std::uint64_t seed = fockoplab::verify::kDefaultSeed;

    int finish(json results) {
        json report;
        report["config"] = config;
        report["results"] = std::move(results);
        report["software_version"] = fockoplab::kVersion;
        report["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start).count();
        report["warnings"] = warnings;
        report["seed"] = seed;
        const std::string text = report.dump(2);
        if (out_path) {
            std::ofstream out(*out_path);
            if (!out) throw fockoplab::ConfigInvalid("cannot write " + *out_path);
            out << text << "\n";
        }
        std::cout << text << "\n";
        return 0;
    }
};

void write_sequence_csv(const std::string& path,
                        const std::vector<fockoplab::SequenceReport>& seqs) {
    std::ofstream out(path);
    if (!out) throw fockoplab::ConfigInvalid("cannot write " + path);
    out << "name,n,log_value\n";
    out.precision(17);
    for (const auto& s : seqs)
        for (const auto& [n, v] : s.log_values) out << s.name << "," << n << "," << v << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fock-oplab: weighted composition operators on Fock spaces"};
    app.require_subcommand(1);

    std::string op_path, fn_path, out_path, csv_path, p_str = "2", flavor_str, suite = "supercyclicity";
    double alpha = 1.0, tol = 1e-8;
    int n_iter = 32, big_n = 64;
    std::vector<double> eval_grid{2.0, 16};
    std::uint64_t seed = fockoplab::verify::kDefaultSeed;

    auto* c_classify = app.add_subcommand("classify", "classify an operator");
    c_classify->add_option("--op", op_path, "operator spec JSON")->required();
    c_classify->add_option("--out", out_path, "report path");
    c_classify->add_option("--seed", seed, "rng seed recorded in the report");

    auto* c_norm = app.add_subcommand("norm", "Fock norm of a function");
    c_norm->add_option("--function", fn_path, "function JSON")->required();
    c_norm->add_option("--p", p_str, "exponent in [1, inf], e.g. 2 or inf");
    c_norm->add_option("--alpha", alpha, "weight parameter")->check(CLI::PositiveNumber);
    c_norm->add_option("--flavor", flavor_str, "fp | finfty | finfty0");
    c_norm->add_option("--tol", tol, "relative tolerance");
    c_norm->add_option("--out", out_path, "report path");
    c_norm->add_option("--seed", seed, "rng seed recorded in the report");

    auto* c_iter = app.add_subcommand("iterate", "closed-form iterate coefficients");
    c_iter->add_option("--op", op_path, "operator spec JSON")->required();
    c_iter->add_option("--n", n_iter, "largest iterate")->check(CLI::PositiveNumber);
    c_iter->add_option("--eval-grid", eval_grid, "radius and point count for the deviation grid")
        ->expected(2);
    c_iter->add_option("--csv", csv_path, "CSV output path");
    c_iter->add_option("--out", out_path, "report path");
    c_iter->add_option("--seed", seed, "rng seed recorded in the report");

    auto* c_dyn = app.add_subcommand("dynamics", "dynamical evidence suites");
    c_dyn->add_option("--op", op_path, "operator spec JSON")->required();
    c_dyn->add_option("--suite", suite, "supercyclicity | scaled-norms | angle-criterion | isometry");
    c_dyn->add_option("--N", big_n, "sequence length")->check(CLI::PositiveNumber);
    c_dyn->add_option("--out", out_path, "report path");
    c_dyn->add_option("--csv", csv_path, "CSV output path for sequences");
    c_dyn->add_option("--seed", seed, "rng seed recorded in the report");

    auto* c_verify = app.add_subcommand("verify", "run the full acceptance battery");
    c_verify->add_option("--out", out_path, "report path");
    c_verify->add_option("--seed", seed, "seed for the randomized suites");

    CLI11_PARSE(app, argc, argv);

    ReportWriter writer;
    writer.seed = seed;
    if (const char* threads = std::getenv("FOCK_OPLAB_THREADS"))
        writer.config["threads_cap"] = std::atoi(threads);
    if (!out_path.empty()) writer.out_path = out_path;

    try {
        if (c_classify->parsed()) {
            const json op_json = read_json_file(op_path);
            writer.config["command"] = "classify";
            writer.config["op"] = op_json;
            const auto W = fockoplab::io::operator_from_json(op_json);
            return writer.finish(fockoplab::io::to_json(fockoplab::classify(W)));
        }

        if (c_norm->parsed()) {
            const json fn_json = read_json_file(fn_path);
            writer.config["command"] = "norm";
            writer.config["function"] = fn_json;
            writer.config["p"] = p_str;
            writer.config["alpha"] = alpha;
            writer.config["tol"] = tol;
            json ctx_json{{"p", p_str == "inf" ? json("inf") : json(std::stod(p_str))},
                          {"alpha", alpha}};
            if (!flavor_str.empty()) ctx_json["flavor"] = flavor_str;
            const auto ctx = fockoplab::io::context_from_json(ctx_json);
            const auto f = fockoplab::io::function_from_json(fn_json);
            return writer.finish(fockoplab::io::to_json(fockoplab::fock_norm(f, ctx, tol)));
        }

        if (c_iter->parsed()) {
            const json op_json = read_json_file(op_path);
            writer.config["command"] = "iterate";
            writer.config["op"] = op_json;
            writer.config["n"] = n_iter;
            writer.config["eval_grid"] = eval_grid;
            const auto W = fockoplab::io::operator_from_json(op_json);
            const double radius = eval_grid[0];
            const int grid_n = std::max(2, static_cast<int>(eval_grid[1]));

            // limiting coefficients of the scaled iterates
            const auto psi = fockoplab::as_exp_quadratic(W.psi);
            if (!psi)
                throw fockoplab::WrongMultiplierKind(
                    "iterate requires an exp-quadratic multiplier");
            const std::complex<double> one{1.0, 0.0};
            const auto l = W.phi.lambda;
            const auto z0 = W.phi.fixed_point();
            const auto s1 = one / (one - l);
            const auto s2 = one / (one - l * l);
            const auto c1_lim = s1 * (psi->a1 + l * W.phi.a * 2.0 * psi->a2 * s2);
            const auto c0_lim =
                -psi->a1 * s1 * z0 - 2.0 * psi->a2 * s1 * z0 * z0 + psi->a2 * s2 * z0 * z0;
            const fockoplab::ExpQuadratic limit_fn{c0_lim, c1_lim, psi->a2 * s2};

            json rows = json::array();
            std::ofstream csv;
            if (!csv_path.empty()) {
                csv.open(csv_path);
                if (!csv) throw fockoplab::ConfigInvalid("cannot write " + csv_path);
                csv << "n,re_c0n,im_c0n,re_c1n,im_c1n,re_c2n,im_c2n,sup_deviation\n";
                csv.precision(17);
            }
            const fockoplab::EntireFunction one_fn{fockoplab::ExpQuadratic{}};
            for (int n = 1; n <= n_iter; ++n) {
                const auto c = fockoplab::iterate_coeffs(W, n);
                double dev = 0.0;
                for (int i = 0; i < grid_n; ++i) {
                    for (int j = 0; j < grid_n; ++j) {
                        const std::complex<double> z{-radius + 2.0 * radius * i / (grid_n - 1),
                                                     -radius + 2.0 * radius * j / (grid_n - 1)};
                        dev = std::max(dev, std::abs(fockoplab::scaled_iterate_eval(W, c, one_fn, z) -
                                                     limit_fn(z)));
                    }
                }
                json row = fockoplab::io::to_json(c);
                row["sup_deviation"] = dev;
                rows.push_back(row);
                if (csv.is_open())
                    csv << n << "," << c.c0n.real() << "," << c.c0n.imag() << "," << c.c1n.real()
                        << "," << c.c1n.imag() << "," << c.c2n.real() << "," << c.c2n.imag() << ","
                        << dev << "\n";
            }
            return writer.finish(json{{"rows", rows}});
        }

        if (c_dyn->parsed()) {
            const json op_json = read_json_file(op_path);
            writer.config["command"] = "dynamics";
            writer.config["op"] = op_json;
            writer.config["suite"] = suite;
            writer.config["N"] = big_n;
            const auto W = fockoplab::io::operator_from_json(op_json);
            const fockoplab::EntireFunction one_fn{fockoplab::ExpQuadratic{}};
            fockoplab::DynamicsConfig cfg;
            cfg.N = big_n;
            json results;
            std::vector<fockoplab::SequenceReport> seqs;
            if (suite == "supercyclicity") {
                const auto rep = fockoplab::supercyclicity_report(W, cfg);
                results = fockoplab::io::to_json(rep);
                seqs = rep.sequences;
                if (rep.limit) seqs.push_back(rep.limit->residuals);
            } else if (suite == "scaled-norms") {
                const auto rep = fockoplab::scaled_iterate_norms(W, one_fn, big_n);
                results = fockoplab::io::to_json(rep);
                seqs = {rep};
            } else if (suite == "angle-criterion") {
                const auto rep = fockoplab::angle_criterion_ratio(W, one_fn, big_n);
                results = fockoplab::io::to_json(rep);
                seqs = {rep};
            } else if (suite == "isometry") {
                results = fockoplab::io::to_json(
                    fockoplab::isometry_report(W, fockoplab::standard_test_functions(W.ctx.alpha)));
            } else {
                throw fockoplab::ConfigInvalid("unknown suite \"" + suite + "\"");
            }
            if (!csv_path.empty()) write_sequence_csv(csv_path, seqs);
            return writer.finish(std::move(results));
        }

        if (c_verify->parsed()) {
            writer.config["command"] = "verify";
            const auto results = fockoplab::verify::run_acceptance(seed);
            json arr = json::array();
            for (const auto& r : results) {
                std::cout << fockoplab::verify::format_line(r) << "\n";
                arr.push_back({{"id", r.id},
                               {"name", r.name},
                               {"pass", r.pass},
                               {"seconds", r.seconds},
                               {"budget_seconds", r.budget_seconds},
                               {"detail", r.detail}});
            }
            const bool ok = fockoplab::verify::all_passed(results);
            if (writer.out_path) writer.finish(json{{"criteria", arr}, {"all_passed", ok}});
            return ok ? 0 : 1;
        }
    } catch (const fockoplab::ConfigInvalid& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const fockoplab::FockError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
