// rpmem command line: projection-dimension bounds, CSV projection, membership
// decisions, doubling constants, and Monte Carlo experiments. stdout carries
// the JSON/CSV payload only; diagnostics go to stderr. Exit codes: 0 = ran,
// 2 = invalid input, 3 = the decider returned not_separated.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rpmem/io.hpp"

namespace {

using namespace rpmem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNotSeparated = 3;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("RPMEM_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw io::IoError("RPMEM_SEED is not a valid unsigned integer");
        }
    }
    return 0;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io::IoError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw io::IoError(path + ": " + e.what());
    }
}

ConstantConfig load_constants(const std::string& path) {
    if (path.empty()) return ConstantConfig{};
    return io::constant_config_from_json(load_json_file(path));
}

std::vector<Vector> load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io::IoError("cannot open '" + path + "'");
    return io::read_points_csv(in, path);
}

int run_bounds(const std::string& rule, std::size_t size, double delta,
               double tau, double d, std::size_t n, std::size_t B,
               double lambda, double big_d, double mu_a,
               const std::string& config_path) {
    const ConstantConfig cfg = load_constants(config_path);
    KSelection sel;
    if (rule == "finite") {
        sel = k_for_finite_threshold(size, delta, tau, d, cfg);
    } else if (rule == "integer") {
        sel = k_for_integer_fiber(n, B, delta, cfg);
    } else if (rule == "doubling") {
        sel = k_for_doubling(lambda, delta, tau, d, cfg);
    } else if (rule == "polytope") {
        sel = k_for_polytope(n, delta, d, big_d, cfg);
    } else if (rule == "cone") {
        sel = k_for_cone(n, delta, d, mu_a, cfg);
    } else {
        throw io::IoError("unknown bounds rule '" + rule + "'");
    }
    std::cout << io::to_json(sel).dump() << "\n";
    return kExitOk;
}

int run_project(const std::string& input, std::size_t k,
                const std::string& dist, bool scale,
                const std::optional<std::uint64_t>& seed_flag) {
    const auto rows = load_points(input);
    const std::size_t m = rows.front().size();
    Distribution d;
    if (dist == "gaussian") {
        d = Distribution::Gaussian;
    } else if (dist == "rademacher") {
        d = Distribution::Rademacher;
    } else {
        throw io::IoError("--dist must be gaussian or rademacher");
    }
    ProjectionSpec spec{m, k, d, scale ? Scaling::InvSqrtK : Scaling::None,
                        resolve_seed(seed_flag)};
    const ProjectionMatrix T = sample_projection(spec);
    std::vector<Vector> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(project(T, row));
    io::write_points_csv(std::cout, out);
    return kExitOk;
}

int run_decide(const std::string& cls, const std::string& input, double delta,
               double tau, const std::optional<std::uint64_t>& seed_flag,
               const std::string& config_path) {
    const ConstantConfig cfg = load_constants(config_path);
    const io::ParsedInstance parsed =
        io::instance_from_json(load_json_file(input), cls);
    const Decision dec = decide_pipeline(parsed.instance, parsed.query, delta,
                                         tau, cfg, resolve_seed(seed_flag));
    std::cout << io::to_json(dec).dump() << "\n";
    return dec.outcome == Outcome::NotSeparated ? kExitNotSeparated : kExitOk;
}

int run_doubling(const std::string& input, bool force_exact, bool force_greedy,
                 std::size_t cap) {
    const PointSet X(load_points(input));
    DoublingResult res;
    if (force_exact) {
        res = {doubling_constant_exact(X, cap), DoublingMode::Exact};
    } else if (force_greedy) {
        res = {doubling_constant_greedy(X), DoublingMode::Greedy};
    } else {
        res = doubling_constant(X, cap);
    }
    std::cout << json{{"lambda", res.lambda},
                      {"mode", res.mode == DoublingMode::Exact ? "exact"
                                                               : "greedy"}}
                     .dump()
              << "\n";
    return kExitOk;
}

int run_experiment(const std::string& kind, const std::string& config_path,
                   const std::optional<std::uint64_t>& seed_flag) {
    const json j = load_json_file(config_path);
    ExperimentConfig cfg = io::experiment_config_from_json(j);
    if (seed_flag) cfg.master_seed = *seed_flag;
    if (kind == "failure") {
        std::cout << io::to_json(estimate_failure(cfg)).dump() << "\n";
        return kExitOk;
    }
    if (kind == "ifp-float") {
        std::cout << io::to_json(reproduce_ifp_float(cfg)).dump() << "\n";
        return kExitOk;
    }
    if (kind == "calibrate") {
        if (!j.contains("k_grid"))
            throw io::IoError("calibrate config: missing 'k_grid'");
        std::vector<int> grid;
        for (const auto& e : j.at("k_grid")) grid.push_back(e.get<int>());
        std::cout << io::to_json(calibrate_C(cfg.cls, grid, cfg.trials, cfg))
                         .dump()
                  << "\n";
        return kExitOk;
    }
    throw io::IoError("unknown experiment kind '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-projection Euclidean membership toolkit"};
    app.require_subcommand(1);

    // bounds
    auto* bounds = app.add_subcommand(
        "bounds", "Projection-dimension selector for a proposition rule");
    std::string bounds_rule;
    bounds->add_option("rule", bounds_rule,
                       "finite|integer|doubling|polytope|cone")
        ->required();
    std::size_t opt_size = 1;
    double opt_delta = 0.1, opt_tau = 0.0, opt_d = 0.0, opt_big_d = 0.0,
           opt_mu_a = 0.0, opt_lambda = 1.0;
    std::size_t opt_n = 1, opt_B = 1;
    std::string bounds_config;
    bounds->add_option("--size", opt_size, "finite set size |X|");
    bounds->add_option("--delta", opt_delta, "failure probability budget");
    bounds->add_option("--tau", opt_tau, "separation threshold");
    bounds->add_option("--d", opt_d, "certified original separation");
    bounds->add_option("--n", opt_n, "vertices / generators / fiber columns");
    bounds->add_option("--B", opt_B, "bound on the entries of b");
    bounds->add_option("--lambda", opt_lambda, "doubling constant");
    bounds->add_option("--D", opt_big_d, "max vertex distance");
    bounds->add_option("--mu-a", opt_mu_a, "induced-norm constant mu_A");
    bounds->add_option("--config", bounds_config, "constants JSON file");

    // project
    auto* proj = app.add_subcommand("project", "Project a CSV of points");
    std::string proj_input, proj_dist = "gaussian";
    std::size_t proj_k = 1;
    bool proj_scale = false;
    std::optional<std::uint64_t> proj_seed;
    proj->add_option("--input", proj_input, "points CSV")->required();
    proj->add_option("--k", proj_k, "target dimension")->required();
    proj->add_option("--dist", proj_dist, "gaussian|rademacher");
    proj->add_flag("--scale", proj_scale, "scale by 1/sqrt(k)");
    proj->add_option("--seed", proj_seed, "sampling seed");

    // decide
    auto* dec = app.add_subcommand("decide", "Projected membership decision");
    std::string dec_class, dec_input, dec_config;
    double dec_delta = 0.1, dec_tau = 0.0;
    std::optional<std::uint64_t> dec_seed;
    dec->add_option("class", dec_class, "finite|polytope|cone|integer|doubling")
        ->required();
    dec->add_option("--input", dec_input, "instance JSON")->required();
    dec->add_option("--delta", dec_delta, "failure probability budget");
    dec->add_option("--tau", dec_tau, "separation threshold");
    dec->add_option("--seed", dec_seed, "projection seed");
    dec->add_option("--config", dec_config, "constants JSON file");

    // doubling
    auto* dbl = app.add_subcommand("doubling", "Doubling constant of a CSV set");
    std::string dbl_input;
    bool dbl_exact = false, dbl_greedy = false;
    std::size_t dbl_cap = 24;
    dbl->add_option("--input", dbl_input, "points CSV")->required();
    dbl->add_flag("--exact", dbl_exact, "force the exact set-cover mode");
    dbl->add_flag("--greedy", dbl_greedy, "force the greedy mode");
    dbl->add_option("--cap", dbl_cap, "exact-mode size cap");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Monte Carlo experiments");
    std::string exp_kind, exp_config;
    std::optional<std::uint64_t> exp_seed;
    exp->add_option("kind", exp_kind, "failure|ifp-float|calibrate")->required();
    exp->add_option("--config", exp_config, "experiment config JSON")->required();
    exp->add_option("--seed", exp_seed, "master seed override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (bounds->parsed())
            return run_bounds(bounds_rule, opt_size, opt_delta, opt_tau, opt_d,
                              opt_n, opt_B, opt_lambda, opt_big_d, opt_mu_a,
                              bounds_config);
        if (proj->parsed())
            return run_project(proj_input, proj_k, proj_dist, proj_scale,
                               proj_seed);
        if (dec->parsed())
            return run_decide(dec_class, dec_input, dec_delta, dec_tau, dec_seed,
                              dec_config);
        if (dbl->parsed())
            return run_doubling(dbl_input, dbl_exact, dbl_greedy, dbl_cap);
        if (exp->parsed()) return run_experiment(exp_kind, exp_config, exp_seed);
    } catch (const rpmem::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
