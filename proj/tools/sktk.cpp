// Batch front end: JSON config in, deterministic CSV + JSON summary out.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sktk/convergence.hpp"
#include "sktk/csv.hpp"
#include "sktk/errors.hpp"
#include "sktk/initial.hpp"
#include "sktk/master.hpp"
#include "sktk/meanfield.hpp"
#include "sktk/model.hpp"
#include "sktk/parallel.hpp"
#include "sktk/particles.hpp"
#include "sktk/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sktk;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Tolerances {
    double tol_db = kDetailedBalanceTol;
    double cfl = 0.4;
    double bbgky = 1e-12;
};

struct Config {
    json raw;
    std::vector<double> D;
    std::vector<double> pi;
    Matrix A;
    Matrix Dij;
    bool has_A = false;
    bool has_Dij = false;

    int M = 0;
    std::vector<int> M_list;

    double T = 1.0;
    int samples = 201;
    std::uint64_t seed = 0;
    int trials = 64;
    long long N = 0;
    std::vector<long long> N_list;
    std::vector<std::vector<long long>> p_list;
    int random_laws = 10;

    InitialData initial;
    int initial_kind = 0; // 0 none, 1 constant, 2 fourier, 3 values
    Matrix initial_values;

    Tolerances tol;
};

Matrix parse_matrix(const json& j, const std::string& field) {
    if (!j.is_array()) {
        throw std::invalid_argument("config field '" + field + "' must be a matrix");
    }
    Matrix out;
    for (const auto& row : j) {
        out.push_back(row.get<std::vector<double>>());
    }
    return out;
}

Config parse_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file " + path.string());
    }
    Config cfg;
    cfg.raw = json::parse(in); // parse_error reports line/byte on failure

    if (!cfg.raw.contains("model")) {
        throw std::invalid_argument("config field 'model' is required");
    }
    const json& model = cfg.raw.at("model");
    cfg.D = model.at("D").get<std::vector<double>>();
    cfg.pi = model.at("pi").get<std::vector<double>>();
    cfg.has_A = model.contains("A");
    cfg.has_Dij = model.contains("Dij");
    if (cfg.has_A == cfg.has_Dij) {
        throw std::invalid_argument("model block must contain exactly one of 'A' or 'Dij'");
    }
    if (cfg.has_A) {
        cfg.A = parse_matrix(model.at("A"), "model.A");
    } else {
        cfg.Dij = parse_matrix(model.at("Dij"), "model.Dij");
    }

    if (cfg.raw.contains("grid")) {
        const json& grid = cfg.raw.at("grid");
        if (grid.contains("M")) {
            cfg.M = grid.at("M").get<int>();
        }
        if (grid.contains("M_list")) {
            cfg.M_list = grid.at("M_list").get<std::vector<int>>();
        }
    }

    cfg.T = cfg.raw.value("T", 1.0);
    cfg.samples = cfg.raw.value("samples", 201);
    cfg.seed = cfg.raw.value("seed", 0ull);
    cfg.trials = cfg.raw.value("trials", 64);
    cfg.N = cfg.raw.value("N", 0ll);
    if (cfg.raw.contains("N_list")) {
        cfg.N_list = cfg.raw.at("N_list").get<std::vector<long long>>();
    }
    if (cfg.raw.contains("p_list")) {
        for (const auto& p : cfg.raw.at("p_list")) {
            cfg.p_list.push_back(p.get<std::vector<long long>>());
        }
    }
    cfg.random_laws = cfg.raw.value("random_laws", 10);

    if (cfg.raw.contains("tolerances")) {
        const json& tol = cfg.raw.at("tolerances");
        cfg.tol.tol_db = tol.value("tol_db", cfg.tol.tol_db);
        cfg.tol.cfl = tol.value("cfl", cfg.tol.cfl);
        cfg.tol.bbgky = tol.value("bbgky", cfg.tol.bbgky);
    }

    if (cfg.raw.contains("initial")) {
        const json& init = cfg.raw.at("initial");
        const std::string type = init.at("type").get<std::string>();
        const int n = static_cast<int>(cfg.D.size());
        if (type == "constant") {
            auto values = init.at("values").get<std::vector<double>>();
            if (static_cast<int>(values.size()) != n) {
                throw std::invalid_argument("initial.values must list one value per species");
            }
            cfg.initial = constant_initial(std::move(values));
            cfg.initial_kind = 1;
        } else if (type == "fourier") {
            auto base = init.at("base").get<std::vector<double>>();
            std::vector<std::vector<double>> amplitude;
            std::vector<std::vector<int>> mode;
            std::vector<std::vector<double>> phase;
            for (const auto& row : init.at("amplitude")) {
                amplitude.push_back(row.get<std::vector<double>>());
            }
            for (const auto& row : init.at("mode")) {
                mode.push_back(row.get<std::vector<int>>());
            }
            if (init.contains("phase")) {
                for (const auto& row : init.at("phase")) {
                    phase.push_back(row.get<std::vector<double>>());
                }
            } else {
                for (const auto& amps : amplitude) {
                    phase.emplace_back(amps.size(), 0.0);
                }
            }
            cfg.initial = fourier_initial(std::move(base), std::move(amplitude), std::move(mode),
                                          std::move(phase));
            cfg.initial_kind = 2;
        } else if (type == "values") {
            cfg.initial_values = parse_matrix(init.at("values"), "initial.values");
            cfg.initial_kind = 3;
        } else {
            throw std::invalid_argument("initial.type must be constant, fourier or values");
        }
    }
    return cfg;
}

ModelParams macro_params(const Config& cfg) {
    if (cfg.has_A) {
        return ModelParams(cfg.D, cfg.A, cfg.pi);
    }
    return micro_to_macro(MicroParams(cfg.D, cfg.Dij, cfg.pi));
}

MicroParams micro_params(const Config& cfg) {
    if (cfg.has_Dij) {
        return MicroParams(cfg.D, cfg.Dij, cfg.pi);
    }
    return macro_to_micro(ModelParams(cfg.D, cfg.A, cfg.pi), cfg.tol.tol_db);
}

Matrix initial_nodes(const Config& cfg, const Grid& grid) {
    const int n = static_cast<int>(cfg.D.size());
    if (cfg.initial_kind == 0) {
        throw std::invalid_argument("this study requires an 'initial' block");
    }
    if (cfg.initial_kind == 3) {
        if (static_cast<int>(cfg.initial_values.size()) != n) {
            throw std::invalid_argument("initial.values must hold one row per species");
        }
        for (const auto& row : cfg.initial_values) {
            if (static_cast<int>(row.size()) != grid.M) {
                throw std::invalid_argument("initial.values rows must match grid.M");
            }
            for (double v : row) {
                if (!(v > 0.0)) {
                    throw std::invalid_argument("initial data must be strictly positive");
                }
            }
        }
        return cfg.initial_values;
    }
    if (!strictly_positive_on_grid(cfg.initial, n, grid)) {
        throw std::invalid_argument("initial data must be strictly positive on [0,1)");
    }
    return sample_initial(cfg.initial, n, grid);
}

std::vector<double> uniform_samples(double T, int samples) {
    if (samples < 2) {
        throw std::invalid_argument("samples must be at least 2");
    }
    std::vector<double> times(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        times[static_cast<std::size_t>(s)] =
            T * static_cast<double>(s) / static_cast<double>(samples - 1);
    }
    return times;
}

void write_summary(const fs::path& out_dir, const Config& cfg, const std::string& study,
                   const json& metrics) {
    json summary;
    summary["study"] = study;
    summary["version"] = kVersion;
    summary["config"] = cfg.raw;
    summary["metrics"] = metrics;
    std::ofstream out(out_dir / "summary.json");
    out << summary.dump(2) << "\n";
}

int run_validate(const Config& cfg, const fs::path& out_dir) {
    const ModelParams params = macro_params(cfg);
    const ValidationReport report = validate(params, cfg.tol.tol_db);
    json metrics;
    metrics["valid"] = report.valid();
    metrics["violations"] = report.violations;
    write_summary(out_dir, cfg, "validate", metrics);
    for (const auto& v : report.violations) {
        std::cerr << "violation: " << v << "\n";
    }
    return report.valid() ? kExitOk : kExitValidation;
}

int run_solve(const Config& cfg, const fs::path& out_dir, bool entropy_report) {
    const ModelParams params = macro_params(cfg);
    const ValidationReport report = validate(params, cfg.tol.tol_db);
    if (!report.valid()) {
        for (const auto& v : report.violations) {
            std::cerr << "violation: " << v << "\n";
        }
        json metrics;
        metrics["valid"] = false;
        metrics["violations"] = report.violations;
        write_summary(out_dir, cfg, entropy_report ? "entropy-report" : "solve", metrics);
        return kExitValidation;
    }
    if (cfg.M < 2) {
        throw std::invalid_argument("grid.M is required for solve");
    }
    const Grid grid(cfg.M);
    const Matrix nodes = initial_nodes(cfg, grid);
    const std::vector<double> times = uniform_samples(cfg.T, cfg.samples);
    StepPolicy policy;
    policy.cfl = cfg.tol.cfl;
    const Trajectory traj = solve(DiscreteState(grid, nodes), params, cfg.T, policy, times);

    const int n = params.n;
    {
        std::vector<std::string> header = {"t", "k", "x"};
        for (int i = 0; i < n; ++i) {
            header.push_back("u_" + std::to_string(i + 1));
        }
        CsvWriter csv((out_dir / "snapshots.csv").string(), header);
        for (std::size_t s = 0; s < traj.size(); ++s) {
            for (int k = 0; k < grid.M; ++k) {
                std::vector<double> row = {traj.times[s], static_cast<double>(k), grid.site(k)};
                for (int i = 0; i < n; ++i) {
                    row.push_back(traj.states[s][static_cast<std::size_t>(i)]
                                              [static_cast<std::size_t>(k)]);
                }
                csv.write_numbers(row);
            }
        }
    }

    json metrics;
    metrics["samples"] = traj.size();
    double h_first = 0.0;
    double h_last = 0.0;
    if (entropy_report) {
        std::vector<std::string> header = {"t", "H", "dissipation", "sqrt_lower_bound"};
        for (int i = 0; i < n; ++i) {
            header.push_back("mass_" + std::to_string(i + 1));
        }
        CsvWriter csv((out_dir / "entropy.csv").string(), header);
        for (std::size_t s = 0; s < traj.size(); ++s) {
            const EntropyDiagnostics diag = dissipation(traj.at(s), params);
            std::vector<double> row = {traj.times[s], diag.entropy, diag.dissipation,
                                       diag.sqrt_lower_bound};
            for (int i = 0; i < n; ++i) {
                row.push_back(diag.mass[static_cast<std::size_t>(i)]);
            }
            csv.write_numbers(row);
            if (s == 0) {
                h_first = diag.entropy;
            }
            h_last = diag.entropy;
        }
        metrics["entropy_initial"] = h_first;
        metrics["entropy_final"] = h_last;
    }
    write_summary(out_dir, cfg, entropy_report ? "entropy-report" : "solve", metrics);
    return kExitOk;
}

int run_simulate(const Config& cfg, const fs::path& out_dir) {
    const MicroParams micro = micro_params(cfg);
    if (cfg.M < 2) {
        throw std::invalid_argument("grid.M is required for simulate");
    }
    if (cfg.N < 1) {
        throw std::invalid_argument("N is required for simulate");
    }
    const Grid grid(cfg.M);
    const int n = micro.n;
    const std::vector<double> pi_hat = normalized_weights(micro.pi);

    // site laws from the initial block, normalised per species
    Matrix laws = initial_nodes(cfg, grid);
    for (auto& row : laws) {
        double total = 0.0;
        for (double v : row) {
            total += v;
        }
        for (double& v : row) {
            v /= total;
        }
    }

    const std::vector<double> times = uniform_samples(cfg.T, cfg.samples);
    const int trials = std::max(1, cfg.trials);

    std::vector<ParticleTrajectory> runs(static_cast<std::size_t>(trials));
    parallel_for_index(static_cast<std::size_t>(trials), [&](std::size_t trial) {
        CounterRng rng(substream_seed(cfg.seed, 2 * trial));
        const ParticleConfig config = sample_config(grid, laws, pi_hat, cfg.N, rng);
        runs[trial] =
            ssa_run(config, micro, cfg.T, substream_seed(cfg.seed, 2 * trial + 1), times);
    });

    std::vector<std::string> header = {"t", "k", "x"};
    for (int i = 0; i < n; ++i) {
        header.push_back(trials == 1 ? "c_" + std::to_string(i + 1)
                                     : "f_" + std::to_string(i + 1));
    }
    CsvWriter csv((out_dir / "trajectory.csv").string(), header);
    for (std::size_t s = 0; s < times.size(); ++s) {
        for (int k = 0; k < grid.M; ++k) {
            std::vector<double> row = {times[s], static_cast<double>(k), grid.site(k)};
            for (int i = 0; i < n; ++i) {
                if (trials == 1) {
                    row.push_back(static_cast<double>(
                        runs[0].counts[s][static_cast<std::size_t>(i)]
                                      [static_cast<std::size_t>(k)]));
                } else {
                    double mean = 0.0;
                    const double particles = static_cast<double>(
                        species_particles(pi_hat[static_cast<std::size_t>(i)], cfg.N));
                    for (int trial = 0; trial < trials; ++trial) {
                        const auto& snapshot =
                            runs[static_cast<std::size_t>(trial)].counts[s];
                        mean += static_cast<double>(snapshot[static_cast<std::size_t>(i)]
                                                            [static_cast<std::size_t>(k)]) /
                                particles;
                    }
                    row.push_back(mean / trials);
                }
            }
            csv.write_numbers(row);
        }
    }

    json metrics;
    metrics["trials"] = trials;
    metrics["N"] = cfg.N;
    write_summary(out_dir, cfg, "simulate", metrics);
    return kExitOk;
}

int run_bbgky(const Config& cfg, const fs::path& out_dir) {
    const MicroParams micro = micro_params(cfg);
    if (cfg.M < 2) {
        throw std::invalid_argument("grid.M is required for bbgky-check");
    }
    if (cfg.N < 1) {
        throw std::invalid_argument("N is required for bbgky-check");
    }
    const Grid grid(cfg.M);
    const int n = micro.n;
    const std::vector<double> pi_hat = normalized_weights(micro.pi);
    std::vector<long long> counts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        counts[static_cast<std::size_t>(i)] =
            species_particles(pi_hat[static_cast<std::size_t>(i)], cfg.N);
        if (counts[static_cast<std::size_t>(i)] < 1) {
            throw std::invalid_argument("bbgky-check: species with zero particles");
        }
    }
    const LabeledStateSpace space(grid, counts, cfg.N);
    const MicroParams micro_hat(micro.D, micro.Dij, pi_hat);

    std::vector<std::vector<long long>> p_list = cfg.p_list;
    if (p_list.empty()) {
        for (int i = 0; i < n; ++i) {
            std::vector<long long> e(static_cast<std::size_t>(n), 0);
            e[static_cast<std::size_t>(i)] = 1;
            p_list.push_back(std::move(e));
        }
    }

    std::vector<std::string> header;
    for (int i = 0; i < n; ++i) {
        header.push_back("p_" + std::to_string(i + 1));
    }
    header.push_back("law");
    header.push_back("residual");
    CsvWriter csv((out_dir / "bbgky.csv").string(), header);

    double worst = 0.0;
    for (const auto& p : p_list) {
        for (int law = 0; law < cfg.random_laws; ++law) {
            const auto mu = random_symmetric_distribution(
                space, substream_seed(cfg.seed, static_cast<std::uint64_t>(law)));
            const double residual = bbgky_check(space, micro_hat, mu, p);
            worst = std::max(worst, residual);
            std::vector<double> row;
            for (long long v : p) {
                row.push_back(static_cast<double>(v));
            }
            row.push_back(static_cast<double>(law));
            row.push_back(residual);
            csv.write_numbers(row);
        }
    }

    json metrics;
    metrics["worst_residual"] = worst;
    metrics["tolerance"] = cfg.tol.bbgky;
    metrics["states"] = space.num_states;
    write_summary(out_dir, cfg, "bbgky-check", metrics);
    std::cout << "bbgky worst residual " << format_number(worst) << "\n";
    return worst <= cfg.tol.bbgky ? kExitOk : kExitValidation;
}

int run_meanfield_study(const Config& cfg, const fs::path& out_dir) {
    const MicroParams micro = micro_params(cfg);
    if (cfg.M < 2) {
        throw std::invalid_argument("grid.M is required for meanfield-study");
    }
    if (cfg.N_list.empty()) {
        throw std::invalid_argument("N_list is required for meanfield-study");
    }
    const Grid grid(cfg.M);
    Matrix laws = initial_nodes(cfg, grid);
    for (auto& row : laws) {
        double total = 0.0;
        for (double v : row) {
            total += v;
        }
        for (double& v : row) {
            v /= total;
        }
    }
    const std::vector<double> times = uniform_samples(cfg.T, cfg.samples);
    const ChaosReport report =
        chaos_study(micro, grid, laws, cfg.N_list, cfg.trials, cfg.T, cfg.seed, times);

    const int n = micro.n;
    {
        std::vector<std::string> header = {"N"};
        for (int i = 0; i < n; ++i) {
            header.push_back("dist_" + std::to_string(i + 1));
        }
        header.push_back("dist_max");
        CsvWriter csv((out_dir / "chaos.csv").string(), header);
        for (std::size_t ni = 0; ni < report.N_values.size(); ++ni) {
            std::vector<double> row = {static_cast<double>(report.N_values[ni])};
            for (int i = 0; i < n; ++i) {
                row.push_back(report.marginal_distance[ni][static_cast<std::size_t>(i)]);
            }
            row.push_back(report.distance_max[ni]);
            csv.write_numbers(row);
        }
    }
    if (!report.oracle_N_values.empty()) {
        CsvWriter csv((out_dir / "covariance.csv").string(), {"N", "defect"});
        for (std::size_t ni = 0; ni < report.oracle_N_values.size(); ++ni) {
            csv.write_numbers({static_cast<double>(report.oracle_N_values[ni]),
                               report.covariance_defect[ni]});
        }
    }

    json metrics;
    metrics["distance_slope"] = report.distance_slope;
    if (!report.oracle_N_values.empty()) {
        metrics["covariance_slope"] = report.covariance_slope;
    }
    metrics["trials"] = cfg.trials;
    write_summary(out_dir, cfg, "meanfield-study", metrics);
    return kExitOk;
}

int run_grid_study(const Config& cfg, const fs::path& out_dir) {
    const ModelParams params = macro_params(cfg);
    const ValidationReport report = validate(params, cfg.tol.tol_db);
    if (!report.valid()) {
        for (const auto& v : report.violations) {
            std::cerr << "violation: " << v << "\n";
        }
        json metrics;
        metrics["valid"] = false;
        metrics["violations"] = report.violations;
        write_summary(out_dir, cfg, "grid-study", metrics);
        return kExitValidation;
    }
    if (cfg.M_list.size() < 2) {
        throw std::invalid_argument("grid.M_list with at least two entries is required");
    }
    if (cfg.initial_kind == 3 || cfg.initial_kind == 0) {
        throw std::invalid_argument("grid-study needs closed-form initial data");
    }
    const int n = params.n;
    if (!strictly_positive_on_grid(cfg.initial, n, Grid(cfg.M_list.back()))) {
        throw std::invalid_argument("initial data must be strictly positive on [0,1)");
    }

    const std::vector<TestFunction> phis = {
        bump_test_function(0.9 * cfg.T, 1, 0.3, "phi1"),
        bump_test_function(0.8 * cfg.T, 2, 1.1, "phi2"),
        bump_test_function(0.9 * cfg.T, 3, 2.0, "phi3"),
    };
    StepPolicy policy;
    policy.cfl = cfg.tol.cfl;
    const RefinementStudy study =
        refinement_study(params, cfg.initial, cfg.M_list, cfg.T, phis, cfg.samples, policy);

    {
        std::vector<std::string> header = {
            "M",  "h",   "entropy_sup", "entropy_monotone", "gradient_integral",
            "l4_integral", "dual_derivative_bound", "product_gap"};
        for (std::size_t p = 0; p < phis.size(); ++p) {
            header.push_back("weak_residual_" + phis[p].name);
        }
        header.push_back("l2_diff_from_prev");
        CsvWriter csv((out_dir / "grid_study.csv").string(), header);
        for (std::size_t m = 0; m < study.M_list.size(); ++m) {
            std::vector<double> row = {static_cast<double>(study.M_list[m]),
                                       1.0 / study.M_list[m],
                                       study.entropy_sup[m],
                                       static_cast<double>(study.entropy_monotone[m]),
                                       study.gradient_integral[m],
                                       study.l4_integral[m],
                                       study.dual_derivative_bound[m],
                                       study.product_gap[m]};
            for (std::size_t p = 0; p < phis.size(); ++p) {
                row.push_back(study.weak_residual_per_phi[m][p]);
            }
            row.push_back(m == 0 ? 0.0 : study.successive_l2_diff[m - 1]);
            csv.write_numbers(row);
        }
    }

    json metrics;
    metrics["product_gap_slope"] = study.product_gap_slope;
    metrics["weak_residual_slopes"] = study.weak_residual_slopes;
    metrics["laplacian_consistency"] = study.laplacian_consistency;
    json diffs = json::array();
    for (double d : study.successive_l2_diff) {
        diffs.push_back(d);
    }
    metrics["successive_l2_diffs"] = diffs;
    write_summary(out_dir, cfg, "grid-study", metrics);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sktk: detailed-balanced cross-diffusion toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";

    const std::vector<std::string> studies = {"validate",    "solve",           "simulate",
                                              "bbgky-check", "meanfield-study", "grid-study",
                                              "entropy-report"};
    for (const auto& name : studies) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (default: out)");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string study = app.get_subcommands().front()->get_name();

    try {
        const Config cfg = parse_config(config_path);
        if (cfg.raw.contains("study") &&
            cfg.raw.at("study").get<std::string>() != study) {
            throw std::invalid_argument("config 'study' field does not match the subcommand");
        }
        fs::create_directories(out_dir);

        if (study == "validate") {
            return run_validate(cfg, out_dir);
        }
        if (study == "solve") {
            return run_solve(cfg, out_dir, false);
        }
        if (study == "entropy-report") {
            return run_solve(cfg, out_dir, true);
        }
        if (study == "simulate") {
            return run_simulate(cfg, out_dir);
        }
        if (study == "bbgky-check") {
            return run_bbgky(cfg, out_dir);
        }
        if (study == "meanfield-study") {
            return run_meanfield_study(cfg, out_dir);
        }
        if (study == "grid-study") {
            return run_grid_study(cfg, out_dir);
        }
        std::cerr << "unknown study " << study << "\n";
        return kExitValidation;
    } catch (const json::parse_error& err) {
        std::cerr << "config parse error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const StepFailure& err) {
        std::cerr << "numerical failure (" << study << "): " << err.what() << "\n";
        return kExitNumerical;
    } catch (const NonPositiveState& err) {
        std::cerr << "numerical failure (" << study << "): " << err.what() << "\n";
        return kExitNumerical;
    } catch (const NonPositiveMeasure& err) {
        std::cerr << "numerical failure (" << study << "): " << err.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& err) {
        std::cerr << "error (" << study << "): " << err.what() << "\n";
        return kExitValidation;
    }
}
