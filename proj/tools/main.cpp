// Command-line front end for the push/pull epidemic library: graph
// inspection, threshold analysis, simulation, stationary-rate solving, and
// monitoring experiments. Outputs are CSV/JSON files with fixed formatting so
// reruns with the same config produce identical bytes.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <pushpull/pushpull.hpp>

namespace fs = std::filesystem;

namespace {

/// Failures of the output side (unwritable directory, failed stream).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CliOptions {
    std::string edges_path;
    std::string generate_spec;
    bool directed = false;
    bool per_node = false;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    std::int64_t steps = 200;
    std::int64_t runs = 100;
    std::uint64_t seed = 1;
    std::int64_t t0 = 10;
    std::int64_t t1 = -1;  // -1: resolved to steps - 10 when that is >= t0
    std::vector<std::int64_t> panel_sizes = {2, 4, 8, 16, 32, 64, 128, 256};
    std::int64_t panel_size = 32;
    double tol = 1e-10;
    double init_fraction = 0.2;
    double grid_step = 1e-3;
    double linear_threshold = 0.1;
    std::int64_t mc_runs = 0;
    std::string sweep;
    double sweep_from = 0.1;
    double sweep_to = 0.9;
    std::int64_t sweep_points = 9;
    int threads = 1;
    std::string out = ".";
    std::string format = "csv";
};

pushpull::EpidemicParams params_of(const CliOptions& opt) {
    pushpull::EpidemicParams p{opt.alpha, opt.beta, opt.gamma};
    p.validate();
    return p;
}

std::int64_t resolve_t1(const CliOptions& opt) {
    if (opt.t1 >= 0)
        return opt.t1;
    return opt.steps - 10 >= opt.t0 ? opt.steps - 10 : opt.steps;
}

fs::path ensure_out_dir(const CliOptions& opt) {
    fs::path dir(opt.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory " + dir.string());
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open " + path.string() + " for writing");
    os << text;
    os.flush();
    if (!os)
        throw IoError("failed writing " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    write_file(path, j.dump(2) + "\n");
}

/// JSON mirror of a CSV table: column names plus rows of strings, preserving
/// the CSV's number formatting byte for byte.
nlohmann::json csv_table_json(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = s.find(',', start);
            cells.push_back(s.substr(start, comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        return cells;
    };
    nlohmann::json table;
    std::getline(is, line);
    table["columns"] = split(line);
    table["rows"] = nlohmann::json::array();
    while (std::getline(is, line))
        if (!line.empty())
            table["rows"].push_back(split(line));
    return table;
}

/// Tabular output honoring --format: <base>.csv, or <base>.json carrying the
/// same cells.
void emit_table(const CliOptions& opt, const fs::path& dir, const std::string& base,
                const std::string& csv) {
    if (opt.format == "json")
        write_json(dir / (base + ".json"), csv_table_json(csv));
    else
        write_file(dir / (base + ".csv"), csv);
}

struct ResolvedGraph {
    pushpull::Graph graph;
    std::optional<pushpull::LoadReport> load;
};

/// MODEL:N:PARAM, e.g. regular:2000:6 or er:2000:0.003.
ResolvedGraph generate_from_spec(const std::string& spec, std::uint64_t seed) {
    const auto c1 = spec.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw std::invalid_argument("--generate expects MODEL:N:PARAM, got '" + spec + "'");
    const std::string model_str = spec.substr(0, c1);
    const std::string n_str = spec.substr(c1 + 1, c2 - c1 - 1);
    const std::string param_str = spec.substr(c2 + 1);
    pushpull::GraphModel model = pushpull::parse_graph_model(model_str);
    std::int64_t n = 0;
    double param = 0.0;
    try {
        std::size_t used = 0;
        n = std::stoll(n_str, &used);
        if (used != n_str.size())
            throw std::invalid_argument(n_str);
        param = std::stod(param_str, &used);
        if (used != param_str.size())
            throw std::invalid_argument(param_str);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse generator spec '" + spec + "'");
    }
    if (n < 1 || n > std::numeric_limits<pushpull::NodeId>::max())
        throw std::invalid_argument("generator node count out of range");
    return {pushpull::generate(model, static_cast<pushpull::NodeId>(n), param, seed),
            std::nullopt};
}

ResolvedGraph resolve_graph(const CliOptions& opt) {
    if (!opt.edges_path.empty() && !opt.generate_spec.empty())
        throw std::invalid_argument("--edges and --generate are mutually exclusive");
    if (opt.edges_path.empty() && opt.generate_spec.empty())
        throw std::invalid_argument("one of --edges or --generate is required");
    if (!opt.generate_spec.empty())
        return generate_from_spec(opt.generate_spec, opt.seed);
    std::ifstream is(opt.edges_path);
    if (!is)
        throw std::invalid_argument("cannot open edge list " + opt.edges_path);
    auto loaded = pushpull::load_edge_list(is, opt.directed);
    return {std::move(loaded.graph), loaded.report};
}

std::string csv_of_trajectory(const pushpull::Trajectory& traj, bool per_node) {
    std::ostringstream os;
    pushpull::write_trajectory_csv(os, traj, per_node);
    return os.str();
}

void cmd_graph_info(const CliOptions& opt) {
    auto resolved = resolve_graph(opt);
    const pushpull::Graph& g = resolved.graph;
    auto stats = pushpull::degree_statistics(g);
    auto lambda1 = pushpull::spectral_radius(g, opt.tol);

    nlohmann::json info{{"nodes", g.num_nodes()},
                        {"edges", g.num_edges()},
                        {"arcs", g.num_arcs()},
                        {"directed", g.is_directed()},
                        {"weak_components", g.weak_component_count()},
                        {"degrees", pushpull::degree_summary_json(stats)},
                        {"lambda1", pushpull::to_json(lambda1)}};
    if (resolved.load)
        info["load"] = pushpull::to_json(*resolved.load);

    write_json(ensure_out_dir(opt) / "graph_info.json", info);
    std::cout << info.dump(2) << "\n";
}

void cmd_analyze(const CliOptions& opt) {
    auto resolved = resolve_graph(opt);
    const pushpull::Graph& g = resolved.graph;
    auto p = params_of(opt);

    pushpull::GeneralSettings settings;
    settings.equilibrium_tol = opt.tol;
    settings.spectral_tol = opt.tol;
    auto report = pushpull::analyze_stability(g, p, settings);
    auto bounds = pushpull::infection_bounds(g, p);

    auto dir = ensure_out_dir(opt);
    auto j = pushpull::to_json(report);
    j["bounds_mean_minus"] = pushpull::json_number(bounds.mean_minus());
    j["bounds_mean_plus"] = pushpull::json_number(bounds.mean_plus());
    write_json(dir / "stability_report.json", j);

    std::ostringstream csv;
    pushpull::write_bounds_csv(csv, g, bounds);
    emit_table(opt, dir, "bounds", csv.str());

    if (report.dieout_applicable)
        std::cout << "dieout: " << pushpull::to_string(report.dieout.verdict) << "\n";
    std::cout << "succinct: " << pushpull::to_string(report.succinct.verdict) << "\n"
              << "general: " << pushpull::to_string(report.general.verdict) << "\n";
}

void cmd_simulate(const CliOptions& opt) {
    auto resolved = resolve_graph(opt);
    const pushpull::Graph& g = resolved.graph;
    auto p = params_of(opt);
    if (opt.steps < 1)
        throw std::invalid_argument("--steps must be at least 1");
    if (opt.init_fraction < 0.0 || opt.init_fraction > 1.0)
        throw std::invalid_argument("--init-fraction must lie in [0, 1]");

    auto i0 = pushpull::InfectionProfile::seeded_fraction(g.num_nodes(), opt.init_fraction,
                                                          opt.seed);
    auto traj = pushpull::integrate(g, p, i0, opt.steps,
                                    pushpull::IntegrateOptions{opt.per_node});

    pushpull::MonteCarloOptions mc_opt;
    mc_opt.threads = opt.threads;
    mc_opt.record_node_series = false;
    auto mc = pushpull::monte_carlo(g, p, opt.init_fraction, opt.steps, opt.runs, opt.seed,
                                    mc_opt);

    auto bounds = pushpull::infection_bounds(g, p);

    auto dir = ensure_out_dir(opt);
    std::ostringstream sim;
    pushpull::write_simulation_csv(sim, traj.ibar, mc, bounds.mean_minus(),
                                   bounds.mean_plus());
    emit_table(opt, dir, "simulation", sim.str());
    emit_table(opt, dir, "trajectory", csv_of_trajectory(traj, opt.per_node));
    std::ostringstream mcs;
    pushpull::write_mc_csv(mcs, mc);
    emit_table(opt, dir, "mc", mcs.str());

    std::cout << "final i_bar model " << pushpull::format_float(traj.ibar.back()) << " mc "
              << pushpull::format_float(mc.ibar_mean.back()) << "\n";
}

void cmd_meanfield(const CliOptions& opt) {
    auto resolved = resolve_graph(opt);
    const pushpull::Graph& g = resolved.graph;
    auto p = params_of(opt);
    auto stats = pushpull::degree_statistics(g);
    auto dir = ensure_out_dir(opt);

    bool warned = false;
    auto warn_if_large = [&](double gamma_value) {
        const double size = pushpull::linearization_size(gamma_value, stats.avg_degree);
        if (size > opt.linear_threshold && !warned) {
            warned = true;
            std::cerr << "warning: gamma*<k> = " << pushpull::format_float(size)
                      << " exceeds " << pushpull::format_float(opt.linear_threshold)
                      << "; the whole-graph approximation degrades\n";
        }
    };
    warn_if_large(p.gamma);

    auto profile = pushpull::degree_rate_profile(g, p, opt.grid_step);
    std::optional<std::map<std::int64_t, double>> mc_means;
    if (opt.mc_runs > 0) {
        pushpull::MonteCarloOptions mc_opt;
        mc_opt.threads = opt.threads;
        auto mc = pushpull::monte_carlo(g, p, opt.init_fraction, opt.steps, opt.mc_runs,
                                        opt.seed, mc_opt);
        mc_means = pushpull::degree_class_window_means(g, mc.node_freq, opt.t0,
                                                       resolve_t1(opt));
    }
    std::ostringstream prof;
    pushpull::write_degree_profile_csv(prof, profile, stats.histogram,
                                       mc_means ? &*mc_means : nullptr);
    emit_table(opt, dir, "profile", prof.str());

    auto global = pushpull::solve_global_rate(stats.avg_degree, p, opt.grid_step);
    nlohmann::json summary{
        {"avg_degree", pushpull::json_number(stats.avg_degree)},
        {"global_rate", pushpull::json_number(global.rate)},
        {"global_roots_found", global.roots_found},
        {"limiting_rate", pushpull::json_number(pushpull::limiting_rate(p))},
        {"linearization_size",
         pushpull::json_number(pushpull::linearization_size(p.gamma, stats.avg_degree))},
        {"linearization_threshold", pushpull::json_number(opt.linear_threshold)}};
    write_json(dir / "meanfield.json", summary);

    if (!opt.sweep.empty()) {
        if (opt.sweep != "alpha" && opt.sweep != "beta" && opt.sweep != "gamma")
            throw std::invalid_argument("--sweep must be alpha, beta, or gamma");
        if (opt.sweep_points < 1)
            throw std::invalid_argument("--sweep-points must be at least 1");
        std::ostringstream os;
        os << "value,i_star_meanfield,i_star_equilibrium,equilibrium_converged\n";
        for (std::int64_t j = 0; j < opt.sweep_points; ++j) {
            const double value =
                opt.sweep_points == 1
                    ? opt.sweep_from
                    : opt.sweep_from + static_cast<double>(j) *
                                           (opt.sweep_to - opt.sweep_from) /
                                           static_cast<double>(opt.sweep_points - 1);
            pushpull::EpidemicParams q = p;
            (opt.sweep == "alpha" ? q.alpha : opt.sweep == "beta" ? q.beta : q.gamma) = value;
            q.validate();
            if (opt.sweep == "gamma")
                warn_if_large(value);
            auto mf = pushpull::solve_global_rate(stats.avg_degree, q, opt.grid_step);
            auto eq = pushpull::find_equilibrium(
                g, q, pushpull::InfectionProfile::uniform(g.num_nodes(), 0.5), opt.tol);
            os << pushpull::format_float(value) << ',' << pushpull::format_float(mf.rate)
               << ',' << pushpull::format_float(eq.mean()) << ',' << (eq.converged ? 1 : 0)
               << '\n';
        }
        emit_table(opt, dir, "sweep", os.str());
    }

    std::cout << "global rate " << pushpull::format_float(global.rate) << "\n";
}

void cmd_monitor(const CliOptions& opt) {
    auto resolved = resolve_graph(opt);
    const pushpull::Graph& g = resolved.graph;
    auto p = params_of(opt);
    if (opt.steps < 1)
        throw std::invalid_argument("--steps must be at least 1");
    const std::int64_t t1 = resolve_t1(opt);
    if (opt.t0 < 0 || t1 < opt.t0 || t1 > opt.steps)
        throw std::invalid_argument("window must satisfy 0 <= t0 <= t1 <= steps");

    auto i0 = pushpull::InfectionProfile::seeded_fraction(g.num_nodes(), opt.init_fraction,
                                                          opt.seed);
    auto traj = pushpull::integrate(g, p, i0, opt.steps, pushpull::IntegrateOptions{true});

    double window_ibar = 0.0;
    for (std::int64_t t = opt.t0; t <= t1; ++t)
        window_ibar += traj.ibar[static_cast<std::size_t>(t)];
    window_ibar /= static_cast<double>(t1 - opt.t0 + 1);

    auto dir = ensure_out_dir(opt);
    auto panel = pushpull::select_panel(g, opt.panel_size);
    write_json(dir / "panel.json", pushpull::to_json(panel));

    auto running = pushpull::running_estimate(traj.profiles, panel, opt.t0);
    std::ostringstream run_csv;
    pushpull::write_running_csv(run_csv, traj.ibar, running, opt.t0);
    emit_table(opt, dir, "running", run_csv.str());

    std::vector<std::pair<std::int64_t, double>> sweep;
    sweep.reserve(opt.panel_sizes.size());
    for (std::int64_t x : opt.panel_sizes) {
        auto px = pushpull::select_panel(g, x);
        const double est = pushpull::panel_estimate(traj.profiles, px, opt.t0, t1);
        sweep.emplace_back(x, std::abs(est - window_ibar));
    }
    std::ostringstream sweep_csv;
    pushpull::write_error_sweep_csv(sweep_csv, sweep);
    emit_table(opt, dir, "error_sweep", sweep_csv.str());

    const double est = pushpull::panel_estimate(traj.profiles, panel, opt.t0, t1);
    std::cout << "panel size " << panel.nodes.size() << " estimate "
              << pushpull::format_float(est) << " window i_bar "
              << pushpull::format_float(window_ibar) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"push/pull epidemic analysis"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a key=value config file");

    CliOptions opt;
    app.add_option("--edges", opt.edges_path, "edge list file (one 'u v' pair per line)");
    app.add_option("--generate", opt.generate_spec,
                   "synthesize a graph, MODEL:N:PARAM (regular, er, pa)");
    app.add_flag("--directed,!--undirected", opt.directed,
                 "treat edge list lines as arcs (default undirected)");
    app.add_option("--alpha", opt.alpha, "pull rate, in [0,1]");
    app.add_option("--beta", opt.beta, "cure rate, in [0,1]");
    app.add_option("--gamma", opt.gamma, "push rate per infected in-neighbor, in [0,1]");
    app.add_option("--steps", opt.steps, "time horizon T");
    app.add_option("--runs", opt.runs, "stochastic ensemble size");
    app.add_option("--seed", opt.seed, "master seed for every random choice");
    app.add_option("--t0", opt.t0, "observation window start");
    app.add_option("--t1", opt.t1, "observation window end (default steps-10)");
    app.add_option("--panel-sizes", opt.panel_sizes, "panel sizes for the error sweep")
        ->delimiter(',');
    app.add_option("--panel-size", opt.panel_size, "panel size for the running estimate");
    app.add_option("--tol", opt.tol, "spectral and fixed-point tolerance");
    app.add_option("--init-fraction", opt.init_fraction,
                   "initially infected fraction, in [0,1]");
    app.add_option("--grid-step", opt.grid_step, "root scan resolution for rate equations");
    app.add_option("--linear-threshold", opt.linear_threshold,
                   "gamma*<k> size above which the whole-graph equation is flagged");
    app.add_option("--mc-runs", opt.mc_runs,
                   "add observed per-degree rates to the profile (0 disables)");
    app.add_option("--sweep", opt.sweep, "parameter to sweep: alpha, beta, or gamma");
    app.add_option("--sweep-from", opt.sweep_from, "sweep start value");
    app.add_option("--sweep-to", opt.sweep_to, "sweep end value");
    app.add_option("--sweep-points", opt.sweep_points, "sweep grid size");
    app.add_option("--threads", opt.threads, "worker threads for the stochastic ensemble");
    app.add_option("--out", opt.out, "output directory");
    app.add_option("--format", opt.format, "tabular output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--per-node", opt.per_node, "include per-node columns in trajectory output");

    auto* info = app.add_subcommand("graph-info", "degree and spectrum summary");
    auto* analyze = app.add_subcommand("analyze", "threshold checks and infection bounds");
    auto* simulate = app.add_subcommand("simulate", "deterministic and sampled trajectories");
    auto* meanfield = app.add_subcommand("meanfield", "stationary rate equations");
    auto* monitor = app.add_subcommand("monitor", "panel selection and estimators");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (info->parsed())
            cmd_graph_info(opt);
        else if (analyze->parsed())
            cmd_analyze(opt);
        else if (simulate->parsed())
            cmd_simulate(opt);
        else if (meanfield->parsed())
            cmd_meanfield(opt);
        else if (monitor->parsed())
            cmd_monitor(opt);
        return 0;
    } catch (const pushpull::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const pushpull::GenerationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
