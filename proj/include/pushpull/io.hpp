#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "degree.hpp"
#include "dynamics.hpp"
#include "graph.hpp"
#include "meanfield.hpp"
#include "monitoring.hpp"
#include "monte_carlo.hpp"
#include "spectral.hpp"

namespace pushpull {

/// 9 significant digits: enough to round-trip the quantities reported here
/// while keeping output bytes stable across runs.
inline std::string format_float(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

/// JSON has no inf/nan literals; map them to strings instead of null.
inline nlohmann::json json_number(double value) {
    if (std::isfinite(value))
        return value;
    if (std::isnan(value))
        return "nan";
    return value > 0 ? "inf" : "-inf";
}

inline nlohmann::json to_json(const LoadReport& report) {
    return {{"nodes", report.nodes},
            {"edges", report.edges},
            {"duplicates_dropped", report.duplicates_dropped},
            {"self_loops_dropped", report.self_loops_dropped}};
}

inline nlohmann::json to_json(const SpectralEstimate& est) {
    nlohmann::json j{{"value", json_number(est.value)},
                     {"residual", json_number(est.residual)},
                     {"iterations", est.iterations},
                     {"converged", est.converged}};
    if (!est.note.empty())
        j["note"] = est.note;
    return j;
}

inline nlohmann::json to_json(const MonitorPanel& panel) {
    return {{"k_hat", panel.k_hat},
            {"target_2deg", json_number(panel.target_2deg)},
            {"nodes", panel.nodes},
            {"selection_distances", panel.distances},
            {"requested", panel.requested}};
}

inline nlohmann::json to_json(const StabilityReport& report) {
    nlohmann::json j;
    j["lambda1"] = to_json(report.lambda1);
    j["max_degree"] = report.max_degree;
    j["dieout_applicable"] = report.dieout_applicable;
    if (report.dieout_applicable)
        j["dieout"] = {{"verdict", std::string(to_string(report.dieout.verdict))},
                       {"threshold", json_number(report.dieout.threshold)}};
    j["succinct"] = {{"verdict", std::string(to_string(report.succinct.verdict))},
                     {"psi", json_number(report.succinct.psi)},
                     {"branch", std::string(to_string(report.succinct.branch))},
                     {"bound", json_number(report.succinct.bound)}};
    j["general"] = {
        {"verdict", std::string(to_string(report.general.verdict))},
        {"equilibrium_converged", report.general.equilibrium.converged},
        {"equilibrium_iterations", report.general.equilibrium.iterations},
        {"equilibrium_residual", json_number(report.general.equilibrium.residual)},
        {"equilibrium_mean", json_number(report.general.equilibrium.converged
                                             ? report.general.equilibrium.mean()
                                             : 0.0)},
        {"radius", to_json(report.general.radius)}};
    return j;
}

inline nlohmann::json degree_summary_json(const DegreeStats& stats) {
    double mean_2deg = 0.0;
    std::int64_t max_2deg = 0;
    for (std::int64_t s : stats.second_order) {
        mean_2deg += static_cast<double>(s);
        max_2deg = std::max(max_2deg, s);
    }
    mean_2deg /= static_cast<double>(stats.second_order.size());
    return {{"avg_degree", json_number(stats.avg_degree)},
            {"max_degree", stats.max_degree},
            {"rounded_avg_degree", stats.rounded_avg_degree},
            {"resolved_avg_degree", stats.resolved_avg_degree},
            {"avg_class_size", stats.avg_class_size},
            {"mean_2deg", json_number(mean_2deg)},
            {"max_2deg", max_2deg},
            {"mean_2deg_at_avg", json_number(stats.mean_2deg_at_avg)}};
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                                 bool per_node = false) {
    os << "t,i_bar";
    if (per_node && traj.profiles.n > 0)
        for (NodeId v = 0; v < traj.profiles.n; ++v)
            os << ",i_" << v;
    os << '\n';
    for (std::size_t t = 0; t < traj.ibar.size(); ++t) {
        os << t << ',' << format_float(traj.ibar[t]);
        if (per_node && traj.profiles.n > 0)
            for (NodeId v = 0; v < traj.profiles.n; ++v)
                os << ',' << format_float(traj.profiles.at(static_cast<std::int64_t>(t), v));
        os << '\n';
    }
}

inline void write_mc_csv(std::ostream& os, const MonteCarloResult& mc) {
    os << "t,i_bar_mean,i_bar_std\n";
    for (std::size_t t = 0; t < mc.ibar_mean.size(); ++t)
        os << t << ',' << format_float(mc.ibar_mean[t]) << ','
           << format_float(mc.ibar_std[t]) << '\n';
}

inline void write_simulation_csv(std::ostream& os, const std::vector<double>& model_ibar,
                                 const MonteCarloResult& mc, double theta_minus_avg,
                                 double theta_plus_avg) {
    os << "t,i_bar_model,i_bar_mc,i_bar_mc_std,theta_minus_avg,theta_plus_avg\n";
    for (std::size_t t = 0; t < model_ibar.size(); ++t)
        os << t << ',' << format_float(model_ibar[t]) << ',' << format_float(mc.ibar_mean[t])
           << ',' << format_float(mc.ibar_std[t]) << ',' << format_float(theta_minus_avg)
           << ',' << format_float(theta_plus_avg) << '\n';
}

inline void write_bounds_csv(std::ostream& os, const Graph& g, const BoundsProfile& bounds) {
    os << "node,deg,theta_minus,theta_plus\n";
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        os << v << ',' << g.degree(v) << ',' << format_float(bounds.theta_minus[v]) << ','
           << format_float(bounds.theta_plus[v]) << '\n';
}

inline void write_degree_profile_csv(std::ostream& os, const DegreeRateProfile& profile,
                                     const std::vector<std::int64_t>& histogram,
                                     const std::map<std::int64_t, double>* mc_means = nullptr) {
    os << (mc_means ? "k,count,i_star_eq53,i_star_mc" : "k,count,i_star_eq53") << '\n';
    for (const auto& [k, sol] : profile.by_degree) {
        os << k << ',' << histogram[static_cast<std::size_t>(k)] << ','
           << format_float(sol.rate);
        if (mc_means)
            os << ',' << format_float(mc_means->at(k));
        os << '\n';
    }
}

inline void write_running_csv(std::ostream& os, const std::vector<double>& ibar,
                              const std::vector<double>& running, std::int64_t t0) {
    os << "t,i_bar,i_panel_running\n";
    for (std::size_t j = 0; j < running.size(); ++j) {
        const auto t = t0 + static_cast<std::int64_t>(j);
        os << t << ',' << format_float(ibar[static_cast<std::size_t>(t)]) << ','
           << format_float(running[j]) << '\n';
    }
}

inline void write_error_sweep_csv(std::ostream& os,
                                  const std::vector<std::pair<std::int64_t, double>>& sweep) {
    os << "x,abs_error\n";
    for (const auto& [x, err] : sweep)
        os << x << ',' << format_float(err) << '\n';
}

}  // namespace pushpull
