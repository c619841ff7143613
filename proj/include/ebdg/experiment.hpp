#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebdg/diagnostics.hpp"
#include "ebdg/fluxes.hpp"
#include "ebdg/operator.hpp"
#include "ebdg/problem.hpp"
#include "ebdg/sdc.hpp"

namespace ebdg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key-value experiment description (see README for the key list).
struct ExperimentConfig {
    std::string problem = "uniform-beam";
    std::vector<int> N_list = {10, 20, 40, 80, 160};
    int q = 5;
    int s = 3;
    std::string flux = "alternating";  // central | alternating | upwind | custom
    FluxSpec spec = FluxSpec::alternating();
    std::optional<BoundaryType> bc_left, bc_right;  // default: the preset's own
    double T = 1.0;
    double cfl = 0.5;                 // dt = cfl * h unless dt is set
    std::optional<double> dt;         // explicit time step
    int sdc_m = 5;
    int sdc_J = 15;
    std::vector<double> report_times;  // defaults to {T}
    int samples_per_element = 20;
    std::string out_csv;  // optional file-name overrides
    std::string out_svg;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (...) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError("config: key '" + key + "' has trailing characters: '" + v + "'");
    return x;
}

inline int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x) throw ConfigError("config: key '" + key + "' expects an integer");
    return i;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& v, Parse parse) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("config: key '" + key + "' has an empty list entry");
        out.push_back(parse(key, item));
    }
    if (out.empty()) throw ConfigError("config: key '" + key + "' expects a nonempty list");
    return out;
}

inline BoundaryType parse_bc(const std::string& key, const std::string& v) {
    if (v == "simply-supported") return BoundaryType::SimplySupported;
    if (v == "free") return BoundaryType::Free;
    if (v == "clamped") return BoundaryType::Clamped;
    if (v == "sliding") return BoundaryType::Sliding;
    throw ConfigError("config: key '" + key + "' has unknown boundary type '" + v + "'");
}

/// Fixed 17-significant-digit formatting so identical runs produce
/// byte-identical CSV output.
inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    bool flux_seen = false;
    std::map<std::string, std::string> custom;  // flux parameter keys
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");

        using detail::parse_double;
        using detail::parse_int;
        if (key == "problem") cfg.problem = value;
        else if (key == "N") cfg.N_list = detail::parse_list<int>(key, value, parse_int);
        else if (key == "q") cfg.q = parse_int(key, value);
        else if (key == "s") cfg.s = parse_int(key, value);
        else if (key == "flux") { cfg.flux = value; flux_seen = true; }
        else if (key == "alpha1" || key == "alpha2" || key == "beta1" || key == "beta2" || key == "tau1" ||
                 key == "tau2") custom[key] = value;
        else if (key == "eta1") cfg.spec.eta1 = parse_double(key, value);
        else if (key == "eta2") cfg.spec.eta2 = parse_double(key, value);
        else if (key == "bc_left") cfg.bc_left = detail::parse_bc(key, value);
        else if (key == "bc_right") cfg.bc_right = detail::parse_bc(key, value);
        else if (key == "T") cfg.T = parse_double(key, value);
        else if (key == "cfl") cfg.cfl = parse_double(key, value);
        else if (key == "dt") cfg.dt = parse_double(key, value);
        else if (key == "sdc_m") cfg.sdc_m = parse_int(key, value);
        else if (key == "sdc_J") cfg.sdc_J = parse_int(key, value);
        else if (key == "report_times") cfg.report_times = detail::parse_list<double>(key, value, parse_double);
        else if (key == "samples_per_element") cfg.samples_per_element = parse_int(key, value);
        else if (key == "out_csv") cfg.out_csv = value;
        else if (key == "out_svg") cfg.out_svg = value;
        else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }

    if (!flux_seen && !custom.empty()) cfg.flux = "custom";
    const double eta1 = cfg.spec.eta1, eta2 = cfg.spec.eta2;
    if (cfg.flux == "custom") {
        FluxSpec s;
        s.alpha1 = s.alpha2 = 0.5;  // central defaults for unspecified weights
        for (const auto& [k, v] : custom) {
            const double x = detail::parse_double(k, v);
            if (k == "alpha1") s.alpha1 = x;
            else if (k == "alpha2") s.alpha2 = x;
            else if (k == "beta1") s.beta1 = x;
            else if (k == "beta2") s.beta2 = x;
            else if (k == "tau1") s.tau1 = x;
            else if (k == "tau2") s.tau2 = x;
        }
        cfg.spec = s;
    } else {
        try {
            cfg.spec = flux_preset(cfg.flux);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (!custom.empty())
            throw ConfigError("config: flux parameters alpha/beta/tau require 'flux = custom'");
    }
    cfg.spec.eta1 = eta1;
    cfg.spec.eta2 = eta2;
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Resolves the problem, applies boundary overrides and validates
/// everything the runners rely on.
inline BeamProblem resolve_problem(const ExperimentConfig& cfg) {
    BeamProblem prob;
    try {
        prob = problem_preset(cfg.problem);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.bc_left) prob.bc_left = *cfg.bc_left;
    if (cfg.bc_right) prob.bc_right = *cfg.bc_right;

    if (cfg.q < 2) throw ConfigError("config: q must be >= 2");
    if (cfg.s < 0 || cfg.s > cfg.q) throw ConfigError("config: need 0 <= s <= q");
    for (int N : cfg.N_list)
        if (N < 1) throw ConfigError("config: N values must be positive");
    if (!(cfg.T > 0.0)) throw ConfigError("config: T must be positive");
    if (!(cfg.cfl > 0.0)) throw ConfigError("config: cfl must be positive");
    if (cfg.dt && !(*cfg.dt > 0.0)) throw ConfigError("config: dt must be positive");
    if (cfg.sdc_m < 1 || cfg.sdc_J < 0) throw ConfigError("config: need sdc_m >= 1 and sdc_J >= 0");
    if (cfg.samples_per_element < 2) throw ConfigError("config: samples_per_element must be >= 2");
    try {
        validate(cfg.spec);
        validate_boundary(cfg.spec, prob.bc_left);
        validate_boundary(cfg.spec, prob.bc_right);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return prob;
}

struct ConvergenceRow {
    int N = 0;
    ErrorReport errors;
    double seconds = 0.0;
};

/// Everything one runner invocation produced; rows stay in config order.
struct RunRecord {
    ExperimentConfig config;
    std::vector<ConvergenceRow> rows;
    RateTable rate_energy, rate_l2u, rate_l2v, rate_h2u;
    std::vector<std::string> failures;
    std::vector<double> history_times, history_energies;
};

namespace detail {

inline double effective_dt(const ExperimentConfig& cfg, double h) {
    return cfg.dt ? *cfg.dt : cfg.cfl * h;
}

inline double report_time(const ExperimentConfig& cfg) {
    return cfg.report_times.empty() ? cfg.T : cfg.report_times.back();
}

inline ConvergenceRow run_single_case(const ExperimentConfig& cfg, const BeamProblem& prob, int N) {
    const auto start = std::chrono::steady_clock::now();
    const Mesh1D mesh = uniform_mesh(prob.a, prob.b, N);
    const SemiDiscreteSystem sys = assemble(prob, mesh, cfg.q, cfg.s, cfg.spec);
    const DGState init = project_initial_data(prob, mesh, cfg.q, cfg.s);
    const SDCConfig sdc = make_sdc_config(cfg.sdc_m, cfg.sdc_J);
    const double t_report = report_time(cfg);
    const Trajectory traj = integrate(sys, sdc, init.y, 0.0, t_report, effective_dt(cfg, mesh.max_width()));
    DGState final_state(N, cfg.q, cfg.s);
    final_state.y = traj.final_state;
    ConvergenceRow row;
    row.N = N;
    row.errors = error_norms(final_state, prob, mesh, t_report);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

}  // namespace detail

/// Runs the mesh-refinement study: one case per N (concurrently), error
/// norms at the report time, then the rate tables. Failed cases are
/// recorded and the remaining rows still complete.
inline RunRecord run_convergence(const ExperimentConfig& cfg) {
    const BeamProblem prob = resolve_problem(cfg);
    for (std::size_t i = 1; i < cfg.N_list.size(); ++i)
        if (cfg.N_list[i] != 2 * cfg.N_list[i - 1])
            throw ConfigError("config: convergence studies need a doubling N sequence");
    RunRecord rec;
    rec.config = cfg;

    std::vector<std::future<ConvergenceRow>> futures;
    futures.reserve(cfg.N_list.size());
    for (int N : cfg.N_list)
        futures.push_back(
            std::async(std::launch::async, [&cfg, &prob, N] { return detail::run_single_case(cfg, prob, N); }));
    for (std::size_t i = 0; i < futures.size(); ++i) {
        try {
            rec.rows.push_back(futures[i].get());
        } catch (const std::exception& e) {
            rec.failures.push_back("N=" + std::to_string(cfg.N_list[i]) + ": " + e.what());
        }
    }

    auto rates_of = [&](auto field) {
        std::vector<std::pair<int, double>> errs;
        for (const auto& row : rec.rows) errs.emplace_back(row.N, field(row.errors));
        return convergence_rates(errs);
    };
    if (rec.rows.size() >= 1 && rec.failures.empty()) {
        rec.rate_energy = rates_of([](const ErrorReport& e) { return e.energy; });
        rec.rate_l2u = rates_of([](const ErrorReport& e) { return e.l2_u; });
        rec.rate_l2v = rates_of([](const ErrorReport& e) { return e.l2_v; });
        rec.rate_h2u = rates_of([](const ErrorReport& e) { return e.h2_u; });
    }
    return rec;
}

inline constexpr const char* kConvergenceCsvHeader =
    "N,q,s,flux,err_energy,err_L2_u,err_L2_v,err_H2_u,rate_energy,rate_L2_u,rate_L2_v,rate_H2_u";

inline void write_convergence_csv(const RunRecord& rec, std::ostream& out) {
    out << kConvergenceCsvHeader << "\n";
    auto rate_str = [](const RateTable& t, std::size_t i) {
        return (i < t.rows.size() && t.rows[i].rate) ? detail::fmt(*t.rows[i].rate) : std::string();
    };
    for (std::size_t i = 0; i < rec.rows.size(); ++i) {
        const auto& row = rec.rows[i];
        out << row.N << ',' << rec.config.q << ',' << rec.config.s << ',' << rec.config.flux << ','
            << detail::fmt(row.errors.energy) << ',' << detail::fmt(row.errors.l2_u) << ','
            << detail::fmt(row.errors.l2_v) << ',' << detail::fmt(row.errors.h2_u) << ','
            << rate_str(rec.rate_energy, i) << ',' << rate_str(rec.rate_l2u, i) << ','
            << rate_str(rec.rate_l2v, i) << ',' << rate_str(rec.rate_h2u, i) << "\n";
    }
}

/// Integrates the first N of the config to time T recording the discrete
/// energy after every step.
inline RunRecord run_energy_history(const ExperimentConfig& cfg) {
    const BeamProblem prob = resolve_problem(cfg);
    RunRecord rec;
    rec.config = cfg;
    const int N = cfg.N_list.front();
    try {
        const Mesh1D mesh = uniform_mesh(prob.a, prob.b, N);
        const SemiDiscreteSystem sys = assemble(prob, mesh, cfg.q, cfg.s, cfg.spec);
        const DGState init = project_initial_data(prob, mesh, cfg.q, cfg.s);
        const SDCConfig sdc = make_sdc_config(cfg.sdc_m, cfg.sdc_J);
        const Trajectory traj =
            integrate(sys, sdc, init.y, 0.0, cfg.T, detail::effective_dt(cfg, mesh.max_width()));
        rec.history_times = traj.times;
        rec.history_energies = traj.energies;
    } catch (const std::exception& e) {
        rec.failures.push_back("N=" + std::to_string(N) + ": " + e.what());
    }
    return rec;
}

inline constexpr const char* kEnergyCsvHeader = "t,energy";

inline void write_energy_csv(const RunRecord& rec, std::ostream& out) {
    out << kEnergyCsvHeader << "\n";
    for (std::size_t i = 0; i < rec.history_times.size(); ++i)
        out << detail::fmt(rec.history_times[i]) << ',' << detail::fmt(rec.history_energies[i]) << "\n";
}

/// Minimal SVG line plot of the energy history (plotting is a convenience;
/// the CSV is the contract).
inline void write_energy_svg(const RunRecord& rec, std::ostream& out) {
    const int width = 800, height = 500, ml = 90, mr = 30, mt = 40, mb = 60;
    const auto& ts = rec.history_times;
    const auto& es = rec.history_energies;
    double tmin = 0.0, tmax = 1.0, emin = 0.0, emax = 1.0;
    if (!ts.empty()) {
        tmin = ts.front();
        tmax = ts.back();
        emin = emax = es.front();
        for (double e : es) {
            emin = std::min(emin, e);
            emax = std::max(emax, e);
        }
        if (emax == emin) {
            emax += 0.5;
            emin -= 0.5;
        } else {
            const double pad = 0.08 * (emax - emin);
            emax += pad;
            emin -= pad;
        }
        if (tmax == tmin) tmax += 1.0;
    }
    auto px = [&](double t) { return ml + (t - tmin) / (tmax - tmin) * (width - ml - mr); };
    auto py = [&](double e) { return height - mb - (e - emin) / (emax - emin) * (height - mt - mb); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">discrete energy"
        << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double t = tmin + (tmax - tmin) * i / 4.0;
        const double e = emin + (emax - emin) * i / 4.0;
        char tb[40], eb[40];
        std::snprintf(tb, sizeof tb, "%.4g", t);
        std::snprintf(eb, sizeof eb, "%.6g", e);
        out << "<text x=\"" << px(t) << "\" y=\"" << height - mb + 22
            << "\" text-anchor=\"middle\" font-size=\"12\">" << tb << "</text>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << py(e) + 4
            << "\" text-anchor=\"end\" font-size=\"12\">" << eb << "</text>\n";
    }
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 16
        << "\" text-anchor=\"middle\" font-size=\"13\">t</text>\n";
    if (!ts.empty()) {
        out << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (i) out << ' ';
            out << px(ts[i]) << ',' << py(es[i]);
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

struct SolutionSample {
    double x = 0.0, u_h = 0.0, u_exact = 0.0, error = 0.0;
};

/// Dense per-element sampling of the final-time solution and its error.
inline std::vector<SolutionSample> sample_solution(const DGState& st, const BeamProblem& prob,
                                                   const Mesh1D& mesh, double t, int per_element) {
    if (!prob.exact) throw std::invalid_argument("sample_solution: problem has no exact solution");
    std::vector<SolutionSample> out;
    out.reserve(static_cast<std::size_t>(st.n) * per_element);
    for (int j = 0; j < st.n; ++j) {
        for (int i = 0; i < per_element; ++i) {
            const double xi = -1.0 + 2.0 * i / (per_element - 1.0);
            SolutionSample smp;
            smp.x = mesh.from_reference(j, xi);
            smp.u_h = eval_u(st, mesh, j, xi);
            smp.u_exact = prob.exact->u(smp.x, t);
            smp.error = smp.u_exact - smp.u_h;
            out.push_back(smp);
        }
    }
    return out;
}

inline constexpr const char* kSolutionCsvHeader = "x,u_h,u_exact,error";

struct SolveRecord {
    ExperimentConfig config;
    std::vector<SolutionSample> samples;
    std::vector<std::string> failures;
};

/// Integrates the first N of the config to the report time and samples the
/// displacement profile.
inline SolveRecord run_solve(const ExperimentConfig& cfg) {
    const BeamProblem prob = resolve_problem(cfg);
    SolveRecord rec;
    rec.config = cfg;
    const int N = cfg.N_list.front();
    try {
        const Mesh1D mesh = uniform_mesh(prob.a, prob.b, N);
        const SemiDiscreteSystem sys = assemble(prob, mesh, cfg.q, cfg.s, cfg.spec);
        const DGState init = project_initial_data(prob, mesh, cfg.q, cfg.s);
        const SDCConfig sdc = make_sdc_config(cfg.sdc_m, cfg.sdc_J);
        const double t_report = detail::report_time(cfg);
        DGState final_state(N, cfg.q, cfg.s);
        if (t_report > 0.0) {
            const Trajectory traj =
                integrate(sys, sdc, init.y, 0.0, t_report, detail::effective_dt(cfg, mesh.max_width()));
            final_state.y = traj.final_state;
        } else {
            final_state = init;
        }
        rec.samples = sample_solution(final_state, prob, mesh, t_report, cfg.samples_per_element);
    } catch (const std::exception& e) {
        rec.failures.push_back("N=" + std::to_string(N) + ": " + e.what());
    }
    return rec;
}

inline void write_solution_csv(const SolveRecord& rec, std::ostream& out) {
    out << kSolutionCsvHeader << "\n";
    for (const auto& s : rec.samples)
        out << detail::fmt(s.x) << ',' << detail::fmt(s.u_h) << ',' << detail::fmt(s.u_exact) << ','
            << detail::fmt(s.error) << "\n";
}

}  // namespace ebdg
