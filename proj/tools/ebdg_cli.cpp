// Experiment runner: mesh-refinement studies, energy histories and solution
// profiles for the energy-based DG beam solver. Exit codes: 0 success,
// 1 failed case, 2 configuration error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ebdg/ebdg.hpp"

namespace {

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("cannot open output file " + (dir / name).string());
    return out;
}

int report_failures(const std::vector<std::string>& failures) {
    for (const auto& f : failures) std::cerr << "case failed: " << f << "\n";
    return failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"energy-based discontinuous Galerkin solver for Euler-Bernoulli beams"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file")->required();
        cmd->add_option("--out", out_dir, "output directory")->required();
    };
    CLI::App* conv = app.add_subcommand("convergence", "mesh-refinement error and rate table");
    CLI::App* energy = app.add_subcommand("energy-history", "discrete energy over time");
    CLI::App* solve = app.add_subcommand("solve", "solution profile at the report time");
    add_common(conv);
    add_common(energy);
    add_common(solve);

    CLI11_PARSE(app, argc, argv);

    try {
        const ebdg::ExperimentConfig cfg = ebdg::load_config(config_path);

        if (conv->parsed()) {
            const ebdg::RunRecord rec = ebdg::run_convergence(cfg);
            auto csv = open_output(out_dir, cfg.out_csv.empty() ? "convergence.csv" : cfg.out_csv);
            ebdg::write_convergence_csv(rec, csv);
            for (const auto& row : rec.rows)
                std::cout << "N=" << row.N << "  err_energy=" << row.errors.energy << "  (" << row.seconds
                          << " s)\n";
            return report_failures(rec.failures);
        }
        if (energy->parsed()) {
            const ebdg::RunRecord rec = ebdg::run_energy_history(cfg);
            auto csv = open_output(out_dir, cfg.out_csv.empty() ? "energy.csv" : cfg.out_csv);
            ebdg::write_energy_csv(rec, csv);
            auto svg = open_output(out_dir, cfg.out_svg.empty() ? "energy.svg" : cfg.out_svg);
            ebdg::write_energy_svg(rec, svg);
            if (!rec.history_energies.empty()) {
                const double e0 = rec.history_energies.front();
                double drift = 0.0;
                for (double e : rec.history_energies)
                    drift = std::max(drift, std::abs(e - e0) / std::max(std::abs(e0), 1e-300));
                std::cout << "steps=" << rec.history_times.size() - 1 << "  E(0)=" << e0
                          << "  max relative drift=" << drift << "\n";
            }
            return report_failures(rec.failures);
        }
        const ebdg::SolveRecord rec = ebdg::run_solve(cfg);
        auto csv = open_output(out_dir, cfg.out_csv.empty() ? "solution.csv" : cfg.out_csv);
        ebdg::write_solution_csv(rec, csv);
        if (!rec.samples.empty()) {
            double max_err = 0.0;
            for (const auto& s : rec.samples) max_err = std::max(max_err, std::abs(s.error));
            std::cout << "samples=" << rec.samples.size() << "  max|u-u_h|=" << max_err << "\n";
        }
        return report_failures(rec.failures);
    } catch (const ebdg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
