// runner.hpp — configuration-driven execution: single runs, noise-intensity
// sweeps and the oracle validation report; serializes CSV series plus a JSON
// manifest sufficient to reproduce every output.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isingqb/config.hpp"
#include "isingqb/observables.hpp"

namespace isingqb {

struct RunResult {
    std::filesystem::path dir;
    ObservableSeries series;
    std::vector<double> modes;         // chain runs
    std::vector<double> pk_noiseless;  // chain runs
    std::vector<double> pk_run;        // chain runs
    double t_star = 0.0;
    std::vector<std::pair<std::string, std::string>> checksums;
    double wall_seconds = 0.0;
};

// Executes one configuration, writing series.csv, pk.csv (chain),
// eta.csv (noisy runs) and manifest.json under config.out_dir.
RunResult run(const RunConfig& config);

struct SweepRow {
    double xi = 0.0;
    double stored_tstar = 0.0;
    double ergotropy_tstar = 0.0;
    std::optional<double> efficiency_tstar;
    double frac_pk_above_half = 0.0;
};

struct SweepResult {
    std::filesystem::path dir;
    std::vector<SweepRow> rows;
};

// One run per noise intensity (outputs under <out>/xi_<value>/) plus a
// combined summary.csv.
SweepResult run_sweep(const RunConfig& config, std::span<const double> xi_list);

struct ValidationReport {
    int n_sites = 0;
    double oracle_max_dev = 0.0;  // mode-sum vs exact 2^N evolution, per site
    double mc_max_dev = 0.0;      // averaged equation vs trajectory mean, per entry
    double mc_max_ratio = 0.0;    // deviation / max(3 SE, 5e-3)
    int mc_trajectories = 0;

    bool oracle_ok() const { return oracle_max_dev < 1e-6; }
    bool mc_ok() const { return mc_max_ratio <= 1.0; }
    bool ok() const { return oracle_ok() && mc_ok(); }
};

// Compares the mode decomposition against the exact 2^N oracle (noiseless)
// and the averaged equations against a trajectory ensemble at k = pi/2.
// Requires a chain configuration with n_sites <= 10.
ValidationReport validate(const RunConfig& config);
std::string render_report(const ValidationReport& report);

}  // namespace isingqb
