#include "isingqb/runner.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "isingqb/io.hpp"
#include "isingqb/util.hpp"
#include "isingqb/version.hpp"

namespace isingqb {

namespace {

using ordered_json = nlohmann::ordered_json;

std::size_t nearest_index(std::span<const double> grid, double t) {
    std::size_t best = 0;
    double best_dev = std::abs(grid[0] - t);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double dev = std::abs(grid[i] - t);
        if (dev < best_dev) {
            best_dev = dev;
            best = i;
        }
    }
    return best;
}

std::string series_csv(const ObservableSeries& obs) {
    std::string out = "t,dE_per_site,ergotropy_per_site,efficiency\n";
    for (std::size_t i = 0; i < obs.t.size(); ++i) {
        out += format_number(obs.t[i]);
        out += ',';
        out += format_number(obs.stored[i]);
        out += ',';
        out += format_number(obs.ergotropy[i]);
        out += ',';
        if (obs.eff[i]) out += format_number(*obs.eff[i]);
        out += '\n';
    }
    return out;
}

std::string pk_csv(std::span<const double> ks, std::span<const double> pk_noiseless,
                   std::span<const double> pk_run) {
    std::string out = "k,P_k_noiseless,P_k_noisy\n";
    for (std::size_t i = 0; i < ks.size(); ++i) {
        out += format_number(ks[i]);
        out += ',';
        out += format_number(pk_noiseless[i]);
        out += ',';
        out += format_number(pk_run[i]);
        out += '\n';
    }
    return out;
}

std::string eta_csv(const NoisePath& path) {
    std::string out = "t,eta\n";
    for (std::size_t i = 0; i < path.t.size(); ++i) {
        out += format_number(path.t[i]);
        out += ',';
        out += format_number(path.eta[i]);
        out += '\n';
    }
    return out;
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["system"]["kind"] = to_string(cfg.system);
    if (cfg.system == SystemKind::chain) j["system"]["n_sites"] = cfg.n_sites;
    if (cfg.system == SystemKind::single_qubit) j["system"]["j"] = cfg.j;
    j["protocol"]["h_i"] = cfg.protocol.h_i;
    j["protocol"]["h_f"] = cfg.protocol.h_f;
    j["protocol"]["t_f"] = cfg.protocol.t_f;
    if (cfg.noise) {
        j["noise"]["xi"] = cfg.noise->xi;
        j["noise"]["tau_n"] = cfg.noise->tau;
        j["noise"]["seed"] = cfg.noise->seed;
        j["noise"]["kernel"] = to_string(cfg.kernel);
    }
    j["run"]["mode"] = to_string(cfg.mode);
    if (cfg.mode == RunMode::trajectories) j["run"]["trajectories"] = cfg.trajectories;
    j["run"]["t_max"] = cfg.t_max;
    j["run"]["dt_out"] = cfg.dt_out;
    j["run"]["t_star"] = cfg.effective_t_star();
    j["integrator"]["rtol"] = cfg.integrator.rtol;
    j["integrator"]["atol"] = cfg.integrator.atol;
    j["integrator"]["max_step"] = cfg.integrator.max_step;
    j["integrator"]["rk4_step"] = cfg.integrator.rk4_step;
    j["output"]["dir"] = cfg.out_dir;
    return j;
}

void write_manifest(const RunConfig& cfg, RunResult& result) {
    ordered_json manifest;
    manifest["code_version"] = kVersion;
    manifest["config"] = config_json(cfg);
    manifest["master_seed"] = cfg.noise ? cfg.noise->seed : 0;
    manifest["wall_seconds"] = result.wall_seconds;
    ordered_json files;
    for (const auto& [name, sum] : result.checksums) files[name] = sum;
    manifest["files"] = files;
    write_file(result.dir / "manifest.json", manifest.dump(2) + "\n");
}

void emit(const std::filesystem::path& dir, const std::string& name,
          const std::string& content, RunResult& result) {
    write_file(dir / name, content);
    result.checksums.emplace_back(name, checksum_hex(content));
}

}  // namespace

RunResult run(const RunConfig& config) {
    validate_config(config);
    const auto start = std::chrono::steady_clock::now();

    RunResult result;
    result.dir = config.out_dir;
    std::filesystem::create_directories(result.dir);
    const auto t_grid = uniform_grid(0.0, config.t_max, config.dt_out);
    result.t_star = config.effective_t_star();

    if (config.system == SystemKind::single_qubit) {
        const auto series = evolve_qubit_uxy(config.protocol, config.j, t_grid, config.integrator);
        result.series = qubit_observables(series, qubit_battery(config.protocol.h_i, config.j));
    } else {
        const auto spec = ChainSpec::make(config.n_sites, config.protocol.h_i);
        result.modes = spec.modes;
        ChainEvolution evolution;
        switch (config.mode) {
            case RunMode::noiseless:
                evolution = evolve_chain_noiseless(spec, config.protocol, t_grid,
                                                   config.integrator);
                break;
            case RunMode::averaged:
                evolution = evolve_chain_averaged(spec, config.protocol, *config.noise, t_grid,
                                                  config.integrator, config.kernel);
                break;
            case RunMode::trajectories:
                evolution = evolve_chain_trajectory_mean(spec, config.protocol, *config.noise,
                                                         t_grid, config.integrator,
                                                         config.trajectories);
                break;
        }
        result.series = chain_observables(evolution);
        result.pk_run = excitation_probabilities(evolution, result.t_star);
        if (config.mode == RunMode::noiseless) {
            result.pk_noiseless = result.pk_run;
        } else {
            const auto reference =
                evolve_chain_noiseless(spec, config.protocol, t_grid, config.integrator);
            result.pk_noiseless = excitation_probabilities(reference, result.t_star);
        }
    }

    emit(result.dir, "series.csv", series_csv(result.series), result);
    if (config.system == SystemKind::chain) {
        emit(result.dir, "pk.csv", pk_csv(result.modes, result.pk_noiseless, result.pk_run),
             result);
    }
    if (config.noise && config.noise->xi > 0.0) {
        NoiseSpec sample = *config.noise;
        sample.seed = sub_seed(config.noise->seed, 0);
        const auto grid = uniform_grid(0.0, config.t_max, config.noise->tau / 50.0);
        emit(result.dir, "eta.csv", eta_csv(ou_sample_path(sample, grid)), result);
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(config, result);
    log_info("run complete: %s (%.2fs)", result.dir.string().c_str(), result.wall_seconds);
    return result;
}

SweepResult run_sweep(const RunConfig& config, std::span<const double> xi_list) {
    validate_config(config);
    if (xi_list.empty()) throw ConfigError("run_sweep: empty xi list");
    bool any_noisy = false;
    for (double xi : xi_list) any_noisy |= xi > 0.0;
    if (any_noisy && config.mode == RunMode::noiseless) {
        throw ConfigError(
            "run_sweep: run.mode must be averaged or trajectories to sweep nonzero xi");
    }
    if (config.system != SystemKind::chain) {
        throw ConfigError("run_sweep: sweeps require system.kind = chain");
    }

    SweepResult sweep;
    sweep.dir = config.out_dir;
    std::filesystem::create_directories(sweep.dir);
    for (double xi : xi_list) {
        RunConfig sub = config;
        NoiseSpec noise = config.noise.value_or(NoiseSpec{});
        noise.xi = xi;
        sub.noise = noise;
        sub.out_dir = (sweep.dir / ("xi_" + format_number(xi))).string();
        const RunResult res = run(sub);

        SweepRow row;
        row.xi = xi;
        const std::size_t ti = nearest_index(res.series.t, res.t_star);
        row.stored_tstar = res.series.stored[ti];
        row.ergotropy_tstar = res.series.ergotropy[ti];
        row.efficiency_tstar = res.series.eff[ti];
        std::size_t above = 0;
        for (double p : res.pk_run) above += p > 0.5 ? 1 : 0;
        row.frac_pk_above_half =
            res.pk_run.empty() ? 0.0 : static_cast<double>(above) / res.pk_run.size();
        sweep.rows.push_back(row);
    }

    std::string csv = "xi,dE_tstar,ergotropy_tstar,efficiency_tstar,frac_pk_above_half\n";
    for (const auto& row : sweep.rows) {
        csv += format_number(row.xi);
        csv += ',';
        csv += format_number(row.stored_tstar);
        csv += ',';
        csv += format_number(row.ergotropy_tstar);
        csv += ',';
        if (row.efficiency_tstar) csv += format_number(*row.efficiency_tstar);
        csv += ',';
        csv += format_number(row.frac_pk_above_half);
        csv += '\n';
    }
    write_file(sweep.dir / "summary.csv", csv);
    return sweep;
}

ValidationReport validate(const RunConfig& config) {
    if (config.system != SystemKind::chain) {
        throw ConfigError("validate: requires system.kind = chain");
    }
    if (config.n_sites > 10) {
        throw ConfigError("validate: key 'system.n_sites' must be <= 10 for the exact oracle");
    }
    ValidationReport report;
    report.n_sites = config.n_sites;

    const auto t_grid = uniform_grid(0.0, config.t_max, std::max(config.dt_out, 0.05));
    const auto spec = ChainSpec::make(config.n_sites, config.protocol.h_i);
    const auto evolution =
        evolve_chain_noiseless(spec, config.protocol, t_grid, config.integrator);
    const auto obs = chain_observables(evolution);
    const auto exact = exact_chain_oracle(config.n_sites, config.protocol, t_grid,
                                          config.integrator);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        report.oracle_max_dev = std::max(report.oracle_max_dev,
                                         std::abs(obs.stored[i] - exact[i]));
    }

    const NoiseSpec noise = config.noise.value_or(NoiseSpec{0.1, 1.0, 12345});
    report.mc_trajectories = config.mode == RunMode::trajectories ? config.trajectories : 2000;
    const auto checkpoints = uniform_grid(0.0, config.t_max, config.t_max / 20.0);
    const double k = M_PI / 2.0;
    const auto averaged = evolve_mode_noisy_averaged(k, config.protocol, noise, checkpoints,
                                                     config.integrator, config.kernel);
    const auto ensemble = trajectory_ensemble(k, config.protocol, noise, checkpoints,
                                              config.integrator, report.mc_trajectories);
    for (std::size_t ti = 1; ti < checkpoints.size(); ++ti) {
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                const double dev_re =
                    std::abs(averaged.rho[ti](r, c).real() - ensemble.mean[ti](r, c).real());
                const double dev_im =
                    std::abs(averaged.rho[ti](r, c).imag() - ensemble.mean[ti](r, c).imag());
                const double tol_re = std::max(3.0 * ensemble.se_real[ti](r, c), 5e-3);
                const double tol_im = std::max(3.0 * ensemble.se_imag[ti](r, c), 5e-3);
                report.mc_max_dev = std::max({report.mc_max_dev, dev_re, dev_im});
                report.mc_max_ratio =
                    std::max({report.mc_max_ratio, dev_re / tol_re, dev_im / tol_im});
            }
        }
    }
    return report;
}

std::string render_report(const ValidationReport& report) {
    std::ostringstream out;
    out << "validation report (N = " << report.n_sites << ")\n";
    out << "  mode-sum vs exact 2^N oracle: max |dE/N| deviation = "
        << format_number(report.oracle_max_dev) << (report.oracle_ok() ? "  [ok]" : "  [FAIL]")
        << " (threshold 1e-6)\n";
    out << "  averaged equation vs trajectory mean (k = pi/2, M = " << report.mc_trajectories
        << "): max entry deviation = " << format_number(report.mc_max_dev)
        << ", max deviation/tolerance = " << format_number(report.mc_max_ratio)
        << (report.mc_ok() ? "  [ok]" : "  [FAIL]") << " (tolerance max(3 SE, 5e-3))\n";
    return out.str();
}

}  // namespace isingqb
