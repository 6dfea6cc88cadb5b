// isingqb — CLI runner for the Ising-chain quantum battery simulator.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "isingqb/io.hpp"
#include "isingqb/runner.hpp"
#include "isingqb/util.hpp"
#include "isingqb/version.hpp"

namespace {

std::vector<double> parse_sweep(const std::string& spec) {
    const std::string prefix = "xi=";
    if (spec.rfind(prefix, 0) != 0) {
        throw isingqb::ConfigError("--sweep expects xi=<comma separated list>");
    }
    std::vector<double> values;
    std::string rest = spec.substr(prefix.size());
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
        if (tok.empty()) throw isingqb::ConfigError("--sweep: empty value in list");
        try {
            std::size_t used = 0;
            values.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw isingqb::ConfigError("--sweep: bad number '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transverse-field Ising chain quantum battery simulator"};
    app.set_version_flag("--version", isingqb::kVersion);

    std::string config_path;
    std::string out_dir;
    std::string sweep_spec;
    std::optional<std::uint64_t> seed;
    bool do_validate = false;
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--seed", seed, "master seed (overrides noise.seed)");
    app.add_option("--sweep", sweep_spec, "sweep spec, e.g. xi=0,0.01,0.1,1");
    app.add_flag("--validate", do_validate, "run the small-N oracle cross checks");
    CLI11_PARSE(app, argc, argv);

    try {
        isingqb::RunConfig config = isingqb::parse_config_file(config_path);
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (seed) {
            if (config.noise) {
                config.noise->seed = *seed;
            } else {
                isingqb::log_info("--seed ignored: configuration has no noise section");
            }
        }

        if (do_validate) {
            const auto report = isingqb::validate(config);
            std::cout << isingqb::render_report(report);
            return report.ok() ? 0 : 1;
        }
        if (!sweep_spec.empty()) {
            const auto values = parse_sweep(sweep_spec);
            const auto sweep = isingqb::run_sweep(config, values);
            std::printf("%-10s %-14s %-14s %-14s %s\n", "xi", "dE(t*)", "ergotropy(t*)",
                        "efficiency", "frac P_k>0.5");
            for (const auto& row : sweep.rows) {
                std::printf("%-10s %-14s %-14s %-14s %s\n",
                            isingqb::format_number(row.xi).c_str(),
                            isingqb::format_number(row.stored_tstar).c_str(),
                            isingqb::format_number(row.ergotropy_tstar).c_str(),
                            row.efficiency_tstar
                                ? isingqb::format_number(*row.efficiency_tstar).c_str()
                                : "-",
                            isingqb::format_number(row.frac_pk_above_half).c_str());
            }
            return 0;
        }
        isingqb::run(config);
        return 0;
    } catch (const isingqb::ConfigError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 3;
    }
}
