// config.hpp — run configuration: a flat key = value document with sections.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "isingqb/dynamics.hpp"
#include "isingqb/ode.hpp"
#include "isingqb/protocol.hpp"

namespace isingqb {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SystemKind { single_qubit, chain };
enum class RunMode { noiseless, averaged, trajectories };

struct RunConfig {
    SystemKind system = SystemKind::chain;
    int n_sites = 300;
    double j = 1.0;  // single-qubit coupling
    RampProtocol protocol{0.8, 1.5, 10.0};
    std::optional<NoiseSpec> noise;
    NoiseKernel kernel = NoiseKernel::dressed;
    RunMode mode = RunMode::noiseless;
    int trajectories = 1;
    double t_max = 30.0;
    double dt_out = 0.01;
    std::optional<double> t_star;  // defaults to t_max when unset
    IntegratorSettings integrator;
    std::string out_dir = "out";

    double effective_t_star() const { return t_star.value_or(t_max); }
};

// Parses and validates; errors name the offending section.key.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);
void validate_config(const RunConfig& config);

const char* to_string(SystemKind kind);
const char* to_string(RunMode mode);
const char* to_string(NoiseKernel kernel);

}  // namespace isingqb
