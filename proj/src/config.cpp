#include "isingqb/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace isingqb {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an unsigned integer, got '" +
                          value + "'");
    }
}

}  // namespace

const char* to_string(SystemKind kind) {
    return kind == SystemKind::chain ? "chain" : "single_qubit";
}

const char* to_string(RunMode mode) {
    switch (mode) {
        case RunMode::noiseless: return "noiseless";
        case RunMode::averaged: return "averaged";
        case RunMode::trajectories: return "trajectories";
    }
    return "?";
}

const char* to_string(NoiseKernel kernel) {
    return kernel == NoiseKernel::dressed ? "dressed" : "undressed";
}

RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(line_no));
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: expected key = value at line " + std::to_string(line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config: empty key at line " + std::to_string(line_no));
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (kv.count(full)) throw ConfigError("config: duplicate key '" + full + "'");
        kv[full] = value;
    }

    RunConfig cfg;
    bool noise_seen = false;
    NoiseSpec noise;
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("system.kind")) {
        if (*v == "chain") cfg.system = SystemKind::chain;
        else if (*v == "single_qubit") cfg.system = SystemKind::single_qubit;
        else throw ConfigError("config: key 'system.kind' must be chain or single_qubit");
    }
    if (auto v = take("system.n_sites")) cfg.n_sites = static_cast<int>(parse_int("system.n_sites", *v));
    if (auto v = take("system.j")) cfg.j = parse_double("system.j", *v);

    if (auto v = take("protocol.h_i")) cfg.protocol.h_i = parse_double("protocol.h_i", *v);
    if (auto v = take("protocol.h_f")) cfg.protocol.h_f = parse_double("protocol.h_f", *v);
    if (auto v = take("protocol.t_f")) cfg.protocol.t_f = parse_double("protocol.t_f", *v);

    if (auto v = take("noise.xi")) {
        noise.xi = parse_double("noise.xi", *v);
        noise_seen = true;
    }
    if (auto v = take("noise.tau_n")) {
        noise.tau = parse_double("noise.tau_n", *v);
        noise_seen = true;
    }
    if (auto v = take("noise.seed")) {
        noise.seed = parse_u64("noise.seed", *v);
        noise_seen = true;
    }
    if (auto v = take("noise.kernel")) {
        if (*v == "dressed") cfg.kernel = NoiseKernel::dressed;
        else if (*v == "undressed") cfg.kernel = NoiseKernel::undressed;
        else throw ConfigError("config: key 'noise.kernel' must be dressed or undressed");
    }
    if (noise_seen) cfg.noise = noise;

    if (auto v = take("run.mode")) {
        if (*v == "noiseless") cfg.mode = RunMode::noiseless;
        else if (*v == "averaged") cfg.mode = RunMode::averaged;
        else if (*v == "trajectories") cfg.mode = RunMode::trajectories;
        else throw ConfigError(
            "config: key 'run.mode' must be noiseless, averaged or trajectories");
    }
    if (auto v = take("run.trajectories")) {
        cfg.trajectories = static_cast<int>(parse_int("run.trajectories", *v));
    }
    if (auto v = take("run.t_max")) cfg.t_max = parse_double("run.t_max", *v);
    if (auto v = take("run.dt_out")) cfg.dt_out = parse_double("run.dt_out", *v);
    if (auto v = take("run.t_star")) cfg.t_star = parse_double("run.t_star", *v);

    if (auto v = take("integrator.rtol")) cfg.integrator.rtol = parse_double("integrator.rtol", *v);
    if (auto v = take("integrator.atol")) cfg.integrator.atol = parse_double("integrator.atol", *v);
    if (auto v = take("integrator.max_step")) {
        cfg.integrator.max_step = parse_double("integrator.max_step", *v);
    }
    if (auto v = take("integrator.rk4_step")) {
        cfg.integrator.rk4_step = parse_double("integrator.rk4_step", *v);
    }

    if (auto v = take("output.dir")) cfg.out_dir = *v;

    if (!kv.empty()) {
        throw ConfigError("config: unknown key '" + kv.begin()->first + "'");
    }
    validate_config(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void validate_config(const RunConfig& cfg) {
    if (cfg.system == SystemKind::chain) {
        if (cfg.n_sites < 2 || cfg.n_sites % 2 != 0) {
            throw ConfigError("config: key 'system.n_sites' must be even and >= 2");
        }
    }
    if (cfg.system == SystemKind::single_qubit && !(cfg.j > 0.0)) {
        throw ConfigError("config: key 'system.j' must be positive");
    }
    if (cfg.protocol.t_f < 0.0) throw ConfigError("config: key 'protocol.t_f' must be >= 0");
    if (!(cfg.t_max >= cfg.protocol.t_f)) {
        throw ConfigError("config: key 'run.t_max' must be >= protocol.t_f");
    }
    if (!(cfg.dt_out > 0.0)) throw ConfigError("config: key 'run.dt_out' must be positive");
    if (cfg.mode == RunMode::trajectories && cfg.trajectories < 1) {
        throw ConfigError("config: key 'run.trajectories' must be >= 1");
    }
    if (cfg.mode != RunMode::noiseless && !cfg.noise.has_value()) {
        throw ConfigError("config: section 'noise' is required unless run.mode = noiseless");
    }
    if (cfg.noise && !(cfg.noise->xi >= 0.0)) {
        throw ConfigError("config: key 'noise.xi' must be >= 0");
    }
    if (cfg.noise && !(cfg.noise->tau > 0.0)) {
        throw ConfigError("config: key 'noise.tau_n' must be positive");
    }
    if (cfg.system == SystemKind::single_qubit && cfg.mode != RunMode::noiseless) {
        throw ConfigError(
            "config: key 'run.mode' must be noiseless for system.kind = single_qubit");
    }
    if (cfg.t_star && (*cfg.t_star < 0.0 || *cfg.t_star > cfg.t_max)) {
        throw ConfigError("config: key 'run.t_star' must lie in [0, run.t_max]");
    }
    if (!(cfg.integrator.rtol > 0.0) || !(cfg.integrator.atol > 0.0)) {
        throw ConfigError("config: keys 'integrator.rtol'/'integrator.atol' must be positive");
    }
    if (!(cfg.integrator.rk4_step > 0.0)) {
        throw ConfigError("config: key 'integrator.rk4_step' must be positive");
    }
    if (cfg.integrator.max_step < 0.0) {
        throw ConfigError("config: key 'integrator.max_step' must be >= 0");
    }
}

}  // namespace isingqb
