#include "isingqb/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace isingqb {

double field_at(const RampProtocol& protocol, double t) {
    if (t < 0.0) {
        throw std::invalid_argument("field_at: negative time");
    }
    if (protocol.t_f <= 0.0) {
        return t > 0.0 ? protocol.h_f : protocol.h_i;
    }
    if (t >= protocol.t_f) return protocol.h_f;
    return protocol.h_i + (protocol.h_f - protocol.h_i) / protocol.t_f * t;
}

double NoisePath::value_at(double time) const {
    if (t.empty() || time < t.front() || time > t.back()) {
        throw std::out_of_range("NoisePath::value_at: time outside sampled grid");
    }
    const auto it = std::upper_bound(t.begin(), t.end(), time);
    if (it == t.begin()) return eta.front();
    if (it == t.end()) return eta.back();
    const std::size_t i = static_cast<std::size_t>(it - t.begin());
    const double w = (time - t[i - 1]) / (t[i] - t[i - 1]);
    return eta[i - 1] * (1.0 - w) + eta[i] * w;
}

NoisePath ou_sample_path(const NoiseSpec& spec, std::span<const double> grid) {
    if (grid.size() < 1) {
        throw std::invalid_argument("ou_sample_path: empty grid");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("ou_sample_path: grid must be strictly increasing");
        }
    }
    if (spec.tau <= 0.0) {
        throw std::invalid_argument("ou_sample_path: tau must be positive");
    }
    NoisePath path;
    path.t.assign(grid.begin(), grid.end());
    path.eta.resize(grid.size(), 0.0);
    if (spec.xi == 0.0) return path;

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sigma = spec.xi / std::sqrt(2.0 * spec.tau);
    path.eta[0] = sigma * gauss(rng);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double decay = std::exp(-(grid[i] - grid[i - 1]) / spec.tau);
        path.eta[i] = path.eta[i - 1] * decay +
                      sigma * std::sqrt(1.0 - decay * decay) * gauss(rng);
    }
    return path;
}

double noisy_field(const RampProtocol& protocol, const NoisePath& path, double t) {
    return field_at(protocol, t) + path.value_at(t);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

std::vector<double> uniform_grid(double t0, double t1, double dt) {
    if (!(t1 > t0) || !(dt > 0.0)) {
        throw std::invalid_argument("uniform_grid: need t1 > t0 and dt > 0");
    }
    const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-12));
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        grid[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n);
    }
    grid.front() = t0;
    grid.back() = t1;
    return grid;
}

}  // namespace isingqb
