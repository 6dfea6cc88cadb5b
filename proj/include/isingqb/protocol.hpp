// protocol.hpp — linear charging ramps and Ornstein-Uhlenbeck noise paths.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace isingqb {

// h(t) = h_i + v t for t in [0, t_f], h_f afterwards. t_f = 0 encodes a
// sudden quench: h(0) = h_i, h(t) = h_f for t > 0.
struct RampProtocol {
    double h_i = 0.0;
    double h_f = 0.0;
    double t_f = 0.0;

    std::optional<double> slope() const {
        if (t_f <= 0.0) return std::nullopt;
        return (h_f - h_i) / t_f;
    }
};

// Throws on negative t.
double field_at(const RampProtocol& protocol, double t);

struct NoiseSpec {
    double xi = 0.0;          // intensity; stationary variance is xi^2/(2 tau)
    double tau = 1.0;         // correlation time
    std::uint64_t seed = 0;
};

struct NoisePath {
    std::vector<double> t;
    std::vector<double> eta;

    // Piecewise-linear interpolation; throws outside [t.front(), t.back()].
    double value_at(double time) const;
};

// Exact AR(1) discretization of the OU process on an arbitrary strictly
// increasing grid; eta(t_0) is drawn from the stationary distribution.
// Deterministic for a given seed. xi = 0 yields an exactly zero path.
NoisePath ou_sample_path(const NoiseSpec& spec, std::span<const double> grid);

double noisy_field(const RampProtocol& protocol, const NoisePath& path, double t);

// SplitMix64; used to derive independent per-trajectory streams.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index);

// Uniform grid t0..t1 with spacing <= dt and exact endpoints.
std::vector<double> uniform_grid(double t0, double t1, double dt);

}  // namespace isingqb
