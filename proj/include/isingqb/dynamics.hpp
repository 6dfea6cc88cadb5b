// dynamics.hpp — time evolution: single-qubit u/x/y system (RK4), mode
// von Neumann dynamics, ensemble-averaged noisy dynamics with the
// Ornstein-Uhlenbeck memory kernel, single noise realizations, and the
// exact 2^N spin-chain oracle.

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "isingqb/model.hpp"
#include "isingqb/ode.hpp"
#include "isingqb/protocol.hpp"

namespace isingqb {

struct QubitUXY {
    double u = 0.0;  // rho00 - rho11
    double x = 0.0;  // rho01 + rho10
    double y = 0.0;  // -i (rho01 - rho10)
};

// Density matrix reconstructed from (u, x, y); trace 1 by construction.
Mat2c density_from_uxy(const QubitUXY& s);

struct QubitSeries {
    std::vector<double> t;
    std::vector<QubitUXY> state;
};

struct ModeSeries {
    double k = 0.0;
    std::vector<double> t;
    std::vector<Mat2c> rho;
};

struct ModeStateSeries {
    double k = 0.0;
    std::vector<double> t;
    std::vector<Mat2c> rho;
    std::vector<Mat2c> gamma;
};

// Kernel used by the averaged noisy equations. `dressed` keeps the memory
// matrix co-rotating with H_{0,k}(t) and is the form validated against the
// trajectory ensemble; `undressed` drops that rotation and reproduces the
// overdamped reference behavior. Default everywhere is dressed.
enum class NoiseKernel { dressed, undressed };

// u' = 2 J y, x' = -2 h(t) y, y' = -2 J u + 2 h(t) x, from the battery
// ground state u = h_i/omega, x = J/omega, y = 0. Fixed-step RK4 with
// step <= settings.rk4_step, split at the ramp end.
QubitSeries evolve_qubit_uxy(const RampProtocol& protocol, double j,
                             std::span<const double> t_grid,
                             const IntegratorSettings& settings);

// Von Neumann evolution of one mode from its ground state at h_i.
// t_grid must be sorted and start at 0.
ModeSeries evolve_mode_noiseless(double k, const RampProtocol& protocol,
                                 std::span<const double> t_grid,
                                 const IntegratorSettings& settings);

// Ensemble-averaged noisy evolution: rho' = -i[H0k, rho] - xi^2/(2 tau)[H1, Gamma],
// Gamma' = -Gamma/tau (- i[H0k, Gamma] if dressed) + [H1, rho], Gamma(0) = 0.
ModeStateSeries evolve_mode_noisy_averaged(double k, const RampProtocol& protocol,
                                           const NoiseSpec& noise,
                                           std::span<const double> t_grid,
                                           const IntegratorSettings& settings,
                                           NoiseKernel kernel = NoiseKernel::dressed);

// One noise realization: unitary evolution under h(t) + eta(t); the path grid
// must cover t_grid.
ModeSeries evolve_mode_trajectory(double k, const RampProtocol& protocol,
                                  const NoisePath& path,
                                  std::span<const double> t_grid,
                                  const IntegratorSettings& settings);

// From-state propagators used by the public operations, by segment chaining
// and by property tests. `sign` = -1 integrates the time-reversed commutator.
Mat2c propagate_mode(const Mat2c& rho0, double k, const RampProtocol& protocol,
                     double t0, double t1, const IntegratorSettings& settings,
                     double sign = 1.0);
std::pair<Mat2c, Mat2c> propagate_mode_averaged(const Mat2c& rho0, const Mat2c& gamma0,
                                                double k, const RampProtocol& protocol,
                                                const NoiseSpec& noise, double t0, double t1,
                                                const IntegratorSettings& settings,
                                                NoiseKernel kernel = NoiseKernel::dressed);

// Mean and per-entry standard errors of M noise realizations of one mode.
// Trajectory m uses sub_seed(noise.seed, m); the reduction order is fixed,
// so results are bit-stable for a given seed regardless of worker count.
struct TrajectoryEnsemble {
    double k = 0.0;
    int n_trajectories = 0;
    std::vector<double> t;
    std::vector<Mat2c> mean;
    std::vector<Mat2> se_real;
    std::vector<Mat2> se_imag;
};
TrajectoryEnsemble trajectory_ensemble(double k, const RampProtocol& protocol,
                                       const NoiseSpec& noise,
                                       std::span<const double> t_grid,
                                       const IntegratorSettings& settings, int n_trajectories,
                                       double path_dt = 0.0);  // 0 -> tau/50

// Mode-resolved chain state history: rho[mode][time] on a shared grid.
struct ChainEvolution {
    ChainSpec spec;
    std::vector<double> t;
    std::vector<std::vector<Mat2c>> rho;
};

// Chain drivers; modes run independently (parallel, deterministic order).
ChainEvolution evolve_chain_noiseless(const ChainSpec& spec, const RampProtocol& protocol,
                                      std::span<const double> t_grid,
                                      const IntegratorSettings& settings);
ChainEvolution evolve_chain_averaged(const ChainSpec& spec, const RampProtocol& protocol,
                                     const NoiseSpec& noise, std::span<const double> t_grid,
                                     const IntegratorSettings& settings,
                                     NoiseKernel kernel = NoiseKernel::dressed);

// Trajectory means for the whole chain. One global noise path is shared by
// all modes within a realization (the physical field is a single scalar).
ChainEvolution evolve_chain_trajectory_mean(const ChainSpec& spec,
                                            const RampProtocol& protocol,
                                            const NoiseSpec& noise,
                                            std::span<const double> t_grid,
                                            const IntegratorSettings& settings,
                                            int n_trajectories, double path_dt = 0.0);

// Brute-force oracle: evolves the full 2^N spin chain (periodic boundaries)
// from its exact ground state and returns the stored energy per site on
// t_grid. Noiseless protocols only; N even, N <= 10.
std::vector<double> exact_chain_oracle(int n_sites, const RampProtocol& protocol,
                                       std::span<const double> t_grid,
                                       const IntegratorSettings& settings);

// Ground-state energy of the 2^N chain at field h (exact diagonalization).
double exact_chain_ground_energy(int n_sites, double h);

}  // namespace isingqb
