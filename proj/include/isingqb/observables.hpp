// observables.hpp — stored energy, ergotropy via passive states, efficiency,
// mode-resolved excitation probability, the adiabatic approximation and the
// harmonic oscillation fit.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "isingqb/dynamics.hpp"
#include "isingqb/model.hpp"
#include "isingqb/protocol.hpp"

namespace isingqb {

// Tr[(rho_t - rho_0) H_batt]; real for Hermitian inputs.
double stored_energy_mode(const Mat2c& rho_t, const Mat2c& rho_0, const Mat2& h_batt);

// (sum of mode energies) / N; the list must hold all N/2 positive modes.
double stored_energy_per_site(std::span<const double> mode_energies, int n_sites);

// Tr[rho H] minus the passive-state energy (larger population on the lower
// level). Non-negative up to roundoff.
double ergotropy_2x2(const Mat2c& rho, const Mat2& hamiltonian);

inline constexpr double kStoredEnergyFloor = 1e-12;

// ergotropy / stored energy; empty when the stored energy is below the floor
// (the t = 0 value is a genuine 0/0).
std::optional<double> efficiency(double ergotropy, double stored_energy);

// P_k = <chi_plus(h_i)| rho |chi_plus(h_i)>: population of the upper battery
// eigenstate, always in the h_i eigenbasis.
double excitation_probability(const Mat2c& rho_tstar, double k, double h_i);

// Instantaneous gap Omega(t) = 2 sqrt(J^2 + h(t)^2) of the driven qubit.
double instantaneous_gap(const RampProtocol& protocol, double j, double t);

// Closed-form stored energy when the state tracks the instantaneous ground state.
double adiabatic_energy(const RampProtocol& protocol, double j, double t);

// phi(t) = integral of Omega from 0 to t (composite Gauss-Legendre).
double phase_integral(const RampProtocol& protocol, double j, double t);
std::vector<double> phase_series(const RampProtocol& protocol, double j,
                                 std::span<const double> t_grid);

struct AdiabaticDecomposition {
    std::vector<double> t;
    std::vector<double> dE_slow;
    std::vector<double> phase;
    double a_fit = 0.0;
    double phi_0 = 0.0;
    double residual_rms = 0.0;
};

// Least-squares fit of dE_numeric - dE_slow against {cos phi, sin phi} with a
// constant amplitude over the window: recovers a_fit and phi_0 of
// a_fit cos(phi - phi_0). Throws if the phase span is below pi (degenerate
// design matrix).
AdiabaticDecomposition fit_oscillations(std::span<const double> t,
                                        std::span<const double> dE_numeric,
                                        std::span<const double> dE_slow,
                                        std::span<const double> phase);

// Per-site figures of merit on a common grid. efficiency is empty where the
// stored energy is below the floor.
struct ObservableSeries {
    std::vector<double> t;
    std::vector<double> stored;
    std::vector<double> ergotropy;
    std::vector<std::optional<double>> eff;
};

ObservableSeries chain_observables(const ChainEvolution& evolution);
ObservableSeries qubit_observables(const QubitSeries& series, const QubitBattery& battery);

// P_k for every mode at the grid node closest to t_star.
std::vector<double> excitation_probabilities(const ChainEvolution& evolution, double t_star);

}  // namespace isingqb
