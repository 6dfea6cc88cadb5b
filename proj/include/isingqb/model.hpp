// model.hpp — mode Hamiltonians, spectra, eigenstates and battery Hamiltonians
// for the transverse-field Ising chain (positive-k 2x2 blocks) and the single qubit.

#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace isingqb {

using Mat2 = Eigen::Matrix2d;
using Mat2c = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2d;
using Vec2c = Eigen::Vector2cd;

// Quasimomenta k = (2l-1)pi/N, l = 1..N/2, strictly increasing in (0, pi).
// Each positive k stands for the paired (k, -k) block. Throws on odd or
// non-positive N.
std::vector<double> quasimomenta(int n_sites);

struct ChainSpec {
    int n_sites = 0;
    double h_i = 0.0;
    std::vector<double> modes;

    static ChainSpec make(int n_sites, double h_i);
};

// H_{0,k}(h) = [[2(h-cos k), 2 sin k], [2 sin k, -2(h-cos k)]]
Mat2 mode_hamiltonian(double k, double h);

struct ModeSpectrum {
    double minus = 0.0;  // -2 sqrt((h-cos k)^2 + sin^2 k)
    double plus = 0.0;
};
ModeSpectrum mode_spectrum(double k, double h);

// Instantaneous eigensystem of H_{0,k}. Gauge: b = 2 sin k / norm > 0 on (0, pi).
struct ModeEigenSystem {
    double eps_minus = 0.0;
    double eps_plus = 0.0;
    double a = 0.0;      // chi_minus = (a, b)
    double b = 0.0;      // chi_plus  = (-b, a)
    double norm = 0.0;   // normalization before unit scaling
    Vec2 chi_minus;
    Vec2 chi_plus;
};
ModeEigenSystem mode_eigensystem(double k, double h);

// Ground-state projector |chi_minus><chi_minus| at field h.
Mat2c mode_ground_state(double k, double h);

// Single-qubit battery H_B = -J sigma_x - h_i sigma_z with eigenvalues
// -omega (ground) and +omega, omega = sqrt(J^2 + h_i^2).
struct QubitBattery {
    double j = 1.0;
    double h_i = 0.0;
    double omega = 1.0;
    Mat2 hamiltonian;
    Vec2 minus;
    Vec2 plus;
};
QubitBattery qubit_battery(double h_i, double j = 1.0);

// Diagnostics for a 2x2 density matrix: deviations from Hermiticity and
// unit trace, eigenvalue range and purity. Used by validation and tests.
struct DensityCheck {
    double hermiticity = 0.0;  // max entry of |rho - rho^dagger|
    double trace_dev = 0.0;    // |tr(rho) - 1|
    double eig_min = 0.0;
    double eig_max = 0.0;
    double purity = 0.0;       // tr(rho^2), real part

    bool valid(double herm_tol = 1e-12, double trace_tol = 1e-10,
               double eig_tol = 1e-9) const;
};
DensityCheck check_density(const Mat2c& rho);

// Eigenvalues of a Hermitian 2x2 matrix, ascending.
std::array<double, 2> hermitian_eigenvalues(const Mat2c& m);
std::array<double, 2> symmetric_eigenvalues(const Mat2& m);

}  // namespace isingqb
