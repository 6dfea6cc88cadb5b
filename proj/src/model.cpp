#include "isingqb/model.hpp"

#include <cmath>
#include <stdexcept>

namespace isingqb {

std::vector<double> quasimomenta(int n_sites) {
    if (n_sites < 2 || n_sites % 2 != 0) {
        throw std::invalid_argument("quasimomenta: n_sites must be even and >= 2, got " +
                                    std::to_string(n_sites));
    }
    std::vector<double> ks(static_cast<std::size_t>(n_sites / 2));
    for (int l = 1; l <= n_sites / 2; ++l) {
        ks[static_cast<std::size_t>(l - 1)] = (2.0 * l - 1.0) * M_PI / n_sites;
    }
    return ks;
}

ChainSpec ChainSpec::make(int n_sites, double h_i) {
    ChainSpec spec;
    spec.n_sites = n_sites;
    spec.h_i = h_i;
    spec.modes = quasimomenta(n_sites);
    return spec;
}

Mat2 mode_hamiltonian(double k, double h) {
    const double a = 2.0 * (h - std::cos(k));
    const double b = 2.0 * std::sin(k);
    Mat2 m;
    m << a, b, b, -a;
    return m;
}

ModeSpectrum mode_spectrum(double k, double h) {
    const double dh = h - std::cos(k);
    const double s = std::sin(k);
    const double eps = 2.0 * std::sqrt(dh * dh + s * s);
    return {-eps, eps};
}

ModeEigenSystem mode_eigensystem(double k, double h) {
    ModeEigenSystem sys;
    const double a2 = 2.0 * (h - std::cos(k));
    const double b2 = 2.0 * std::sin(k);
    const double eps = std::sqrt(a2 * a2 + b2 * b2);
    sys.eps_minus = -eps;
    sys.eps_plus = eps;
    // (a2 - eps, b2) is the eps_minus eigenvector; b2 > 0 on (0, pi) fixes the gauge.
    sys.norm = std::hypot(a2 - eps, b2);
    sys.a = (a2 - eps) / sys.norm;
    sys.b = b2 / sys.norm;
    sys.chi_minus << sys.a, sys.b;
    sys.chi_plus << -sys.b, sys.a;
    return sys;
}

Mat2c mode_ground_state(double k, double h) {
    const ModeEigenSystem sys = mode_eigensystem(k, h);
    return (sys.chi_minus * sys.chi_minus.transpose()).cast<std::complex<double>>();
}

QubitBattery qubit_battery(double h_i, double j) {
    if (j <= 0.0) {
        throw std::invalid_argument("qubit_battery: coupling J must be positive");
    }
    QubitBattery qb;
    qb.j = j;
    qb.h_i = h_i;
    qb.omega = std::sqrt(j * j + h_i * h_i);
    qb.hamiltonian << -h_i, -j, -j, h_i;
    const double nm = std::sqrt(2.0 * qb.omega * (qb.omega + h_i));
    const double np = std::sqrt(2.0 * qb.omega * (qb.omega - h_i));
    qb.minus << (h_i + qb.omega) / nm, j / nm;
    qb.plus << (h_i - qb.omega) / np, j / np;
    return qb;
}

std::array<double, 2> hermitian_eigenvalues(const Mat2c& m) {
    const double half_tr = 0.5 * std::real(m(0, 0) + m(1, 1));
    const double det = std::real(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    const double disc = std::sqrt(std::max(half_tr * half_tr - det, 0.0));
    return {half_tr - disc, half_tr + disc};
}

std::array<double, 2> symmetric_eigenvalues(const Mat2& m) {
    const double half_tr = 0.5 * (m(0, 0) + m(1, 1));
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = std::sqrt(std::max(half_tr * half_tr - det, 0.0));
    return {half_tr - disc, half_tr + disc};
}

DensityCheck check_density(const Mat2c& rho) {
    DensityCheck c;
    const Mat2c dev = rho - rho.adjoint();
    c.hermiticity = dev.cwiseAbs().maxCoeff();
    c.trace_dev = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
    const Mat2c herm = 0.5 * (rho + rho.adjoint());
    const auto eigs = hermitian_eigenvalues(herm);
    c.eig_min = eigs[0];
    c.eig_max = eigs[1];
    c.purity = std::real((rho * rho).trace());
    return c;
}

bool DensityCheck::valid(double herm_tol, double trace_tol, double eig_tol) const {
    return hermiticity <= herm_tol && trace_dev <= trace_tol && eig_min >= -eig_tol &&
           eig_max <= 1.0 + eig_tol && purity <= 1.0 + eig_tol;
}

}  // namespace isingqb
