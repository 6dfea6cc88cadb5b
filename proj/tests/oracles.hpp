// oracles.hpp — test-only reference implementations kept independent of the
// library code paths they check: adaptive Simpson quadrature, the closed-form
// constant-Hamiltonian propagator, and simple sample statistics.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

inline double simpson_recurse(const std::function<double(double)>& f, double a, double b,
                              double fa, double fm, double fb, double whole, double tol,
                              int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    if (b <= a) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 40);
}

// exp(-i H t) rho exp(+i H t) for a constant real symmetric 2x2 Hamiltonian,
// via the axis-angle form of the propagator.
inline Eigen::Matrix2cd rotate_constant(const Eigen::Matrix2d& h, const Eigen::Matrix2cd& rho,
                                        double t) {
    using cplx = std::complex<double>;
    const double hx = h(0, 1);
    const double hz = h(0, 0);
    const double w = std::hypot(hx, hz);
    Eigen::Matrix2cd u;
    if (w == 0.0) {
        u.setIdentity();
    } else {
        const double cs = std::cos(w * t);
        const double sn = std::sin(w * t) / w;
        u << cplx(cs, -sn * hz), cplx(0.0, -sn * hx), cplx(0.0, -sn * hx), cplx(cs, sn * hz);
    }
    return u * rho * u.adjoint();
}

inline double mean(std::span<const double> xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    return m / static_cast<double>(xs.size());
}

inline double variance(std::span<const double> xs) {
    const double m = mean(xs);
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    return v / static_cast<double>(xs.size() - 1);
}

// Standard error of the mean estimated from nb batch means; robust against
// serial correlation for batch length well above the correlation time.
inline double batch_se(std::span<const double> xs, std::size_t nb = 50) {
    const std::size_t len = xs.size() / nb;
    std::vector<double> batches(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        double m = 0.0;
        for (std::size_t i = 0; i < len; ++i) m += xs[b * len + i];
        batches[b] = m / static_cast<double>(len);
    }
    return std::sqrt(variance(batches) / static_cast<double>(nb));
}

}  // namespace oracles
