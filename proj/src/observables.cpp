#include "isingqb/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isingqb/util.hpp"

namespace isingqb {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNode[8] = {-0.9602898564975363, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[8] = {0.1012285362903763, 0.2223810344533745,
                                 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss_legendre(F&& f, double a, double b, double max_panel) {
    if (b <= a) return 0.0;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        const double mid = 0.5 * (pa + pb);
        const double half = 0.5 * (pb - pa);
        double acc = 0.0;
        for (int i = 0; i < 8; ++i) acc += kGlWeight[i] * f(mid + half * kGlNode[i]);
        total += half * acc;
    }
    return total;
}

}  // namespace

double stored_energy_mode(const Mat2c& rho_t, const Mat2c& rho_0, const Mat2& h_batt) {
    const Mat2c h = h_batt.cast<std::complex<double>>();
    return std::real(((rho_t - rho_0) * h).trace());
}

double stored_energy_per_site(std::span<const double> mode_energies, int n_sites) {
    if (n_sites < 2 || n_sites % 2 != 0) {
        throw std::invalid_argument("stored_energy_per_site: n_sites must be even and >= 2");
    }
    if (mode_energies.size() != static_cast<std::size_t>(n_sites / 2)) {
        throw std::invalid_argument(
            "stored_energy_per_site: expected one energy per positive mode (N/2 values)");
    }
    double total = 0.0;
    for (double e : mode_energies) total += e;
    return total / n_sites;
}

double ergotropy_2x2(const Mat2c& rho, const Mat2& hamiltonian) {
    const auto p = hermitian_eigenvalues(rho);        // ascending: p_min, p_max
    const auto e = symmetric_eigenvalues(hamiltonian);  // ascending: e_min, e_max
    const double energy = std::real((rho * hamiltonian.cast<std::complex<double>>()).trace());
    const double passive = p[1] * e[0] + p[0] * e[1];
    return energy - passive;
}

std::optional<double> efficiency(double ergotropy, double stored_energy) {
    if (!(stored_energy > kStoredEnergyFloor)) return std::nullopt;
    return ergotropy / stored_energy;
}

double excitation_probability(const Mat2c& rho_tstar, double k, double h_i) {
    const ModeEigenSystem sys = mode_eigensystem(k, h_i);
    const Vec2c v = sys.chi_plus.cast<std::complex<double>>();
    return std::real(v.dot(rho_tstar * v));  // Eigen dot conjugates the left operand
}

double instantaneous_gap(const RampProtocol& protocol, double j, double t) {
    const double h = field_at(protocol, t);
    return 2.0 * std::sqrt(j * j + h * h);
}

double adiabatic_energy(const RampProtocol& protocol, double j, double t) {
    const double h = field_at(protocol, t);
    const double w = std::sqrt(j * j + h * h);
    const double wi = std::sqrt(j * j + protocol.h_i * protocol.h_i);
    return -protocol.h_i * (h / w - protocol.h_i / wi) - j * j * (1.0 / w - 1.0 / wi);
}

double phase_integral(const RampProtocol& protocol, double j, double t) {
    if (t < 0.0) throw std::invalid_argument("phase_integral: negative time");
    if (t == 0.0) return 0.0;
    auto omega = [&](double s) { return instantaneous_gap(protocol, j, s); };
    const double t_ramp = std::min(t, protocol.t_f);
    double phi = gauss_legendre(omega, 0.0, t_ramp, 1.0);
    if (t > protocol.t_f) {
        phi += 2.0 * std::sqrt(j * j + protocol.h_f * protocol.h_f) * (t - protocol.t_f);
    }
    return phi;
}

std::vector<double> phase_series(const RampProtocol& protocol, double j,
                                 std::span<const double> t_grid) {
    std::vector<double> phase(t_grid.size(), 0.0);
    if (t_grid.empty()) return phase;
    auto omega = [&](double s) { return instantaneous_gap(protocol, j, s); };
    phase[0] = phase_integral(protocol, j, t_grid[0]);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double a = t_grid[i - 1];
        const double b = t_grid[i];
        double inc;
        if (a >= protocol.t_f) {
            inc = 2.0 * std::sqrt(j * j + protocol.h_f * protocol.h_f) * (b - a);
        } else if (b <= protocol.t_f) {
            inc = gauss_legendre(omega, a, b, 1.0);
        } else {
            inc = gauss_legendre(omega, a, protocol.t_f, 1.0) +
                  2.0 * std::sqrt(j * j + protocol.h_f * protocol.h_f) * (b - protocol.t_f);
        }
        phase[i] = phase[i - 1] + inc;
    }
    return phase;
}

AdiabaticDecomposition fit_oscillations(std::span<const double> t,
                                        std::span<const double> dE_numeric,
                                        std::span<const double> dE_slow,
                                        std::span<const double> phase) {
    const std::size_t n = t.size();
    if (dE_numeric.size() != n || dE_slow.size() != n || phase.size() != n || n < 3) {
        throw std::invalid_argument("fit_oscillations: series must be aligned, length >= 3");
    }
    const auto [phi_lo, phi_hi] = std::minmax_element(phase.begin(), phase.end());
    if (*phi_hi - *phi_lo < M_PI) {
        throw std::runtime_error(
            "fit_oscillations: degenerate design matrix (phase span below pi)");
    }
    double scc = 0.0, scs = 0.0, sss = 0.0, bc = 0.0, bs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = std::cos(phase[i]);
        const double s = std::sin(phase[i]);
        const double r = dE_numeric[i] - dE_slow[i];
        scc += c * c;
        scs += c * s;
        sss += s * s;
        bc += c * r;
        bs += s * r;
    }
    const double det = scc * sss - scs * scs;
    if (!(std::abs(det) > 1e-12 * n * n)) {
        throw std::runtime_error("fit_oscillations: degenerate design matrix");
    }
    const double alpha = (sss * bc - scs * bs) / det;
    const double beta = (scc * bs - scs * bc) / det;

    AdiabaticDecomposition out;
    out.t.assign(t.begin(), t.end());
    out.dE_slow.assign(dE_slow.begin(), dE_slow.end());
    out.phase.assign(phase.begin(), phase.end());
    out.a_fit = std::hypot(alpha, beta);
    out.phi_0 = std::atan2(beta, alpha);
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = dE_numeric[i] - dE_slow[i] -
                         (alpha * std::cos(phase[i]) + beta * std::sin(phase[i]));
        ss_res += r * r;
    }
    out.residual_rms = std::sqrt(ss_res / n);
    return out;
}

ObservableSeries chain_observables(const ChainEvolution& evolution) {
    const std::size_t n_modes = evolution.spec.modes.size();
    const std::size_t n_times = evolution.t.size();
    if (evolution.rho.size() != n_modes) {
        throw std::invalid_argument("chain_observables: mode count mismatch");
    }
    std::vector<Mat2> batteries(n_modes);
    for (std::size_t mi = 0; mi < n_modes; ++mi) {
        batteries[mi] = mode_hamiltonian(evolution.spec.modes[mi], evolution.spec.h_i);
    }
    ObservableSeries out;
    out.t = evolution.t;
    out.stored.resize(n_times);
    out.ergotropy.resize(n_times);
    out.eff.resize(n_times);
    std::vector<double> mode_de(n_modes), mode_erg(n_modes);
    for (std::size_t ti = 0; ti < n_times; ++ti) {
        for (std::size_t mi = 0; mi < n_modes; ++mi) {
            mode_de[mi] =
                stored_energy_mode(evolution.rho[mi][ti], evolution.rho[mi][0], batteries[mi]);
            mode_erg[mi] = ergotropy_2x2(evolution.rho[mi][ti], batteries[mi]);
        }
        out.stored[ti] = stored_energy_per_site(mode_de, evolution.spec.n_sites);
        out.ergotropy[ti] = stored_energy_per_site(mode_erg, evolution.spec.n_sites);
        out.eff[ti] = efficiency(out.ergotropy[ti], out.stored[ti]);
    }
    return out;
}

ObservableSeries qubit_observables(const QubitSeries& series, const QubitBattery& battery) {
    ObservableSeries out;
    out.t = series.t;
    const std::size_t n = series.t.size();
    out.stored.resize(n);
    out.ergotropy.resize(n);
    out.eff.resize(n);
    const QubitUXY s0 = series.state.front();
    for (std::size_t i = 0; i < n; ++i) {
        const QubitUXY& s = series.state[i];
        out.stored[i] =
            -battery.h_i * (s.u - s0.u) - battery.j * (s.x - s0.x);
        out.ergotropy[i] = ergotropy_2x2(density_from_uxy(s), battery.hamiltonian);
        out.eff[i] = efficiency(out.ergotropy[i], out.stored[i]);
    }
    return out;
}

std::vector<double> excitation_probabilities(const ChainEvolution& evolution, double t_star) {
    const auto it = std::min_element(
        evolution.t.begin(), evolution.t.end(),
        [t_star](double a, double b) { return std::abs(a - t_star) < std::abs(b - t_star); });
    const std::size_t ti = static_cast<std::size_t>(it - evolution.t.begin());
    std::vector<double> pk(evolution.spec.modes.size());
    for (std::size_t mi = 0; mi < pk.size(); ++mi) {
        pk[mi] = excitation_probability(evolution.rho[mi][ti], evolution.spec.modes[mi],
                                        evolution.spec.h_i);
    }
    return pk;
}

}  // namespace isingqb
