#include "isingqb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "isingqb/util.hpp"

namespace isingqb {

namespace {

using cplx = std::complex<double>;
constexpr cplx kImag{0.0, 1.0};

void pack(const Mat2c& m, double* p) {
    p[0] = m(0, 0).real();
    p[1] = m(0, 1).real();
    p[2] = m(1, 0).real();
    p[3] = m(1, 1).real();
    p[4] = m(0, 0).imag();
    p[5] = m(0, 1).imag();
    p[6] = m(1, 0).imag();
    p[7] = m(1, 1).imag();
}

Mat2c unpack(const double* p) {
    Mat2c m;
    m << cplx(p[0], p[4]), cplx(p[1], p[5]), cplx(p[2], p[6]), cplx(p[3], p[7]);
    return m;
}

Mat2c mode_hamiltonian_c(double cos_k, double sin_k, double h) {
    const double a = 2.0 * (h - cos_k);
    const double b = 2.0 * sin_k;
    Mat2c m;
    m << cplx(a, 0.0), cplx(b, 0.0), cplx(b, 0.0), cplx(-a, 0.0);
    return m;
}

// [diag(2,-2), X]
Mat2c h1_commutator(const Mat2c& x) {
    Mat2c c = Mat2c::Zero();
    c(0, 1) = 4.0 * x(0, 1);
    c(1, 0) = -4.0 * x(1, 0);
    return c;
}

void check_grid(std::span<const double> t_grid, bool require_zero_start) {
    if (t_grid.empty()) throw std::invalid_argument("dynamics: empty time grid");
    if (require_zero_start && t_grid.front() != 0.0) {
        throw std::invalid_argument("dynamics: time grid must start at t = 0");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw std::invalid_argument("dynamics: time grid must be strictly increasing");
        }
    }
}

// Drives y across t_grid, splitting integration at interior breakpoints;
// capture(i) is called with the state holding the value at t_grid[i].
template <class RHS, class Capture>
void integrate_grid(Dop853& stepper, std::span<const double> t_grid,
                    std::span<const double> breakpoints, std::span<double> y, RHS&& rhs,
                    Capture&& capture) {
    capture(0);
    double t = t_grid[0];
    std::size_t bp = 0;
    for (std::size_t gi = 1; gi < t_grid.size(); ++gi) {
        const double target = t_grid[gi];
        while (bp < breakpoints.size() && breakpoints[bp] <= t + 1e-13) ++bp;
        while (bp < breakpoints.size() && breakpoints[bp] < target - 1e-13) {
            stepper.integrate(t, breakpoints[bp], y, rhs);
            t = breakpoints[bp];
            ++bp;
        }
        stepper.integrate(t, target, y, rhs);
        t = target;
        capture(gi);
    }
}

std::vector<double> ramp_breakpoints(const RampProtocol& protocol, double t0, double t1) {
    std::vector<double> bps;
    if (protocol.t_f > t0 && protocol.t_f < t1) bps.push_back(protocol.t_f);
    return bps;
}

}  // namespace

Mat2c density_from_uxy(const QubitUXY& s) {
    Mat2c rho;
    rho << cplx(0.5 * (1.0 + s.u), 0.0), cplx(0.5 * s.x, -0.5 * s.y),
        cplx(0.5 * s.x, 0.5 * s.y), cplx(0.5 * (1.0 - s.u), 0.0);
    return rho;
}

QubitSeries evolve_qubit_uxy(const RampProtocol& protocol, double j,
                             std::span<const double> t_grid,
                             const IntegratorSettings& settings) {
    check_grid(t_grid, true);
    if (!(settings.rk4_step > 0.0)) {
        throw std::invalid_argument("evolve_qubit_uxy: rk4_step must be positive");
    }
    const double omega = std::sqrt(j * j + protocol.h_i * protocol.h_i);
    QubitSeries series;
    series.t.assign(t_grid.begin(), t_grid.end());
    series.state.resize(t_grid.size());

    double y[3] = {protocol.h_i / omega, j / omega, 0.0};
    auto rhs = [&](double t, std::span<const double> s, std::span<double> ds) {
        const double h = field_at(protocol, t);
        ds[0] = 2.0 * j * s[2];
        ds[1] = -2.0 * h * s[2];
        ds[2] = -2.0 * j * s[0] + 2.0 * h * s[1];
    };
    auto step_piece = [&](double a, double b) {
        if (b <= a) return;
        const long n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / settings.rk4_step)));
        rk4_integrate(a, b, std::span<double>(y, 3), n, rhs);
    };
    series.state[0] = {y[0], y[1], y[2]};
    for (std::size_t gi = 1; gi < t_grid.size(); ++gi) {
        double a = t_grid[gi - 1];
        const double b = t_grid[gi];
        if (protocol.t_f > a && protocol.t_f < b) {
            step_piece(a, protocol.t_f);
            a = protocol.t_f;
        }
        step_piece(a, b);
        series.state[gi] = {y[0], y[1], y[2]};
    }
    return series;
}

ModeSeries evolve_mode_noiseless(double k, const RampProtocol& protocol,
                                 std::span<const double> t_grid,
                                 const IntegratorSettings& settings) {
    check_grid(t_grid, true);
    ModeSeries series;
    series.k = k;
    series.t.assign(t_grid.begin(), t_grid.end());
    series.rho.resize(t_grid.size());

    const double cos_k = std::cos(k);
    const double sin_k = std::sin(k);
    double y[8];
    pack(mode_ground_state(k, protocol.h_i), y);
    auto rhs = [&](double t, std::span<const double> s, std::span<double> ds) {
        const Mat2c rho = unpack(s.data());
        const Mat2c h = mode_hamiltonian_c(cos_k, sin_k, field_at(protocol, t));
        const Mat2c drho = -kImag * (h * rho - rho * h);
        pack(drho, ds.data());
    };
    Dop853 stepper(8, settings);
    const auto bps = ramp_breakpoints(protocol, t_grid.front(), t_grid.back());
    integrate_grid(stepper, t_grid, bps, std::span<double>(y, 8), rhs,
                   [&](std::size_t i) { series.rho[i] = unpack(y); });
    return series;
}

ModeStateSeries evolve_mode_noisy_averaged(double k, const RampProtocol& protocol,
                                           const NoiseSpec& noise,
                                           std::span<const double> t_grid,
                                           const IntegratorSettings& settings,
                                           NoiseKernel kernel) {
    check_grid(t_grid, true);
    ModeStateSeries series;
    series.k = k;
    series.t.assign(t_grid.begin(), t_grid.end());
    series.rho.resize(t_grid.size());
    series.gamma.resize(t_grid.size());

    const double cos_k = std::cos(k);
    const double sin_k = std::sin(k);
    const double gain = noise.xi * noise.xi / (2.0 * noise.tau);
    const bool dressed = kernel == NoiseKernel::dressed;
    double y[16];
    pack(mode_ground_state(k, protocol.h_i), y);
    pack(Mat2c::Zero(), y + 8);
    auto rhs = [&](double t, std::span<const double> s, std::span<double> ds) {
        const Mat2c rho = unpack(s.data());
        const Mat2c gamma = unpack(s.data() + 8);
        const Mat2c h = mode_hamiltonian_c(cos_k, sin_k, field_at(protocol, t));
        const Mat2c drho = -kImag * (h * rho - rho * h) - gain * h1_commutator(gamma);
        Mat2c dgamma = -gamma / noise.tau + h1_commutator(rho);
        if (dressed) dgamma -= kImag * (h * gamma - gamma * h);
        pack(drho, ds.data());
        pack(dgamma, ds.data() + 8);
    };
    Dop853 stepper(16, settings);
    const auto bps = ramp_breakpoints(protocol, t_grid.front(), t_grid.back());
    integrate_grid(stepper, t_grid, bps, std::span<double>(y, 16), rhs, [&](std::size_t i) {
        series.rho[i] = unpack(y);
        series.gamma[i] = unpack(y + 8);
    });
    return series;
}

ModeSeries evolve_mode_trajectory(double k, const RampProtocol& protocol,
                                  const NoisePath& path, std::span<const double> t_grid,
                                  const IntegratorSettings& settings) {
    check_grid(t_grid, true);
    if (path.t.empty() || path.t.front() > t_grid.front() || path.t.back() < t_grid.back()) {
        throw std::invalid_argument("evolve_mode_trajectory: path grid must cover t_grid");
    }
    ModeSeries series;
    series.k = k;
    series.t.assign(t_grid.begin(), t_grid.end());
    series.rho.resize(t_grid.size());

    const double cos_k = std::cos(k);
    const double sin_k = std::sin(k);
    double y[8];
    pack(mode_ground_state(k, protocol.h_i), y);
    auto rhs = [&](double t, std::span<const double> s, std::span<double> ds) {
        const double tc = std::clamp(t, path.t.front(), path.t.back());
        const Mat2c rho = unpack(s.data());
        const Mat2c h =
            mode_hamiltonian_c(cos_k, sin_k, field_at(protocol, t) + path.value_at(tc));
        const Mat2c drho = -kImag * (h * rho - rho * h);
        pack(drho, ds.data());
    };
    // split at every path node (eta is piecewise linear) and at the ramp end
    std::vector<double> bps;
    bps.reserve(path.t.size() + 1);
    for (double tn : path.t) {
        if (tn > t_grid.front() && tn < t_grid.back()) bps.push_back(tn);
    }
    if (protocol.t_f > t_grid.front() && protocol.t_f < t_grid.back()) {
        bps.push_back(protocol.t_f);
    }
    std::sort(bps.begin(), bps.end());
    Dop853 stepper(8, settings);
    integrate_grid(stepper, t_grid, bps, std::span<double>(y, 8), rhs,
                   [&](std::size_t i) { series.rho[i] = unpack(y); });
    return series;
}

Mat2c propagate_mode(const Mat2c& rho0, double k, const RampProtocol& protocol, double t0,
                     double t1, const IntegratorSettings& settings, double sign) {
    const double cos_k = std::cos(k);
    const double sin_k = std::sin(k);
    double y[8];
    pack(rho0, y);
    auto rhs = [&](double t, std::span<const double> s, std::span<double> ds) {
        const Mat2c rho = unpack(s.data());
        const Mat2c h = mode_hamiltonian_c(cos_k, sin_k, field_at(protocol, t));
        const Mat2c drho = -sign * kImag * (h * rho - rho * h);
        pack(drho, ds.data());
    };
    Dop853 stepper(8, settings);
    const double grid[2] = {t0, t1};
    const auto bps = ramp_breakpoints(protocol, t0, t1);
    integrate_grid(stepper, std::span<const double>(grid, 2), bps, std::span<double>(y, 8), rhs,
                   [](std::size_t) {});
    return unpack(y);
}

std::pair<Mat2c, Mat2c> propagate_mode_averaged(const Mat2c& rho0, const Mat2c& gamma0,
                                                double k, const RampProtocol& protocol,
                                                const NoiseSpec& noise, double t0, double t1,
                                                const IntegratorSettings& settings,
                                                NoiseKernel kernel) {
    const double cos_k = std::cos(k);
    const double sin_k = std::sin(k);
    const double gain = noise.xi * noise.xi / (2.0 * noise.tau);
    const bool dressed = kernel == NoiseKernel::dressed;
    double y[16];
    pack(rho0, y);
    pack(gamma0, y + 8);
    auto rhs = [&](double t, std::span<const double> s, std::span<double> ds) {
        const Mat2c rho = unpack(s.data());
        const Mat2c gamma = unpack(s.data() + 8);
        const Mat2c h = mode_hamiltonian_c(cos_k, sin_k, field_at(protocol, t));
        const Mat2c drho = -kImag * (h * rho - rho * h) - gain * h1_commutator(gamma);
        Mat2c dgamma = -gamma / noise.tau + h1_commutator(rho);
        if (dressed) dgamma -= kImag * (h * gamma - gamma * h);
        pack(drho, ds.data());
        pack(dgamma, ds.data() + 8);
    };
    Dop853 stepper(16, settings);
    const double grid[2] = {t0, t1};
    const auto bps = ramp_breakpoints(protocol, t0, t1);
    integrate_grid(stepper, std::span<const double>(grid, 2), bps, std::span<double>(y, 16), rhs,
                   [](std::size_t) {});
    return {unpack(y), unpack(y + 8)};
}

namespace {

// Accumulates entrywise sums and sums of squares over trajectories in fixed
// chunk order; chunk partials are combined in index order afterwards.
struct EnsembleAccumulator {
    std::size_t n_times = 0;
    std::vector<Mat2c> sum;
    std::vector<Mat2> sum_sq_re;
    std::vector<Mat2> sum_sq_im;

    explicit EnsembleAccumulator(std::size_t nt)
        : n_times(nt),
          sum(nt, Mat2c::Zero()),
          sum_sq_re(nt, Mat2::Zero()),
          sum_sq_im(nt, Mat2::Zero()) {}

    void add(std::size_t ti, const Mat2c& rho) {
        sum[ti] += rho;
        sum_sq_re[ti] += rho.real().cwiseProduct(rho.real());
        sum_sq_im[ti] += rho.imag().cwiseProduct(rho.imag());
    }

    void merge(const EnsembleAccumulator& other) {
        for (std::size_t ti = 0; ti < n_times; ++ti) {
            sum[ti] += other.sum[ti];
            sum_sq_re[ti] += other.sum_sq_re[ti];
            sum_sq_im[ti] += other.sum_sq_im[ti];
        }
    }
};

constexpr std::size_t kEnsembleChunk = 32;

}  // namespace

TrajectoryEnsemble trajectory_ensemble(double k, const RampProtocol& protocol,
                                       const NoiseSpec& noise,
                                       std::span<const double> t_grid,
                                       const IntegratorSettings& settings, int n_trajectories,
                                       double path_dt) {
    check_grid(t_grid, true);
    if (n_trajectories < 1) {
        throw std::invalid_argument("trajectory_ensemble: need at least one trajectory");
    }
    if (path_dt <= 0.0) path_dt = noise.tau / 50.0;
    const auto path_grid = uniform_grid(t_grid.front(), t_grid.back(), path_dt);

    const std::size_t m = static_cast<std::size_t>(n_trajectories);
    const std::size_t n_chunks = (m + kEnsembleChunk - 1) / kEnsembleChunk;
    std::vector<EnsembleAccumulator> partials(n_chunks, EnsembleAccumulator(t_grid.size()));

    parallel_for(
        n_chunks,
        [&](std::size_t ci) {
            auto& acc = partials[ci];
            const std::size_t begin = ci * kEnsembleChunk;
            const std::size_t end = std::min(begin + kEnsembleChunk, m);
            for (std::size_t traj = begin; traj < end; ++traj) {
                NoiseSpec traj_noise = noise;
                traj_noise.seed = sub_seed(noise.seed, traj);
                const auto path = ou_sample_path(traj_noise, path_grid);
                const auto series = evolve_mode_trajectory(k, protocol, path, t_grid, settings);
                for (std::size_t ti = 0; ti < t_grid.size(); ++ti) acc.add(ti, series.rho[ti]);
            }
        },
        1);

    EnsembleAccumulator total(t_grid.size());
    for (const auto& p : partials) total.merge(p);

    TrajectoryEnsemble out;
    out.k = k;
    out.n_trajectories = n_trajectories;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.mean.resize(t_grid.size());
    out.se_real.resize(t_grid.size());
    out.se_imag.resize(t_grid.size());
    const double dm = static_cast<double>(m);
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        out.mean[ti] = total.sum[ti] / dm;
        const Mat2 mean_re = out.mean[ti].real();
        const Mat2 mean_im = out.mean[ti].imag();
        const Mat2 var_re =
            (total.sum_sq_re[ti] / dm - mean_re.cwiseProduct(mean_re)).cwiseMax(0.0);
        const Mat2 var_im =
            (total.sum_sq_im[ti] / dm - mean_im.cwiseProduct(mean_im)).cwiseMax(0.0);
        out.se_real[ti] = (var_re / dm).cwiseSqrt();
        out.se_imag[ti] = (var_im / dm).cwiseSqrt();
    }
    return out;
}

ChainEvolution evolve_chain_noiseless(const ChainSpec& spec, const RampProtocol& protocol,
                                      std::span<const double> t_grid,
                                      const IntegratorSettings& settings) {
    ChainEvolution out;
    out.spec = spec;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.rho.resize(spec.modes.size());
    parallel_for(spec.modes.size(), [&](std::size_t mi) {
        out.rho[mi] = evolve_mode_noiseless(spec.modes[mi], protocol, t_grid, settings).rho;
    });
    return out;
}

ChainEvolution evolve_chain_averaged(const ChainSpec& spec, const RampProtocol& protocol,
                                     const NoiseSpec& noise, std::span<const double> t_grid,
                                     const IntegratorSettings& settings, NoiseKernel kernel) {
    ChainEvolution out;
    out.spec = spec;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.rho.resize(spec.modes.size());
    parallel_for(spec.modes.size(), [&](std::size_t mi) {
        out.rho[mi] =
            evolve_mode_noisy_averaged(spec.modes[mi], protocol, noise, t_grid, settings, kernel)
                .rho;
    });
    return out;
}

ChainEvolution evolve_chain_trajectory_mean(const ChainSpec& spec,
                                            const RampProtocol& protocol,
                                            const NoiseSpec& noise,
                                            std::span<const double> t_grid,
                                            const IntegratorSettings& settings,
                                            int n_trajectories, double path_dt) {
    check_grid(t_grid, true);
    if (n_trajectories < 1) {
        throw std::invalid_argument("evolve_chain_trajectory_mean: need at least one trajectory");
    }
    if (path_dt <= 0.0) path_dt = noise.tau / 50.0;
    const auto path_grid = uniform_grid(t_grid.front(), t_grid.back(), path_dt);

    const std::size_t n_modes = spec.modes.size();
    const std::size_t n_times = t_grid.size();
    const std::size_t m = static_cast<std::size_t>(n_trajectories);
    const std::size_t n_chunks = (m + kEnsembleChunk - 1) / kEnsembleChunk;
    // per-chunk, per-mode running sums; merged in chunk order
    std::vector<std::vector<Mat2c>> partial(n_chunks);
    for (auto& p : partial) p.assign(n_modes * n_times, Mat2c::Zero());

    parallel_for(
        n_chunks,
        [&](std::size_t ci) {
            auto& acc = partial[ci];
            const std::size_t begin = ci * kEnsembleChunk;
            const std::size_t end = std::min(begin + kEnsembleChunk, m);
            for (std::size_t traj = begin; traj < end; ++traj) {
                NoiseSpec traj_noise = noise;
                traj_noise.seed = sub_seed(noise.seed, traj);
                const auto path = ou_sample_path(traj_noise, path_grid);
                for (std::size_t mi = 0; mi < n_modes; ++mi) {
                    const auto series =
                        evolve_mode_trajectory(spec.modes[mi], protocol, path, t_grid, settings);
                    for (std::size_t ti = 0; ti < n_times; ++ti) {
                        acc[mi * n_times + ti] += series.rho[ti];
                    }
                }
            }
        },
        1);

    ChainEvolution out;
    out.spec = spec;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.rho.assign(n_modes, std::vector<Mat2c>(n_times, Mat2c::Zero()));
    for (std::size_t mi = 0; mi < n_modes; ++mi) {
        for (std::size_t ti = 0; ti < n_times; ++ti) {
            Mat2c s = Mat2c::Zero();
            for (std::size_t ci = 0; ci < n_chunks; ++ci) s += partial[ci][mi * n_times + ti];
            out.rho[mi][ti] = s / static_cast<double>(m);
        }
    }
    return out;
}

}  // namespace isingqb
