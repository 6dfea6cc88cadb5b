// ode.hpp — explicit integrators: adaptive Dormand-Prince 8(5,3) with the
// scaled-norm error estimate and step controller of Hairer's dop853, and a
// classical fixed-step RK4. Both drive y from t0 to t1 landing exactly on t1.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace isingqb {

struct IntegratorSettings {
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = 0.0;  // 0 = no bound
    enum class Method { adaptive, rk4 } method = Method::adaptive;
    double rk4_step = 1e-3;
};

struct IntegratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

namespace dop853_detail {
// Dormand-Prince 8(5,3) tableau (Hairer, Norsett & Wanner); c[s] is the node
// of stage s+1.
inline constexpr double c[13] = {
    0.0,
    0.526001519587677318785587544488e-01,
    0.789002279381515978178381316732e-01,
    0.118350341907227396726757197510e+00,
    0.281649658092772603273242802490e+00,
    0.333333333333333333333333333333e+00,
    0.25e+00,
    0.307692307692307692307692307692e+00,
    0.651282051282051282051282051282e+00,
    0.6e+00,
    0.857142857142857142857142857142e+00,
    1.0,
    1.0};

inline constexpr double a2[] = {5.26001519587677318785587544488e-2};
inline constexpr double a3[] = {1.97250569845378994544595329183e-2,
                                5.91751709536136983633785987549e-2};
inline constexpr double a4[] = {2.95875854768068491816892993775e-2, 0.0,
                                8.87627564304205475450678981324e-2};
inline constexpr double a5[] = {2.41365134159266685502369798665e-1, 0.0,
                                -8.84549479328286085344864962717e-1,
                                9.24834003261792003115737966543e-1};
inline constexpr double a6[] = {3.7037037037037037037037037037e-2, 0.0, 0.0,
                                1.70828608729473871279604482173e-1,
                                1.25467687566822425016691814123e-1};
inline constexpr double a7[] = {3.7109375e-2, 0.0, 0.0,
                                1.70252211019544039314978060272e-1,
                                6.02165389804559606850219397283e-2, -1.7578125e-2};
inline constexpr double a8[] = {3.70920001185047927108779319836e-2, 0.0, 0.0,
                                1.70383925712239993810214054705e-1,
                                1.07262030446373284651809199168e-1,
                                -1.53194377486244017527936158236e-2,
                                8.27378916381402288758473766002e-3};
inline constexpr double a9[] = {6.24110958716075717114429577812e-1, 0.0, 0.0,
                                -3.36089262944694129406857109825e0,
                                -8.68219346841726006818189891453e-1,
                                2.75920996994467083049415600797e1,
                                2.01540675504778934086186788979e1,
                                -4.34898841810699588477366255144e1};
inline constexpr double a10[] = {4.77662536438264365890433908527e-1, 0.0, 0.0,
                                 -2.48811461997166764192642586468e0,
                                 -5.90290826836842996371446475743e-1,
                                 2.12300514481811942347288949897e1,
                                 1.52792336328824235832596922938e1,
                                 -3.32882109689848629194453265587e1,
                                 -2.03312017085086261358222928593e-2};
inline constexpr double a11[] = {-9.3714243008598732571704021658e-1, 0.0, 0.0,
                                 5.18637242884406370830023853209e0,
                                 1.09143734899672957818500254654e0,
                                 -8.14978701074692612513997267357e0,
                                 -1.85200656599969598641566180701e1,
                                 2.27394870993505042818970056734e1,
                                 2.49360555267965238987089396762e0,
                                 -3.0467644718982195003823669022e0};
inline constexpr double a12[] = {2.27331014751653820792359768449e0, 0.0, 0.0,
                                 -1.05344954667372501984066689879e1,
                                 -2.00087205822486249909675718444e0,
                                 -1.79589318631187989172765950534e1,
                                 2.79488845294199600508499808837e1,
                                 -2.85899827713502369474065508674e0,
                                 -8.87285693353062954433549289258e0,
                                 1.23605671757943030647266201528e1,
                                 6.43392746015763530355970484046e-1};
inline constexpr const double* a_rows[13] = {nullptr, nullptr, a2, a3, a4,  a5, a6,
                                             a7,      a8,      a9, a10, a11, a12};

inline constexpr double b[13] = {0.0,
                                 5.42937341165687622380535766363e-2,
                                 0.0,
                                 0.0,
                                 0.0,
                                 0.0,
                                 4.45031289275240888144113950566e0,
                                 1.89151789931450038304281599044e0,
                                 -5.8012039600105847814672114227e0,
                                 3.1116436695781989440891606237e-1,
                                 -1.52160949662516078556178806805e-1,
                                 2.01365400804030348374776537501e-1,
                                 4.47106157277725905176885569043e-2};

// 3rd-order error weights: b - bhh applied at stages 1, 9, 12.
inline constexpr double bhh1 = 0.244094488188976377952755905512e+00;
inline constexpr double bhh2 = 0.733846688281611857341361741547e+00;
inline constexpr double bhh3 = 0.220588235294117647058823529412e-01;

// 5th-order error weights.
inline constexpr double er[13] = {0.0,
                                  0.1312004499419488073250102996e-01,
                                  0.0,
                                  0.0,
                                  0.0,
                                  0.0,
                                  -0.1225156446376204440720569753e+01,
                                  -0.4957589496572501915214079952e+00,
                                  0.1664377182454986536961530415e+01,
                                  -0.3503288487499736816886487290e+00,
                                  0.3341791187130174790297318841e+00,
                                  0.8192320648511571246570742613e-01,
                                  -0.2235530786388629525884427845e-01};
}  // namespace dop853_detail

// Adaptive integrator with workspace reuse; the attempted step size persists
// across integrate() calls so chained short segments stay cheap.
class Dop853 {
  public:
    Dop853(std::size_t dim, IntegratorSettings settings)
        : n_(dim),
          rtol_(settings.rtol),
          atol_(settings.atol),
          max_step_(settings.max_step > 0.0 ? settings.max_step
                                            : std::numeric_limits<double>::infinity()) {
        if (!(rtol_ > 0.0) || !(atol_ > 0.0)) {
            throw std::invalid_argument("Dop853: rtol and atol must be positive");
        }
        for (auto& k : k_) k.assign(n_, 0.0);
        ytmp_.assign(n_, 0.0);
        ynew_.assign(n_, 0.0);
    }

    void reset_step() { h_ = 0.0; }
    const StepStats& stats() const { return stats_; }

    // rhs(t, y, dy): y and dy are spans of length dim.
    template <class RHS>
    void integrate(double t0, double t1, std::span<double> y, RHS&& rhs) {
        if (y.size() != n_) throw std::invalid_argument("Dop853: state size mismatch");
        if (t1 <= t0) {
            if (t1 == t0) return;
            throw std::invalid_argument("Dop853: t1 < t0");
        }
        using namespace dop853_detail;
        double t = t0;
        rhs(t, std::span<const double>(y.data(), n_), std::span<double>(k_[0].data(), n_));
        ++stats_.rhs_evals;
        if (h_ <= 0.0) h_ = initial_step(t0, t1, y);
        bool rejected_last = false;
        while (t < t1) {
            double h = std::min(h_, max_step_);
            bool last = false;
            if (h >= t1 - t) {
                h = t1 - t;
                last = true;
            }
            if (!(h > std::abs(t) * 1e-14 + 1e-300)) {
                throw IntegratorError(
                    "dop853: step size underflow at t=" + std::to_string(t) +
                    " (h=" + std::to_string(h) + ", rtol=" + std::to_string(rtol_) + ")");
            }
            // stages 2..12
            for (int s = 1; s < 12; ++s) {
                const double* arow = a_rows[s + 1];
                for (std::size_t i = 0; i < n_; ++i) {
                    double acc = 0.0;
                    for (int j = 0; j < s; ++j) acc += arow[j] * k_[static_cast<std::size_t>(j)][i];
                    ytmp_[i] = y[i] + h * acc;
                }
                rhs(t + c[s] * h, std::span<const double>(ytmp_.data(), n_),
                    std::span<double>(k_[static_cast<std::size_t>(s)].data(), n_));
                ++stats_.rhs_evals;
            }
            // 8th-order solution and embedded error estimates
            double err5 = 0.0;
            double err3 = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                double ksum = 0.0;
                double e5 = 0.0;
                for (int s = 1; s <= 12; ++s) {
                    ksum += b[s] * k_[static_cast<std::size_t>(s - 1)][i];
                    e5 += er[s] * k_[static_cast<std::size_t>(s - 1)][i];
                }
                ynew_[i] = y[i] + h * ksum;
                const double e3 = ksum - bhh1 * k_[0][i] - bhh2 * k_[8][i] - bhh3 * k_[11][i];
                const double sk = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(ynew_[i]));
                err5 += (e5 / sk) * (e5 / sk);
                err3 += (e3 / sk) * (e3 / sk);
            }
            double deno = err5 + 0.01 * err3;
            if (deno <= 0.0) deno = 1.0;
            const double err = h * err5 / std::sqrt(deno * static_cast<double>(n_));

            const double fac11 = std::pow(std::max(err, 1e-32), 0.125);
            if (err <= 1.0) {
                double fac = std::clamp(fac11 / 0.9, 1.0 / 6.0, 3.0);
                double hnew = h / fac;
                if (rejected_last) hnew = std::min(hnew, h);
                t = last ? t1 : t + h;
                std::copy(ynew_.begin(), ynew_.end(), y.begin());
                ++stats_.accepted;
                rejected_last = false;
                h_ = hnew;
                if (t < t1) {
                    rhs(t, std::span<const double>(y.data(), n_),
                        std::span<double>(k_[0].data(), n_));
                    ++stats_.rhs_evals;
                }
            } else {
                h_ = h / std::min(3.0, fac11 / 0.9);
                rejected_last = true;
                ++stats_.rejected;
            }
        }
    }

  private:
    double initial_step(double t0, double t1, std::span<const double> y) {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sk = atol_ + rtol_ * std::abs(y[i]);
            d0 += (y[i] / sk) * (y[i] / sk);
            d1 += (k_[0][i] / sk) * (k_[0][i] / sk);
        }
        d0 = std::sqrt(d0 / static_cast<double>(n_));
        d1 = std::sqrt(d1 / static_cast<double>(n_));
        double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
        return std::min({h0, t1 - t0, max_step_});
    }

    std::size_t n_;
    double rtol_;
    double atol_;
    double max_step_;
    double h_ = 0.0;
    StepStats stats_;
    std::vector<double> k_[12];
    std::vector<double> ytmp_;
    std::vector<double> ynew_;
};

// Classical RK4 with n_steps uniform steps on [t0, t1].
template <class RHS>
void rk4_integrate(double t0, double t1, std::span<double> y, long n_steps, RHS&& rhs) {
    if (n_steps < 1) throw std::invalid_argument("rk4_integrate: n_steps must be >= 1");
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    const double h = (t1 - t0) / static_cast<double>(n_steps);
    double t = t0;
    for (long step = 0; step < n_steps; ++step) {
        rhs(t, std::span<const double>(y.data(), n), std::span<double>(k1.data(), n));
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, std::span<const double>(tmp.data(), n), std::span<double>(k2.data(), n));
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, std::span<const double>(tmp.data(), n), std::span<double>(k3.data(), n));
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        rhs(t + h, std::span<const double>(tmp.data(), n), std::span<double>(k4.data(), n));
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t = t0 + (t1 - t0) * static_cast<double>(step + 1) / static_cast<double>(n_steps);
    }
}

}  // namespace isingqb
