#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "isingqb/dynamics.hpp"

namespace isingqb {

namespace {

// Basis convention: bit j of the index set means spin j points down (sigma_z = -1).
struct SpinChain {
    int n = 0;
    int dim = 0;
    std::vector<double> sz_sum;      // sum_j sigma_z_j, diagonal
    std::vector<unsigned> bond_mask; // flips (j, j+1 mod n)

    explicit SpinChain(int n_sites) : n(n_sites), dim(1 << n_sites) {
        sz_sum.resize(static_cast<std::size_t>(dim));
        for (int s = 0; s < dim; ++s) {
            sz_sum[static_cast<std::size_t>(s)] =
                static_cast<double>(n - 2 * __builtin_popcount(static_cast<unsigned>(s)));
        }
        bond_mask.resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            bond_mask[static_cast<std::size_t>(j)] = (1u << j) | (1u << ((j + 1) % n));
        }
    }

    // out = H(h) x with H = -sum sigma^x_j sigma^x_{j+1} - h sum sigma^z_j
    void apply(double h, const double* x, double* out) const {
        for (int s = 0; s < dim; ++s) {
            out[s] = -h * sz_sum[static_cast<std::size_t>(s)] * x[s];
        }
        for (int j = 0; j < n; ++j) {
            const unsigned mask = bond_mask[static_cast<std::size_t>(j)];
            for (int s = 0; s < dim; ++s) {
                out[s ^ static_cast<int>(mask)] -= x[s];
            }
        }
    }

    Eigen::MatrixXd dense(double h) const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
        for (int s = 0; s < dim; ++s) m(s, s) = -h * sz_sum[static_cast<std::size_t>(s)];
        for (int j = 0; j < n; ++j) {
            const int mask = static_cast<int>(bond_mask[static_cast<std::size_t>(j)]);
            for (int s = 0; s < dim; ++s) m(s ^ mask, s) -= 1.0;
        }
        return m;
    }

    double fermion_parity(const Eigen::VectorXd& psi) const {
        double p = 0.0;
        for (int s = 0; s < dim; ++s) {
            const double w = psi(s) * psi(s);
            p += (__builtin_popcount(static_cast<unsigned>(s)) % 2 == 0) ? w : -w;
        }
        return p;
    }
};

void require_small_even(int n_sites) {
    if (n_sites < 2 || n_sites % 2 != 0 || n_sites > 10) {
        throw std::invalid_argument(
            "exact_chain_oracle: n_sites must be even with 2 <= N <= 10, got " +
            std::to_string(n_sites));
    }
}

}  // namespace

double exact_chain_ground_energy(int n_sites, double h) {
    require_small_even(n_sites);
    const SpinChain chain(n_sites);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(chain.dense(h),
                                                          Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

std::vector<double> exact_chain_oracle(int n_sites, const RampProtocol& protocol,
                                       std::span<const double> t_grid,
                                       const IntegratorSettings& settings) {
    require_small_even(n_sites);
    if (t_grid.empty() || t_grid.front() != 0.0) {
        throw std::invalid_argument("exact_chain_oracle: time grid must start at 0");
    }
    const SpinChain chain(n_sites);
    const std::size_t dim = static_cast<std::size_t>(chain.dim);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(chain.dense(protocol.h_i));
    const Eigen::VectorXd ground = solver.eigenvectors().col(0);
    const double e0 = solver.eigenvalues()(0);
    if (chain.fermion_parity(ground) < 0.99) {
        throw std::runtime_error("exact_chain_oracle: ground state not in the even sector");
    }

    // state: [Re psi | Im psi]; psi' = -i H psi => Re' = H Im, Im' = -H Re
    std::vector<double> y(2 * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        y[i] = ground(static_cast<Eigen::Index>(i));
        y[dim + i] = 0.0;
    }
    auto rhs = [&](double t, std::span<const double> s, std::span<double> ds) {
        const double h = field_at(protocol, t);
        chain.apply(h, s.data() + dim, ds.data());
        chain.apply(h, s.data(), ds.data() + dim);
        for (std::size_t i = 0; i < dim; ++i) ds[dim + i] = -ds[dim + i];
    };

    std::vector<double> energy(t_grid.size());
    std::vector<double> work(dim);
    auto battery_energy = [&]() {
        chain.apply(protocol.h_i, y.data(), work.data());
        double e = 0.0;
        for (std::size_t i = 0; i < dim; ++i) e += y[i] * work[i];
        chain.apply(protocol.h_i, y.data() + dim, work.data());
        for (std::size_t i = 0; i < dim; ++i) e += y[dim + i] * work[i];
        return e;
    };

    Dop853 stepper(2 * dim, settings);
    std::vector<double> bps;
    if (protocol.t_f > 0.0 && protocol.t_f < t_grid.back()) bps.push_back(protocol.t_f);

    std::size_t gi = 0;
    double t = t_grid[0];
    energy[0] = (battery_energy() - e0) / n_sites;
    std::size_t bp = 0;
    for (gi = 1; gi < t_grid.size(); ++gi) {
        const double target = t_grid[gi];
        while (bp < bps.size() && bps[bp] <= t + 1e-13) ++bp;
        while (bp < bps.size() && bps[bp] < target - 1e-13) {
            stepper.integrate(t, bps[bp], std::span<double>(y), rhs);
            t = bps[bp];
            ++bp;
        }
        stepper.integrate(t, target, std::span<double>(y), rhs);
        t = target;
        energy[gi] = (battery_energy() - e0) / n_sites;
    }
    return energy;
}

}  // namespace isingqb
