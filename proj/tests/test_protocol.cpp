#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "isingqb/protocol.hpp"
#include "oracles.hpp"

using namespace isingqb;

TEST_CASE("field_at evaluates the ramp piecewise") {
    const RampProtocol ramp{0.8, 1.5, 10.0};
    CHECK(field_at(ramp, 0.0) == doctest::Approx(0.8));
    CHECK(field_at(ramp, 5.0) == doctest::Approx(1.15));
    CHECK(field_at(ramp, 25.0) == doctest::Approx(1.5));
    CHECK(field_at(ramp, 10.0) == doctest::Approx(1.5));
    // continuity at t_f
    CHECK(field_at(ramp, 10.0 - 1e-9) == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(ramp.slope().value() == doctest::Approx(0.07));
    CHECK_THROWS_AS(field_at(ramp, -0.1), std::invalid_argument);

    const RampProtocol quench{0.8, 1.5, 0.0};
    CHECK(!quench.slope().has_value());
    CHECK(field_at(quench, 0.0) == doctest::Approx(0.8));
    CHECK(field_at(quench, 1e-12) == doctest::Approx(1.5));
    CHECK(field_at(quench, 3.0) == doctest::Approx(1.5));
}

TEST_CASE("ou path basics") {
    const auto grid = uniform_grid(0.0, 10.0, 0.02);

    const NoisePath zero = ou_sample_path({0.0, 1.0, 7}, grid);
    for (double v : zero.eta) CHECK(v == 0.0);

    const NoisePath a = ou_sample_path({0.5, 1.0, 99}, grid);
    const NoisePath b = ou_sample_path({0.5, 1.0, 99}, grid);
    CHECK(a.eta == b.eta);  // bit-identical for equal seeds

    const NoisePath c = ou_sample_path({0.5, 1.0, 100}, grid);
    CHECK(a.eta != c.eta);

    const std::vector<double> bad = {0.0, 1.0, 0.5};
    CHECK_THROWS_AS(ou_sample_path({0.5, 1.0, 7}, bad), std::invalid_argument);
}

TEST_CASE("ou stationary statistics") {
    // xi = 1, tau = 1: variance xi^2/(2 tau) = 0.5. Samples spaced 5 tau are
    // effectively independent.
    const std::size_t n = 100000;
    const auto grid = uniform_grid(0.0, 5.0 * static_cast<double>(n), 5.0);
    const NoisePath path = ou_sample_path({1.0, 1.0, 2024}, grid);
    const double var = oracles::variance(path.eta);
    const double se_var = 0.5 * std::sqrt(2.0 / static_cast<double>(n));
    CHECK(std::abs(var - 0.5) < 3.0 * se_var);

    const double mean = oracles::mean(path.eta);
    const double se_mean = std::sqrt(0.5 / static_cast<double>(n));
    CHECK(std::abs(mean) < 3.0 * se_mean);
}

TEST_CASE("ou marginals are grid-step free") {
    // The AR(1) update is exact, so a fine grid gives the same stationary
    // variance as a coarse one (no discretization bias).
    for (double dt : {2.0, 0.02}) {
        const std::size_t n = 200000;
        const auto grid = uniform_grid(0.0, dt * static_cast<double>(n), dt);
        const NoisePath path = ou_sample_path({1.0, 1.0, 555}, grid);
        const double var = oracles::variance(path.eta);
        // serial correlation widens the error bar; batch means absorb it
        std::vector<double> sq(path.eta.size());
        for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = path.eta[i] * path.eta[i];
        const double se = oracles::batch_se(sq);
        CHECK(std::abs(var - 0.5) < 4.0 * se);
    }
}

TEST_CASE("ou autocovariance decays exponentially") {
    const double dt = 0.25;
    const double tau = 1.0;
    const std::size_t n = 400000;
    const auto grid = uniform_grid(0.0, dt * static_cast<double>(n), dt);
    const NoisePath path = ou_sample_path({1.0, tau, 31337}, grid);
    const double var = oracles::variance(path.eta);
    for (int lag : {1, 2, 4, 8}) {
        double cov = 0.0;
        const std::size_t m = path.eta.size() - static_cast<std::size_t>(lag);
        for (std::size_t i = 0; i < m; ++i) cov += path.eta[i] * path.eta[i + lag];
        cov /= static_cast<double>(m);
        const double expected = std::exp(-lag * dt / tau);
        // generous statistical tolerance: ~1/sqrt(effective samples)
        CHECK(std::abs(cov / var - expected) < 0.02);
    }
}

TEST_CASE("independent seeds decorrelate") {
    const std::size_t n = 10000;
    const auto grid = uniform_grid(0.0, 5.0 * static_cast<double>(n), 5.0);
    const NoisePath a = ou_sample_path({1.0, 1.0, 1}, grid);
    const NoisePath b = ou_sample_path({1.0, 1.0, 2}, grid);
    double corr = 0.0;
    for (std::size_t i = 0; i < a.eta.size(); ++i) corr += a.eta[i] * b.eta[i];
    corr /= static_cast<double>(a.eta.size());
    // product of the two processes has std ~ 0.5 per sample
    CHECK(std::abs(corr) < 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("noisy_field interpolates the path over the ramp") {
    const RampProtocol ramp{0.8, 1.5, 10.0};
    const auto grid = uniform_grid(0.0, 12.0, 0.02);
    const NoisePath zero = ou_sample_path({0.0, 1.0, 7}, grid);
    CHECK(noisy_field(ramp, zero, 3.3) == doctest::Approx(field_at(ramp, 3.3)));

    const NoisePath path = ou_sample_path({1.0, 1.0, 7}, grid);
    // exact on grid nodes
    CHECK(noisy_field(ramp, path, grid[17]) ==
          doctest::Approx(field_at(ramp, grid[17]) + path.eta[17]).epsilon(1e-14));
    // linear between nodes
    const double mid = 0.5 * (grid[17] + grid[18]);
    CHECK(path.value_at(mid) == doctest::Approx(0.5 * (path.eta[17] + path.eta[18])));
    CHECK_THROWS_AS(noisy_field(ramp, path, 12.5), std::out_of_range);
}

TEST_CASE("sub seeds differ and are deterministic") {
    CHECK(sub_seed(42, 0) == sub_seed(42, 0));
    CHECK(sub_seed(42, 0) != sub_seed(42, 1));
    CHECK(sub_seed(42, 0) != sub_seed(43, 0));
}
