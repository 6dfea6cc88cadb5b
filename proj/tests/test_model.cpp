#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "isingqb/model.hpp"
#include "oracles.hpp"

using namespace isingqb;

TEST_CASE("quasimomenta layout") {
    CHECK(quasimomenta(2) == std::vector<double>{M_PI / 2.0});

    const auto k4 = quasimomenta(4);
    REQUIRE(k4.size() == 2);
    CHECK(k4[0] == doctest::Approx(M_PI / 4.0).epsilon(1e-15));
    CHECK(k4[1] == doctest::Approx(3.0 * M_PI / 4.0).epsilon(1e-15));

    const auto k300 = quasimomenta(300);
    REQUIRE(k300.size() == 150);
    CHECK(k300.front() == doctest::Approx(M_PI / 300.0).epsilon(1e-15));
    CHECK(k300.back() == doctest::Approx(299.0 * M_PI / 300.0).epsilon(1e-15));
    for (std::size_t i = 0; i < k300.size(); ++i) {
        CHECK(k300[i] > 0.0);
        CHECK(k300[i] < M_PI);
        if (i > 0) CHECK(k300[i] > k300[i - 1]);
    }

    CHECK_THROWS_AS(quasimomenta(3), std::invalid_argument);
    CHECK_THROWS_AS(quasimomenta(0), std::invalid_argument);
    CHECK_THROWS_AS(quasimomenta(-4), std::invalid_argument);
}

TEST_CASE("mode hamiltonian entries") {
    Mat2 m = mode_hamiltonian(M_PI / 2.0, 0.0);
    CHECK(std::abs(m(0, 0)) < 1e-15);
    CHECK(m(0, 1) == doctest::Approx(2.0));
    CHECK(m(1, 0) == doctest::Approx(2.0));
    CHECK(std::abs(m(1, 1)) < 1e-15);

    m = mode_hamiltonian(M_PI / 2.0, 0.8);
    CHECK(m(0, 0) == doctest::Approx(1.6));
    CHECK(m(0, 1) == doctest::Approx(2.0));
    CHECK(m(1, 1) == doctest::Approx(-1.6));

    m = mode_hamiltonian(M_PI, 1.0);
    CHECK(m(0, 0) == doctest::Approx(4.0));
    CHECK(std::abs(m(0, 1)) < 1e-12);
    CHECK(m(1, 1) == doctest::Approx(-4.0));

    // traceless and symmetric everywhere
    for (double k : quasimomenta(20)) {
        for (double h : {-1.5, -0.3, 0.0, 0.8, 2.0}) {
            const Mat2 hm = mode_hamiltonian(k, h);
            CHECK(std::abs(hm(0, 0) + hm(1, 1)) < 1e-14);
            CHECK(hm(0, 1) == hm(1, 0));
        }
    }
}

TEST_CASE("mode spectrum") {
    auto s = mode_spectrum(M_PI / 2.0, 0.0);
    CHECK(s.minus == doctest::Approx(-2.0));
    CHECK(s.plus == doctest::Approx(2.0));

    s = mode_spectrum(M_PI / 2.0, 0.8);
    CHECK(s.plus == doctest::Approx(2.0 * std::sqrt(1.64)).epsilon(1e-14));
    CHECK(s.minus == doctest::Approx(-s.plus));

    // gap closes toward k -> 0 at the critical field
    CHECK(mode_spectrum(1e-5, 1.0).plus < 1e-4);
    CHECK(mode_spectrum(1e-5, 1.0).plus > 0.0);
}

TEST_CASE("mode eigensystem and ground state") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uk(1e-3, M_PI - 1e-3);
    std::uniform_real_distribution<double> uh(-2.5, 2.5);
    for (int trial = 0; trial < 200; ++trial) {
        const double k = uk(rng);
        const double h = uh(rng);
        const auto sys = mode_eigensystem(k, h);
        const Mat2 hm = mode_hamiltonian(k, h);

        CHECK(sys.b > 0.0);  // gauge
        CHECK(std::abs(sys.chi_minus.norm() - 1.0) < 1e-12);
        CHECK(std::abs(sys.chi_plus.norm() - 1.0) < 1e-12);
        CHECK(std::abs(sys.chi_minus.dot(sys.chi_plus)) < 1e-12);
        CHECK((hm * sys.chi_minus - sys.eps_minus * sys.chi_minus).norm() < 1e-10);
        CHECK((hm * sys.chi_plus - sys.eps_plus * sys.chi_plus).norm() < 1e-10);

        const Mat2c rho = mode_ground_state(k, h);
        const auto check = check_density(rho);
        CHECK(check.valid());
        CHECK(std::abs(check.purity - 1.0) < 1e-12);
        const double energy = std::real((rho * hm.cast<std::complex<double>>()).trace());
        CHECK(std::abs(energy - sys.eps_minus) < 1e-10);
    }

    // large-field limit: ground state -> diag(0, 1)
    const Mat2c rho = mode_ground_state(2.0, 1e7);
    CHECK(std::abs(rho(0, 0)) < 1e-10);
    CHECK(std::abs(rho(1, 1) - 1.0) < 1e-10);
}

TEST_CASE("qubit battery") {
    auto qb = qubit_battery(0.0, 1.0);
    CHECK(qb.omega == doctest::Approx(1.0));
    CHECK(qb.minus(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(qb.minus(1) == doctest::Approx(1.0 / std::sqrt(2.0)));

    qb = qubit_battery(0.8, 1.0);
    CHECK(qb.omega == doctest::Approx(std::sqrt(1.64)).epsilon(1e-14));

    for (double h : {-1.2, 0.0, 0.3, 0.8, 2.5}) {
        const auto q = qubit_battery(h, 1.0);
        CHECK(std::abs(q.minus.dot(q.plus)) < 1e-13);
        CHECK(std::abs(q.minus.norm() - 1.0) < 1e-13);
        CHECK((q.hamiltonian * q.minus + q.omega * q.minus).norm() < 1e-12);
        CHECK((q.hamiltonian * q.plus - q.omega * q.plus).norm() < 1e-12);
    }
    CHECK_THROWS_AS(qubit_battery(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("ground energy density stabilizes toward the thermodynamic integral") {
    for (double h : {0.0, 0.5, 1.0, 1.5}) {
        const double target = -1.0 / M_PI *
                              oracles::integrate(
                                  [h](double k) {
                                      const double d = h - std::cos(k);
                                      return std::sqrt(d * d + std::sin(k) * std::sin(k));
                                  },
                                  0.0, M_PI);
        double prev_dev = 1e300;
        for (int n : {50, 100, 300}) {
            double e0 = 0.0;
            for (double k : quasimomenta(n)) e0 += mode_spectrum(k, h).minus;
            const double dev = std::abs(e0 / n - target);
            CHECK(dev < prev_dev + 1e-14);
            prev_dev = dev;
        }
        CHECK(prev_dev < 1e-3);
    }
    // closed-form anchor at h = 0: density -1 for the classical chain
    double e0 = 0.0;
    for (double k : quasimomenta(300)) e0 += mode_spectrum(k, 0.0).minus;
    CHECK(e0 / 300.0 == doctest::Approx(-1.0).epsilon(1e-10));
}
