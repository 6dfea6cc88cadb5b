#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <span>

#include "isingqb/ode.hpp"

using namespace isingqb;

namespace {

auto exp_rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };

auto sho_rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
};

// time-dependent: y' = -2 t y, y(T) = exp(-T^2)
auto gauss_rhs = [](double t, std::span<const double> y, std::span<double> dy) {
    dy[0] = -2.0 * t * y[0];
};

}  // namespace

TEST_CASE("dop853 tracks tolerance on smooth problems") {
    for (double rtol : {1e-6, 1e-9, 1e-12}) {
        IntegratorSettings st;
        st.rtol = rtol;
        st.atol = 1e-14;
        Dop853 stepper(1, st);
        double y[1] = {1.0};
        stepper.integrate(0.0, 2.0, std::span<double>(y, 1), exp_rhs);
        CHECK(std::abs(y[0] - std::exp(2.0)) < 100.0 * rtol * std::exp(2.0));
    }
}

TEST_CASE("dop853 time-dependent right-hand side") {
    IntegratorSettings st;
    Dop853 stepper(1, st);
    double y[1] = {1.0};
    stepper.integrate(0.0, 3.0, std::span<double>(y, 1), gauss_rhs);
    CHECK(std::abs(y[0] - std::exp(-9.0)) < 1e-7 * std::exp(-9.0));
}

TEST_CASE("dop853 long harmonic integration stays accurate") {
    IntegratorSettings st;
    Dop853 stepper(2, st);
    double y[2] = {1.0, 0.0};
    const double t_end = 100.0;
    stepper.integrate(0.0, t_end, std::span<double>(y, 2), sho_rhs);
    CHECK(std::abs(y[0] - std::cos(t_end)) < 1e-6);
    CHECK(std::abs(y[1] + std::sin(t_end)) < 1e-6);
    const double energy = y[0] * y[0] + y[1] * y[1];
    CHECK(std::abs(energy - 1.0) < 1e-7);
}

TEST_CASE("dop853 honors max_step and segment chaining") {
    IntegratorSettings st;
    st.max_step = 0.05;
    Dop853 stepper(2, st);
    double y[2] = {1.0, 0.0};
    // chained short segments mimic node-to-node output
    for (int i = 0; i < 100; ++i) {
        stepper.integrate(0.1 * i, 0.1 * (i + 1), std::span<double>(y, 2), sho_rhs);
    }
    CHECK(stepper.stats().accepted >= 200);  // at least (t_end / max_step) steps
    CHECK(std::abs(y[0] - std::cos(10.0)) < 1e-8);
}

TEST_CASE("dop853 rejects bad inputs") {
    IntegratorSettings st;
    st.rtol = 0.0;
    CHECK_THROWS_AS(Dop853(1, st), std::invalid_argument);

    Dop853 stepper(2, IntegratorSettings{});
    double y[2] = {1.0, 0.0};
    CHECK_THROWS_AS(stepper.integrate(1.0, 0.5, std::span<double>(y, 2), sho_rhs),
                    std::invalid_argument);
    double z[1] = {1.0};
    CHECK_THROWS_AS(stepper.integrate(0.0, 1.0, std::span<double>(z, 1), exp_rhs),
                    std::invalid_argument);
}

TEST_CASE("rk4 shows fourth-order convergence") {
    auto run = [](long steps) {
        double y[2] = {1.0, 0.0};
        rk4_integrate(0.0, 5.0, std::span<double>(y, 2), steps, sho_rhs);
        return std::abs(y[0] - std::cos(5.0));
    };
    const double coarse = run(200);
    const double fine = run(400);
    CHECK(coarse / fine > 12.0);  // ~16 for exact 4th order
    CHECK(coarse / fine < 20.0);
    CHECK(run(4000) < 1e-10);
}

TEST_CASE("rk4 rejects non-positive step counts") {
    double y[1] = {1.0};
    CHECK_THROWS_AS(rk4_integrate(0.0, 1.0, std::span<double>(y, 1), 0, exp_rhs),
                    std::invalid_argument);
}
