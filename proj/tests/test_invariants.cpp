#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "noether/invariants.hpp"
#include "noether/rng.hpp"

using namespace noether;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// phi = 0 admits the exact pair (cos, sin); supplying it in closed form keeps
// the Wronskian equal to 1 to machine precision.
FundamentalPair closed_pair(double t0, double t_end) {
    return FundamentalPair::from_functions(
        phi_zero(), t0, t_end, [t0](double t) { return std::cos(t - t0); },
        [t0](double t) { return -std::sin(t - t0); },
        [t0](double t) { return std::sin(t - t0); },
        [t0](double t) { return std::cos(t - t0); });
}

Trajectory integrate_reduced(const GaugeProfile& profile, double t0, double q0, double p0,
                             double t_end, const Tolerances& tol = {}) {
    const RhsFn rhs = [&profile](double t, const std::vector<double>& y,
                                 std::vector<double>& dy) {
        const double f = profile.phi(t);
        dy[0] = y[1] + f * y[0];
        dy[1] = -y[0] - f * y[1];
    };
    return solve_ivp(rhs, t0, {q0, p0}, t_end, tol);
}

}  // namespace

TEST_CASE("integrated pair reproduces the closed forms when phi vanishes") {
    const Tolerances tight{1e-12, 1e-14, 0.0, 0.0};
    const FundamentalPair pair = fundamental_pair(phi_zero(), 0.5, 40.0, tight);
    REQUIRE(pair.trajectory() != nullptr);
    for (int k = 0; k <= 100; ++k) {
        const double t = 0.5 + 39.5 * k / 100.0;
        const auto v = pair.eval(t);
        CAPTURE(t);
        CHECK(std::abs(v.g1 - std::cos(t - 0.5)) < 1e-9);
        CHECK(std::abs(v.g2 - std::sin(t - 0.5)) < 1e-9);
        CHECK(std::abs(v.g1_dot + std::sin(t - 0.5)) < 1e-9);
        CHECK(std::abs(v.g2_dot - std::cos(t - 0.5)) < 1e-9);
        CHECK(std::abs(wronskian(pair, t) - 1.0) < 1e-10);
    }
    CHECK(wronskian(pair, 0.5) == 1.0);
}

TEST_CASE("closed-form pairs evaluate the supplied functions directly") {
    const FundamentalPair pair = closed_pair(1.0, 8.0);
    CHECK(pair.trajectory() == nullptr);
    CHECK(pair.t0() == 1.0);
    CHECK(pair.t_end() == 8.0);
    const auto v = pair.eval(2.3);
    CHECK(v.g1 == std::cos(2.3 - 1.0));
    CHECK(v.g2 == std::sin(2.3 - 1.0));
    CHECK_THROWS_AS(pair.eval(0.9), std::domain_error);
    CHECK_THROWS_AS(pair.eval(8.1), std::domain_error);
}

TEST_CASE("pair construction validates its window") {
    CHECK_THROWS_AS(fundamental_pair(phi_bessel(1), 1e-9, 1.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(fundamental_pair(phi_zero(), 1.0, 1.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(closed_pair(2.0, 2.0), std::invalid_argument);
}

TEST_CASE("second solution by reduction of order") {
    const FundamentalPair pair = closed_pair(0.5, 10.0);
    // g1 = cos is safely away from zero before 0.5 + pi/2.
    CHECK(std::abs(g2_by_quadrature(pair, 0.5 + 0.8) - std::sin(0.8)) < 1e-9);
    CHECK(std::abs(g2_by_quadrature(pair, 0.5 + 0.3) - std::sin(0.3)) < 1e-9);
    CHECK_THROWS_AS(g2_by_quadrature(pair, 0.5 + 2.0), std::domain_error);
    CHECK_THROWS_AS(g2_by_quadrature(pair, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("invariants along a state moving with g1") {
    const Tolerances tight{1e-12, 1e-14, 0.0, 0.0};
    const GaugeProfile profile = phi_bessel(3);
    const FundamentalPair pair = fundamental_pair(profile, 0.5, 30.0, tight);
    for (double t : {1.0, 4.0, 11.0, 27.0}) {
        const auto v = pair.eval(t);
        // qdot equals g1' exactly for this state, so I1 vanishes identically.
        const PhaseState s{t, v.g1, v.g1_dot - profile.phi(t) * v.g1};
        const double scale = 1.0 + v.g1 * v.g1 + v.g1_dot * v.g1_dot;
        CAPTURE(t);
        CHECK(std::abs(invariant_I(pair, 1, s)) < 1e-13 * scale);
        CHECK(std::abs(invariant_I(pair, 2, s) + 1.0) < 1e-9);
        CHECK(std::abs(invariant_I(pair, 3, s)) < 1e-13 * scale * scale);
        CHECK(std::abs(invariant_I(pair, 4, s)) < 1e-9 * scale);
        CHECK(std::abs(invariant_I(pair, 5, s) - 0.5) < 1e-9);
    }
    CHECK_THROWS_AS(invariant_I(pair, 0, PhaseState{1.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(invariant_I(pair, 6, PhaseState{1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("quadratic invariants factor through the linear ones") {
    const FundamentalPair pair = closed_pair(0.5, 20.0);
    SampleRng rng(3);
    for (int k = 0; k < 50; ++k) {
        const PhaseState s{rng.uniform(1.0, 19.0), rng.uniform(-2.0, 2.0),
                           rng.uniform(-2.0, 2.0)};
        const double i1 = invariant_I(pair, 1, s);
        const double i2 = invariant_I(pair, 2, s);
        const double scale = 1.0 + i1 * i1 + i2 * i2;
        CHECK(std::abs(invariant_I(pair, 3, s) - 0.5 * i1 * i1) < 1e-12 * scale);
        CHECK(std::abs(invariant_I(pair, 4, s) - i1 * i2) < 1e-12 * scale);
        CHECK(std::abs(invariant_I(pair, 5, s) - 0.5 * i2 * i2) < 1e-12 * scale);
    }
}

TEST_CASE("unit-amplitude pinney solution when phi vanishes") {
    const FundamentalPair pair = closed_pair(0.5, 20.0);
    const PinneyCoefficients c = checked_pinney(pair, 1.0, 0.0, 1.0);
    CHECK(c.kappa() == 1.0);
    for (double t : {0.5, 3.0, 9.7, 19.5}) {
        CHECK(std::abs(pinney_rho(pair, c, t) - 1.0) < 1e-14);
        CHECK(std::abs(pinney_rho_dot(pair, c, t)) < 1e-14);
        CHECK(std::abs(pinney_residual(pair, c, t)) < 1e-13);
    }
}

TEST_CASE("pinney coefficients are vetted against the radicand") {
    const FundamentalPair pair = closed_pair(0.5, 3.5);
    // c = (1, 2, 1): radicand 1 + 2 sin(2(t - t0)) first vanishes near
    // t - t0 = 1.83, so a short window passes and the long one is rejected.
    const FundamentalPair short_pair = closed_pair(0.5, 1.5);
    CHECK_NOTHROW(checked_pinney(short_pair, 1.0, 2.0, 1.0));
    CHECK(checked_pinney(short_pair, 1.0, 2.0, 1.0).kappa() == -3.0);
    CHECK_THROWS_AS(checked_pinney(pair, 1.0, 2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(checked_pinney(pair, -1.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(checked_pinney(pair, 1.0, 0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("pinney equation holds for generic coefficients") {
    const Tolerances tight{1e-12, 1e-14, 0.0, 0.0};
    const FundamentalPair pair = fundamental_pair(phi_bessel(1), 0.5, 20.0, tight);
    SampleRng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const double c3 = rng.uniform(0.5, 2.0);
        const double c4 = rng.uniform(-0.7, 0.7);
        const double c5 = (c4 * c4 + rng.uniform(0.2, 2.0)) / c3;
        const PinneyCoefficients c = checked_pinney(pair, c3, c4, c5);
        for (double t : {1.0, 5.0, 12.0, 19.0}) {
            const double scale =
                1.0 + std::abs(omega_squared(pair.profile(), t) * pinney_rho(pair, c, t));
            CAPTURE(trial);
            CAPTURE(t);
            CHECK(std::abs(pinney_residual(pair, c, t)) < 1e-6 * scale);
        }
    }
}

TEST_CASE("companion solution and its derivatives") {
    const FundamentalPair pair = closed_pair(0.5, 20.0);
    const PinneyCoefficients c{2.0, 0.5, 1.0};
    for (double t : {1.0, 6.0, 15.0}) {
        const TDeriv td = T_solution(pair, c, t);
        const double d = t - 0.5;
        const double expected =
            2.0 * std::cos(d) * std::cos(d) + std::cos(d) * std::sin(d) + std::sin(d) * std::sin(d);
        CHECK(std::abs(td.T - expected) < 1e-13);

        const double h = 1e-5;
        const double fd1 = (T_solution(pair, c, t + h).T - T_solution(pair, c, t - h).T) / (2 * h);
        const double fd2 = (T_solution(pair, c, t + h).T - 2.0 * td.T +
                            T_solution(pair, c, t - h).T) /
                           (h * h);
        CHECK(std::abs(td.T_dot - fd1) < 1e-8);
        CHECK(std::abs(td.T_ddot - fd2) < 1e-4);

        // T equals rho^2 for admissible coefficients.
        const double rho = pinney_rho(pair, c, t);
        CHECK(std::abs(td.T - rho * rho) < 1e-13);
        CHECK(std::abs(third_order_residual(pair, c, t)) < 3e-6);
    }
}

TEST_CASE("companion equation holds over the bessel profile") {
    const Tolerances tight{1e-12, 1e-14, 0.0, 0.0};
    const FundamentalPair pair = fundamental_pair(phi_bessel(1), 0.5, 20.0, tight);
    for (double t : {1.0, 4.0, 9.0, 18.0}) {
        const PinneyCoefficients sets[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (const auto& c : sets) {
            const TDeriv td = T_solution(pair, c, t);
            const double w2 = omega_squared(pair.profile(), t);
            const double scale =
                1.0 + std::abs(4.0 * w2 * td.T_dot) + std::abs(2.0 * omega_squared_dot(pair.profile(), t) * td.T);
            CHECK(std::abs(third_order_residual(pair, c, t)) < 1e-6 * scale);
        }
    }
}

TEST_CASE("boundary term of the divergence symmetry") {
    const FundamentalPair pair = closed_pair(0.5, 20.0);
    SampleRng rng(5);
    for (int k = 0; k < 20; ++k) {
        const NoetherCoefficients c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                    rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double t = rng.uniform(1.0, 19.0);
        CHECK(gauge_function_F(pair, c, 0.0, t) == 0.0);
    }
    // Pure c1 with phi = 0: F = -g1' q = sin(t - t0) q.
    const NoetherCoefficients c1{1.0, 0.0, 0.0, 0.0, 0.0};
    for (double t : {1.0, 2.5, 7.0}) {
        const double q = 0.8;
        CHECK(std::abs(gauge_function_F(pair, c1, q, t) - std::sin(t - 0.5) * q) < 1e-13);
    }
}

TEST_CASE("gauge field partials agree with finite differences") {
    const Tolerances tight{1e-12, 1e-14, 0.0, 0.0};
    const FundamentalPair pair = fundamental_pair(phi_bessel(1), 0.5, 20.0, tight);
    const NoetherCoefficients c{0.3, -0.7, 1.1, 0.4, 0.9};
    const ScalarField F = gauge_function_field(pair, c);
    const double h = 1e-6;
    for (double t : {1.0, 5.0, 14.0}) {
        for (double q : {-1.3, 0.4, 2.0}) {
            const double fdq = (F(q + h, t) - F(q - h, t)) / (2 * h);
            const double fdt = (F(q, t + h) - F(q, t - h)) / (2 * h);
            CAPTURE(t);
            CAPTURE(q);
            CHECK(std::abs(F.dq(q, t) - fdq) < 1e-6 * (1.0 + std::abs(fdq)));
            CHECK(std::abs(F.dt(q, t) - fdt) < 1e-5 * (1.0 + std::abs(fdt)));
        }
    }
}

TEST_CASE("scalar fields fall back to finite differences for missing partials") {
    ScalarField f;
    f.value = [](double q, double t) { return q * q * t + 3.0 * t * t; };
    CHECK(std::abs(f.dq(2.0, 1.5) - 2.0 * 2.0 * 1.5) < 1e-7);
    CHECK(std::abs(f.dt(2.0, 1.5) - (4.0 + 9.0)) < 1e-7);
}

TEST_CASE("conserved quantity is the matching combination of the basis") {
    const FundamentalPair pair = closed_pair(0.5, 20.0);
    SampleRng rng(23);
    for (int k = 0; k < 40; ++k) {
        const NoetherCoefficients c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                    rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const PhaseState s{rng.uniform(1.0, 19.0), rng.uniform(-2.0, 2.0),
                           rng.uniform(-2.0, 2.0)};
        double combo = 0.0;
        const double cs[5] = {c.c1, c.c2, c.c3, c.c4, c.c5};
        for (int i = 1; i <= 5; ++i) combo += cs[i - 1] * invariant_I(pair, i, s);
        const double I = noether_invariant(pair, c, s);
        CHECK(std::abs(I - combo) < 1e-12 * (1.0 + std::abs(combo)));
    }
}

TEST_CASE("ermakov-lewis quantity and its decomposition") {
    const FundamentalPair pair = closed_pair(0.5, 20.0);
    const PinneyCoefficients unit{1.0, 0.0, 1.0};
    SampleRng rng(29);
    for (int k = 0; k < 40; ++k) {
        const PhaseState s{rng.uniform(1.0, 19.0), rng.uniform(-2.0, 2.0),
                           rng.uniform(-2.0, 2.0)};
        // rho = 1: the quantity reduces to the oscillator energy (qdot = p here).
        const double direct = 0.5 * (s.p * s.p + s.q * s.q);
        CHECK(std::abs(ermakov_lewis(pair, unit, s) - direct) < 1e-13 * (1.0 + direct));

        const PinneyCoefficients c{rng.uniform(0.5, 2.0), rng.uniform(-0.5, 0.5),
                                   rng.uniform(1.0, 2.0)};
        const double combo = c.c3 * invariant_I(pair, 3, s) + c.c4 * invariant_I(pair, 4, s) +
                             c.c5 * invariant_I(pair, 5, s);
        const double I = ermakov_lewis(pair, c, s);
        CHECK(std::abs(I - combo) < 1e-12 * (1.0 + std::abs(combo)));
    }
    CHECK(ermakov_lewis(pair, PinneyCoefficients{0.0, 0.0, 0.0}, PhaseState{1.0, 1.0, 1.0}) ==
          0.0);
}

TEST_CASE("divergence symmetry condition vanishes for a true symmetry") {
    const FundamentalPair pair = closed_pair(0.5, 20.0);
    const GaugeProfile profile = phi_zero();

    ScalarField tau;
    tau.value = [](double, double) { return 0.0; };
    tau.d_q = [](double, double) { return 0.0; };
    tau.d_t = [](double, double) { return 0.0; };

    ScalarField eta;
    eta.value = [](double, double t) { return -std::cos(t - 0.5); };
    eta.d_q = [](double, double) { return 0.0; };
    eta.d_t = [](double, double t) { return std::sin(t - 0.5); };

    const NoetherCoefficients c1{1.0, 0.0, 0.0, 0.0, 0.0};
    const ScalarField F = gauge_function_field(pair, c1);

    SampleRng rng(31);
    for (int k = 0; k < 30; ++k) {
        const double q = rng.uniform(-2.0, 2.0);
        const double qd = rng.uniform(-2.0, 2.0);
        const double t = rng.uniform(1.0, 19.0);
        CHECK(std::abs(invariance_condition_residual(profile, tau, eta, F, q, qd, t)) < 1e-9);
    }

    // Dropping the boundary term breaks the condition.
    ScalarField zero;
    zero.value = [](double, double) { return 0.0; };
    zero.d_q = [](double, double) { return 0.0; };
    zero.d_t = [](double, double) { return 0.0; };
    CHECK(std::abs(invariance_condition_residual(profile, tau, eta, zero, 1.0, 0.5, 2.0)) >
          1e-2);
}

TEST_CASE("drift report across the window") {
    const Tolerances tight{1e-12, 1e-14, 0.0, 0.0};
    const GaugeProfile profile = phi_bessel(1);
    const FundamentalPair pair = fundamental_pair(profile, 0.5, 30.0, tight);
    const Trajectory traj = integrate_reduced(profile, 0.5, 1.0, 0.0, 30.0, tight);

    std::vector<double> grid;
    for (int k = 0; k < 200; ++k) grid.push_back(0.5 + 29.5 * k / 199.0);

    const NoetherCoefficients c{1.0, 1.0, 1.0, 0.0, 1.0};
    const InvariantReport rep = drift_report(pair, traj, c, grid, 1e-7);

    REQUIRE(rep.series.size() == 8);
    const char* names[8] = {"I1", "I2", "I3", "I4", "I5", "I_EL", "W", "I_total"};
    for (int k = 0; k < 8; ++k) {
        CHECK(rep.series[k].name == names[k]);
        CHECK(rep.series[k].values.size() == grid.size());
        CHECK(rep.series[k].drift < 1e-9);
    }
    CHECK(rep.pass);

    // Pointwise structure among the series.
    for (std::size_t k = 0; k < grid.size(); k += 13) {
        const double i1 = rep.series[0].values[k];
        const double i2 = rep.series[1].values[k];
        const double scale = 1.0 + i1 * i1 + i2 * i2;
        CHECK(std::abs(rep.series[2].values[k] - 0.5 * i1 * i1) < 1e-12 * scale);
        CHECK(std::abs(rep.series[6].values[k] - (c.c1 * i1 + c.c2 * i2)) < 1e-12 * scale);
        const double total = rep.series[7].values[k];
        const double decomposed = rep.series[5].values[k] + rep.series[6].values[k];
        CHECK(std::abs(total - decomposed) < 1e-7 * (1.0 + std::abs(total)));
    }

    // Validation.
    CHECK_THROWS_AS(drift_report(pair, traj, c, {}, 1e-7), std::invalid_argument);
    const std::vector<double> outside{0.1};
    CHECK_THROWS_AS(drift_report(pair, traj, c, outside, 1e-7), std::invalid_argument);

    // Serialized forms carry the same content.
    const nlohmann::json j = rep.to_json();
    CHECK(j["pass"] == true);
    CHECK(j["drift"].size() == 8);
    CHECK(j["series"]["I1"].size() == grid.size());
    std::ostringstream os;
    rep.write_csv(os);
    CHECK(os.str().rfind("t,I1,I2,I3,I4,I5,I_EL,W,I_total\n", 0) == 0);
}

TEST_CASE("all-zero coefficients give identically zero composite series") {
    const FundamentalPair pair = closed_pair(0.5, 10.0);
    const Trajectory traj = integrate_reduced(phi_zero(), 0.5, 1.0, 0.0, 10.0);
    const std::vector<double> grid{1.0, 2.0, 3.0, 2.0 * kPi};
    const InvariantReport rep = drift_report(pair, traj, NoetherCoefficients{}, grid, 1e-7);
    for (double v : rep.series[5].values) CHECK(v == 0.0);   // I_EL
    for (double v : rep.series[6].values) CHECK(v == 0.0);   // W
    for (double v : rep.series[7].values) CHECK(v == 0.0);   // I_total
    CHECK(rep.pass);
}
