#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "noether/integrate.hpp"
#include "noether/model.hpp"
#include "noether/rng.hpp"

using namespace noether;

namespace {

// Quadrature-oracle references, frozen to 17 significant digits.
constexpr double kK0At1 = 4.2102443824070829e-01;
constexpr double kK1At1 = 6.0190723019723458e-01;

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

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

TEST_CASE("bessel profile values and scaling in the vorticity") {
    const GaugeProfile one = phi_bessel(1);
    CHECK(rel_err(one.phi(1.0), 0.5 * kK1At1) < 1e-13);
    CHECK(rel_err(one.phi_dot(1.0), -0.5 * (kK0At1 + kK1At1)) < 1e-13);

    const GaugeProfile three = phi_bessel(3);
    for (double t : {0.2, 1.0, 4.0, 17.0}) {
        CHECK(three.phi(t) == 3.0 * one.phi(t));
        CHECK(three.phi_dot(t) == 3.0 * one.phi_dot(t));
        CHECK(three.phi_ddot(t) == 3.0 * one.phi_ddot(t));
    }
    CHECK(one.label == "bessel(n=1)");
    CHECK(one.n == 1);
    CHECK(one.t_min > 0.0);
}

TEST_CASE("vorticity validation") {
    CHECK_THROWS_AS(phi_bessel(0), std::invalid_argument);
    CHECK_THROWS_AS(phi_bessel(2), std::invalid_argument);
    CHECK_THROWS_AS(phi_bessel(-4), std::invalid_argument);
    CHECK_NOTHROW(phi_bessel(2, true));
    CHECK_NOTHROW(phi_bessel(-1));
    const GaugeProfile p = phi_bessel(1);
    CHECK_THROWS_AS(p.phi(0.0), std::domain_error);
    CHECK_THROWS_AS(omega_squared(p, 1e-9), std::domain_error);
}

TEST_CASE("zero profile gives the unit oscillator") {
    const GaugeProfile z = phi_zero();
    CHECK(z.phi(3.7) == 0.0);
    CHECK(z.phi_dot(3.7) == 0.0);
    CHECK(z.phi_ddot(3.7) == 0.0);
    CHECK(omega_squared(z, 0.1) == 1.0);
    CHECK(partner_omega_squared(z, 0.1) == 1.0);
    CHECK(omega_squared_dot(z, 0.1) == 0.0);
    CHECK(z.label == "zero");
}

TEST_CASE("profile derivatives agree with finite differences") {
    const GaugeProfile p = phi_bessel(3);
    for (double t : {0.4, 1.3, 5.0, 20.0}) {
        const double h = 1e-6 * std::max(1.0, t);
        const double fd1 = (p.phi(t + h) - p.phi(t - h)) / (2.0 * h);
        const double fd2 = (p.phi(t + h) - 2.0 * p.phi(t) + p.phi(t - h)) / (h * h);
        CAPTURE(t);
        CHECK(std::abs(p.phi_dot(t) - fd1) < 1e-7 * std::max(1.0, std::abs(fd1)));
        CHECK(std::abs(p.phi_ddot(t) - fd2) < 1e-4 * std::max(1.0, std::abs(fd2)));
    }
}

TEST_CASE("effective frequency near the domain edges") {
    const GaugeProfile p = phi_bessel(1);
    const double t = 1e-5;
    CHECK(rel_err(omega_squared(p, t), 1.0 + 1.0 / (4.0 * t * t)) < 1e-6);
    CHECK(std::abs(omega_squared(p, 30.0) - 1.0) < 1e-10);

    // omega^2 and its partner differ only by the sign of phi', so flipping the
    // vorticity swaps them.
    const GaugeProfile m = phi_bessel(-1);
    for (double t2 : {0.3, 1.0, 6.0}) {
        CHECK(rel_err(partner_omega_squared(p, t2), omega_squared(m, t2)) < 1e-14);
    }
}

TEST_CASE("frequency derivative matches a finite difference") {
    const GaugeProfile p = phi_bessel(1);
    for (double t : {0.5, 1.0, 4.0, 12.0}) {
        const double h = 1e-6;
        const double fd = (omega_squared(p, t + h) - omega_squared(p, t - h)) / (2.0 * h);
        CHECK(std::abs(omega_squared_dot(p, t) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("equations of motion and the hamiltonian") {
    const GaugeProfile p = phi_bessel(1);
    const double f = p.phi(1.0);
    const PhaseState s{1.0, 2.0, -1.0};
    const auto [qd, pd] = reduced_rhs(p, s);
    CHECK(qd == -1.0 + 2.0 * f);
    CHECK(pd == -2.0 + f);
    CHECK(qdot_of(p, s) == qd);
    CHECK(hamiltonian(p, s) == 0.5 * (1.0 + 4.0) + f * (-2.0));
}

TEST_CASE("equations of motion are hamiltonian") {
    const GaugeProfile p = phi_bessel(3);
    SampleRng rng(7);
    for (int k = 0; k < 200; ++k) {
        const PhaseState s{rng.uniform(0.3, 20.0), rng.uniform(-2.0, 2.0),
                           rng.uniform(-2.0, 2.0)};
        const auto [qd, pd] = reduced_rhs(p, s);
        const double h = 1e-6;
        const double dHdp = (hamiltonian(p, {s.t, s.q, s.p + h}) -
                             hamiltonian(p, {s.t, s.q, s.p - h})) /
                            (2.0 * h);
        const double dHdq = (hamiltonian(p, {s.t, s.q + h, s.p}) -
                             hamiltonian(p, {s.t, s.q - h, s.p})) /
                            (2.0 * h);
        CHECK(std::abs(qd - dHdp) < 1e-8);
        CHECK(std::abs(pd + dHdq) < 1e-8);
    }
}

TEST_CASE("energy changes at the rate set by the profile drift") {
    const GaugeProfile p = phi_bessel(1);
    const Trajectory traj = integrate_reduced(p, 0.5, 1.0, 0.0, 5.0);
    for (double t : {1.0, 2.0, 3.5}) {
        const double h = 1e-4;
        auto H_at = [&](double tt) {
            const auto y = traj.at(tt);
            return hamiltonian(p, {tt, y[0], y[1]});
        };
        const double fd = (H_at(t + h) - H_at(t - h)) / (2.0 * h);
        const auto y = traj.at(t);
        const double expected = p.phi_dot(t) * y[0] * y[1];
        CHECK(std::abs(fd - expected) < 1e-6 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("lagrangians differ by an exact total derivative term") {
    const GaugeProfile p = phi_bessel(3);
    SampleRng rng(11);
    for (int k = 0; k < 100; ++k) {
        const double t = rng.uniform(0.2, 30.0);
        const double q = rng.uniform(-3.0, 3.0);
        const double qd = rng.uniform(-3.0, 3.0);
        const double gap = lagrangian(p, q, qd, t) - standard_lagrangian(p, q, qd, t);
        const double expected = -(0.5 * p.phi_dot(t) * q * q + p.phi(t) * q * qd);
        CHECK(std::abs(gap - expected) < 1e-13 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("trajectories satisfy the euler-lagrange equation") {
    const GaugeProfile p = phi_bessel(1);
    const Trajectory traj = integrate_reduced(p, 0.5, 1.0, 0.0, 20.0, {1e-13, 1e-15});
    for (double t : {1.0, 3.0, 7.0, 15.0}) {
        const double h = 2e-4;
        auto q_at = [&](double tt) { return traj.at(tt, 0); };
        const double qdd = (q_at(t + h) - 2.0 * q_at(t) + q_at(t - h)) / (h * h);
        const double res = qdd + omega_squared(p, t) * q_at(t);
        CHECK(std::abs(res) < 1e-7 * std::max(1.0, std::abs(omega_squared(p, t) * q_at(t))));
    }
}

TEST_CASE("radial map round trip and validation") {
    const RadialMap map = make_radial_map(2.5, 3);
    const PhaseState s = radial_to_scaled(map, 1.2, 0.7, -0.4);
    CHECK(s.t == 2.5 * 1.2);
    CHECK(s.q == 0.7);
    CHECK(s.p == -0.4);
    const RadialState back = scaled_to_radial(map, s);
    CHECK(back.r == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(back.u == 0.7);
    CHECK(back.v == -0.4);

    CHECK_THROWS_AS(make_radial_map(0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_radial_map(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_radial_map(1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(radial_to_scaled(map, -1.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(scaled_to_radial(map, PhaseState{0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("gauge field profile") {
    const GaugeProfile p = phi_bessel(1);
    const RadialMap map = make_radial_map(1.0, 1);
    CHECK(rel_err(gauge_A(p, map, 1.0), 0.5 - 0.5 * kK1At1) < 1e-13);
    // r -> 0: A -> 1/2 - 1/2 * (t K1) -> 0; r -> inf: A -> 1/2.
    CHECK(std::abs(gauge_A(p, map, 1e-6)) < 1e-4);
    CHECK(std::abs(gauge_A(p, map, 40.0) - 0.5) < 1e-12);
    CHECK_THROWS_AS(gauge_A(p, map, 0.0), std::domain_error);
    CHECK_THROWS_AS(gauge_A(phi_zero(), map, 1.0), std::invalid_argument);
}

TEST_CASE("boundary behaviour of the profile") {
    std::vector<double> small, large;
    for (int k = 0; k < 50; ++k)
        small.push_back(std::pow(10.0, -5.0 + 1.0 * k / 49.0));
    for (int k = 0; k < 20; ++k) large.push_back(30.0 + 20.0 * k / 19.0);

    for (int n : {1, 3}) {
        const AsymptoteReport rep = asymptote_check(phi_bessel(n), n, small, large);
        CAPTURE(n);
        CHECK(rep.small_pass);
        CHECK(rep.large_pass);
        CHECK(rep.pass);
        CHECK(rep.max_small_dev < 1e-4);
        CHECK(rep.max_large_dev < 1e-11);
    }
    CHECK_THROWS_AS(asymptote_check(phi_bessel(1), 1, {}, large), std::invalid_argument);
}
