#include "noether/model.hpp"

#include <cmath>
#include <stdexcept>

#include "noether/io.hpp"
#include "noether/specfun.hpp"

namespace noether {

namespace {

void check_time(const GaugeProfile& profile, double t) {
    if (!(t >= profile.t_min))
        throw std::domain_error("gauge profile '" + profile.label + "': t = " + format_sig6(t) +
                                " below domain edge " + format_sig6(profile.t_min));
}

void check_vorticity(int n, bool allow_even, const char* fn) {
    if (n == 0) throw std::invalid_argument(std::string(fn) + ": vorticity n must be nonzero");
    if (n % 2 == 0 && !allow_even)
        throw std::invalid_argument(std::string(fn) + ": even vorticity n = " +
                                    std::to_string(n) +
                                    " is unphysical here; pass the override to force it");
}

}  // namespace

GaugeProfile phi_bessel(int n, bool allow_even) {
    check_vorticity(n, allow_even, "phi_bessel");
    const double half_n = 0.5 * n;
    GaugeProfile p;
    p.n = n;
    p.label = "bessel(n=" + std::to_string(n) + ")";
    p.t_min = 1e-8;
    p.phi = [half_n](double t) { return half_n * bessel_k1(t); };
    p.phi_dot = [half_n](double t) {
        const auto [k0, k1] = bessel_k01(t);
        return -half_n * (k0 + k1 / t);
    };
    p.phi_ddot = [half_n](double t) {
        const auto [k0, k1] = bessel_k01(t);
        const double k1p = -(k0 + k1 / t);
        return half_n * (k1 + k1 / (t * t) - k1p / t);
    };
    return p;
}

GaugeProfile phi_zero() {
    GaugeProfile p;
    p.n = 0;
    p.label = "zero";
    p.t_min = 0.0;
    p.phi = [](double) { return 0.0; };
    p.phi_dot = [](double) { return 0.0; };
    p.phi_ddot = [](double) { return 0.0; };
    return p;
}

double omega_squared(const GaugeProfile& profile, double t) {
    check_time(profile, t);
    const double f = profile.phi(t);
    return 1.0 - profile.phi_dot(t) - f * f;
}

double partner_omega_squared(const GaugeProfile& profile, double t) {
    check_time(profile, t);
    const double f = profile.phi(t);
    return 1.0 + profile.phi_dot(t) - f * f;
}

double omega_squared_dot(const GaugeProfile& profile, double t) {
    check_time(profile, t);
    return -profile.phi_ddot(t) - 2.0 * profile.phi(t) * profile.phi_dot(t);
}

double qdot_of(const GaugeProfile& profile, const PhaseState& s) {
    check_time(profile, s.t);
    return s.p + profile.phi(s.t) * s.q;
}

std::pair<double, double> reduced_rhs(const GaugeProfile& profile, const PhaseState& s) {
    check_time(profile, s.t);
    const double f = profile.phi(s.t);
    return {s.p + f * s.q, -s.q - f * s.p};
}

double hamiltonian(const GaugeProfile& profile, const PhaseState& s) {
    check_time(profile, s.t);
    return 0.5 * (s.p * s.p + s.q * s.q) + profile.phi(s.t) * s.p * s.q;
}

double lagrangian(const GaugeProfile& profile, double q, double qdot, double t) {
    check_time(profile, t);
    const double f = profile.phi(t);
    return 0.5 * qdot * qdot - 0.5 * (1.0 - f * f) * q * q - f * q * qdot;
}

double standard_lagrangian(const GaugeProfile& profile, double q, double qdot, double t) {
    return 0.5 * qdot * qdot - 0.5 * omega_squared(profile, t) * q * q;
}

RadialMap make_radial_map(double V, int n, bool allow_even) {
    if (!(V > 0.0))
        throw std::invalid_argument("make_radial_map: scale V must be positive, got " +
                                    format_sig6(V));
    check_vorticity(n, allow_even, "make_radial_map");
    return {V, n};
}

PhaseState radial_to_scaled(const RadialMap& map, double r, double u, double v) {
    if (!(r > 0.0))
        throw std::domain_error("radial_to_scaled: radius must be positive, got " +
                                format_sig6(r));
    return {map.V * r, u, v};
}

RadialState scaled_to_radial(const RadialMap& map, const PhaseState& s) {
    if (!(s.t > 0.0))
        throw std::domain_error("scaled_to_radial: time must be positive, got " +
                                format_sig6(s.t));
    return {s.t / map.V, s.q, s.p};
}

double gauge_A(const GaugeProfile& profile, const RadialMap& map, double r) {
    if (profile.n == 0)
        throw std::invalid_argument("gauge_A: profile carries no vorticity");
    if (!(r > 0.0))
        throw std::domain_error("gauge_A: radius must be positive, got " + format_sig6(r));
    const double t = map.V * r;
    check_time(profile, t);
    return 0.5 - (t / profile.n) * profile.phi(t);
}

AsymptoteReport asymptote_check(const GaugeProfile& profile, int n,
                                std::span<const double> t_small, std::span<const double> t_large,
                                double small_tol, double large_tol) {
    if (t_small.empty() || t_large.empty())
        throw std::invalid_argument("asymptote_check: grids must be non-empty");
    AsymptoteReport rep;
    rep.small_tol = small_tol;
    rep.large_tol = large_tol;
    const double half_n = 0.5 * n;
    for (double t : t_small) {
        check_time(profile, t);
        rep.max_small_dev = std::max(rep.max_small_dev, std::abs(t * profile.phi(t) - half_n));
    }
    for (double t : t_large) {
        check_time(profile, t);
        rep.max_large_dev = std::max(rep.max_large_dev, std::abs(t * profile.phi(t)));
    }
    rep.small_pass = rep.max_small_dev <= small_tol;
    rep.large_pass = rep.max_large_dev <= large_tol;
    rep.pass = rep.small_pass && rep.large_pass;
    return rep;
}

}  // namespace noether
