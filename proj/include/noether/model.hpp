#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>

namespace noether {

/// Time-dependent gauge profile phi(t) entering the reduced planar model,
/// with its first two derivatives. t_min marks the left edge of the valid
/// time domain.
struct GaugeProfile {
    std::function<double(double)> phi;
    std::function<double(double)> phi_dot;
    std::function<double(double)> phi_ddot;
    int n = 0;  // vorticity behind the profile, 0 when not applicable
    std::string label;
    double t_min = 0.0;
};

/// phi(t) = (n/2) K1(t). Odd vorticity is the physical case; even n is
/// accepted only with the explicit override.
GaugeProfile phi_bessel(int n, bool allow_even = false);

/// phi identically zero: the plain unit-frequency oscillator.
GaugeProfile phi_zero();

/// Effective oscillator frequency: omega^2(t) = 1 - phi' - phi^2.
double omega_squared(const GaugeProfile& profile, double t);

/// Frequency of the momentum partner equation: 1 + phi' - phi^2.
double partner_omega_squared(const GaugeProfile& profile, double t);

/// d(omega^2)/dt = -phi'' - 2 phi phi'.
double omega_squared_dot(const GaugeProfile& profile, double t);

struct PhaseState {
    double t = 0.0;
    double q = 0.0;
    double p = 0.0;
};

/// Velocity reconstruction: qdot = p + phi(t) q.
double qdot_of(const GaugeProfile& profile, const PhaseState& s);

/// First-order equations of motion: {qdot, pdot} = {p + phi q, -q - phi p}.
std::pair<double, double> reduced_rhs(const GaugeProfile& profile, const PhaseState& s);

/// H = (p^2 + q^2)/2 + phi p q.
double hamiltonian(const GaugeProfile& profile, const PhaseState& s);

/// Velocity-space Lagrangian of the reduced model:
/// L = qdot^2/2 - (1 - phi^2) q^2/2 - phi q qdot.
double lagrangian(const GaugeProfile& profile, double q, double qdot, double t);

/// Oscillator form reached after subtracting a total derivative:
/// Lstd = qdot^2/2 - omega^2(t) q^2/2.
double standard_lagrangian(const GaugeProfile& profile, double q, double qdot, double t);

/// Map between the radial fields (u, v)(r) and the scaled phase-space
/// variables (q, p)(t) with t = V r.
struct RadialMap {
    double V = 1.0;
    int n = 1;
};

RadialMap make_radial_map(double V, int n, bool allow_even = false);
PhaseState radial_to_scaled(const RadialMap& map, double r, double u, double v);

struct RadialState {
    double r = 0.0;
    double u = 0.0;
    double v = 0.0;
};

RadialState scaled_to_radial(const RadialMap& map, const PhaseState& s);

/// Gauge field profile A(r) = 1/2 - (V r / n) phi(V r).
double gauge_A(const GaugeProfile& profile, const RadialMap& map, double r);

struct AsymptoteReport {
    double max_small_dev = 0.0;  // max |t phi(t) - n/2| on the small-t grid
    double max_large_dev = 0.0;  // max |t phi(t)| on the large-t grid
    double small_tol = 0.0;
    double large_tol = 0.0;
    bool small_pass = false;
    bool large_pass = false;
    bool pass = false;
};

/// Checks the boundary behaviour t phi(t) -> n/2 (t -> 0) and -> 0
/// (t -> infinity) on caller-supplied grids.
AsymptoteReport asymptote_check(const GaugeProfile& profile, int n,
                                std::span<const double> t_small, std::span<const double> t_large,
                                double small_tol = 1e-4, double large_tol = 1e-11);

}  // namespace noether
