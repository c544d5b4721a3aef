#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "noether/integrate.hpp"
#include "noether/model.hpp"

#include <json.hpp>

namespace noether {

/// Fundamental solution pair of g'' + omega^2(t) g = 0 with
/// g1(t0) = 1, g1'(t0) = 0 and g2(t0) = 0, g2'(t0) = 1, so the Wronskian
/// g1 g2' - g2 g1' equals 1. Usually produced by joint integration; closed
/// forms can be supplied directly when they are known.
class FundamentalPair {
  public:
    struct Values {
        double g1, g1_dot, g2, g2_dot;
    };

    static FundamentalPair integrate(const GaugeProfile& profile, double t0, double t_end,
                                     const Tolerances& tol = {});
    static FundamentalPair from_functions(const GaugeProfile& profile, double t0, double t_end,
                                          std::function<double(double)> g1,
                                          std::function<double(double)> g1_dot,
                                          std::function<double(double)> g2,
                                          std::function<double(double)> g2_dot);

    double t0() const { return t0_; }
    double t_end() const { return t_end_; }
    const GaugeProfile& profile() const { return profile_; }

    /// All four components at once; throws std::domain_error outside the window.
    Values eval(double t) const;
    double g1(double t) const { return eval(t).g1; }
    double g1_dot(double t) const { return eval(t).g1_dot; }
    double g2(double t) const { return eval(t).g2; }
    double g2_dot(double t) const { return eval(t).g2_dot; }

    /// Underlying dense trajectory; null for closed-form pairs.
    const Trajectory* trajectory() const { return traj_.get(); }

  private:
    FundamentalPair() = default;
    GaugeProfile profile_;
    double t0_ = 0.0;
    double t_end_ = 0.0;
    std::shared_ptr<const Trajectory> traj_;
    std::array<std::function<double(double)>, 4> fn_;
};

/// Joint integration of both fundamental solutions as one 4-dimensional system.
FundamentalPair fundamental_pair(const GaugeProfile& profile, double t0, double t_end,
                                 const Tolerances& tol = {});

double wronskian(const FundamentalPair& pair, double t);

/// Rebuilds g2(t) from g1 by reduction of order,
/// g2(t) = g1(t) * integral_{t0}^{t} ds / g1(s)^2,
/// valid while g1 stays away from zero. Throws std::domain_error when |g1|
/// drops below g1_floor anywhere on [t0, t].
double g2_by_quadrature(const FundamentalPair& pair, double t, double g1_floor = 1e-3,
                        double tol = 1e-10);

/// Linear and quadratic conserved quantities built from the pair
/// (index 1..5). The quadratic ones are evaluated in expanded form.
double invariant_I(const FundamentalPair& pair, int index, const PhaseState& s);

struct PinneyCoefficients {
    double c3 = 1.0;
    double c4 = 0.0;
    double c5 = 1.0;
    double kappa() const { return c3 * c5 - c4 * c4; }
};

/// Validates that rho^2 = c3 g1^2 + 2 c4 g1 g2 + c5 g2^2 stays positive on a
/// sampling grid over the pair window (requires c3 > 0 so rho(t0) is real).
/// Throws std::domain_error naming the first failing time otherwise.
PinneyCoefficients checked_pinney(const FundamentalPair& pair, double c3, double c4, double c5,
                                  int grid_points = 1000);

double pinney_rho(const FundamentalPair& pair, const PinneyCoefficients& c, double t);
double pinney_rho_dot(const FundamentalPair& pair, const PinneyCoefficients& c, double t);

/// rho'' + omega^2 rho - kappa / rho^3. rho'' comes from a finite difference
/// of the analytic rho' (step 5e-4), so the residual probes the dynamics
/// instead of cancelling algebraically. Accuracy degrades near minima of rho
/// (the derivatives of rho grow like kappa rho'^2 / rho^5 there); evaluate on
/// windows where rho stays O(1).
double pinney_residual(const FundamentalPair& pair, const PinneyCoefficients& c, double t);

struct TDeriv {
    double T = 0.0;
    double T_dot = 0.0;
    double T_ddot = 0.0;
};

/// General solution T = c3 g1^2 + 2 c4 g1 g2 + c5 g2^2 of the linear
/// third-order companion equation, with derivatives.
TDeriv T_solution(const FundamentalPair& pair, const PinneyCoefficients& c, double t);

/// T''' + 4 omega^2 T' + 2 (omega^2)' T, with T''' from a finite difference
/// of the analytic T'' (step 5e-4) for the same reason as pinney_residual.
double third_order_residual(const FundamentalPair& pair, const PinneyCoefficients& c, double t);

struct NoetherCoefficients {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;
};

/// Boundary-term gauge function F(q, t) accompanying the symmetry with
/// coefficients c (additive constant fixed to zero).
double gauge_function_F(const FundamentalPair& pair, const NoetherCoefficients& c, double q,
                        double t);

/// Conserved quantity of the symmetry with coefficients c:
/// I = T qdot^2/2 - T' q qdot/2 + (T'' + 2 omega^2 T) q^2/4 + g qdot - g' q,
/// where T uses (c3, c4, c5) and g = c1 g1 + c2 g2.
double noether_invariant(const FundamentalPair& pair, const NoetherCoefficients& c,
                         const PhaseState& s);

/// I_EL = (rho qdot - rho' q)^2 / 2 + kappa (q / rho)^2 / 2.
double ermakov_lewis(const FundamentalPair& pair, const PinneyCoefficients& c,
                     const PhaseState& s);

/// Scalar field on (q, t) with optional analytic partials; missing partials
/// fall back to central differences.
struct ScalarField {
    std::function<double(double q, double t)> value;
    std::function<double(double q, double t)> d_q;
    std::function<double(double q, double t)> d_t;

    double operator()(double q, double t) const { return value(q, t); }
    double dq(double q, double t) const;
    double dt(double q, double t) const;
};

/// F field (with analytic partials) for the symmetry with coefficients c.
ScalarField gauge_function_field(const FundamentalPair& pair, const NoetherCoefficients& c);

/// Residual of the divergence symmetry condition
/// tau dL/dt + eta dL/dq + (eta' - tau' qdot) dL/dqdot + tau' L - F' = 0
/// with ' the total time derivative along (q, qdot, t).
double invariance_condition_residual(const GaugeProfile& profile, const ScalarField& tau,
                                     const ScalarField& eta, const ScalarField& F, double q,
                                     double qdot, double t);

struct InvariantSeries {
    std::string name;
    std::vector<double> values;
    double drift = 0.0;  // max |v - v(t0)| / max(1, |v(t0)|)
};

struct InvariantReport {
    NoetherCoefficients coefficients;
    std::vector<double> grid;
    std::vector<InvariantSeries> series;  // I1..I5, I_EL, W, I_total
    double tolerance = 0.0;
    bool pass = false;

    nlohmann::json to_json() const;
    void write_csv(std::ostream& os) const;
};

/// Evaluates every invariant along a trajectory of the reduced system on the
/// given grid (grid must lie inside both windows) and reports drifts.
/// I_EL uses (c3, c4, c5); if those are all zero its series is identically 0.
InvariantReport drift_report(const FundamentalPair& pair, const Trajectory& traj,
                             const NoetherCoefficients& c, std::span<const double> grid,
                             double tolerance = 1e-7);

}  // namespace noether
