#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace noether {

struct Tolerances {
    double rel = 1e-10;
    double abs = 1e-12;
    double max_step = 0.0;      // 0 -> one tenth of the integration window
    double initial_step = 0.0;  // 0 -> scaled-derivative startup heuristic
};

/// Throws std::invalid_argument on out-of-range settings
/// (rel < 1e-14, abs < 1e-16, negative steps).
void validate_tolerances(const Tolerances& tol);

using RhsFn =
    std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

struct StepStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    long rhs_evals = 0;
};

struct IntegrationError : std::runtime_error {
    IntegrationError(const std::string& what, double last_good_t)
        : std::runtime_error(what), last_t(last_good_t) {}
    double last_t;
};

/// Dense solution of an initial value problem: states at the accepted step
/// endpoints plus a quartic interpolant on every step, so the solution can be
/// evaluated anywhere in the window at the solver's accuracy.
class Trajectory {
  public:
    double t_begin() const { return t_nodes_.front(); }
    double t_end() const { return t_nodes_.back(); }
    std::size_t dimension() const { return dim_; }
    std::size_t node_count() const { return t_nodes_.size(); }
    const std::vector<double>& t_grid() const { return t_nodes_; }
    const StepStats& stats() const { return stats_; }

    /// State at node index (bounds-checked).
    std::span<const double> node_state(std::size_t node) const;

    /// Interpolated state anywhere in [t_begin, t_end]; exact at nodes.
    /// Throws std::domain_error outside the window.
    std::vector<double> at(double t) const;
    double at(double t, std::size_t component) const;
    void at_into(double t, std::span<double> out) const;

    /// One row per node: t plus every component, 17 significant digits,
    /// locale-independent. columns names the components (without "t").
    void write_csv(std::ostream& os, std::span<const std::string> columns) const;

  private:
    friend Trajectory solve_ivp(const RhsFn&, double, const std::vector<double>&, double,
                                const Tolerances&);
    std::size_t dim_ = 0;
    std::vector<double> t_nodes_;
    std::vector<double> states_;  // node-major, node_count * dim
    std::vector<double> rcont_;   // segment-major, (node_count-1) * 5 * dim
    StepStats stats_;
};

/// Adaptive Dormand-Prince 5(4) with dense output. Integrates forward from
/// t0 to t_end. Throws IntegrationError (carrying the last good time) on
/// non-finite states or step-size underflow.
Trajectory solve_ivp(const RhsFn& rhs, double t0, const std::vector<double>& y0, double t_end,
                     const Tolerances& tol = {});

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
    bool converged = false;
    long evaluations = 0;
};

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double best, double bound)
        : std::runtime_error(what), best_estimate(best), error_bound(bound) {}
    double best_estimate;
    double error_bound;
};

/// Adaptive Gauss-Kronrod 15 to an absolute error target. The non-throwing
/// variant reports convergence; the throwing variant raises QuadratureError
/// carrying the best estimate when the evaluation budget runs out.
QuadratureResult quadrature_result(const std::function<double(double)>& f, double a, double b,
                                   double tol, long max_evals = 500000);
double quadrature(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace noether
