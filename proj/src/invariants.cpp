#include "noether/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "noether/io.hpp"

namespace noether {

namespace {

void check_window(double t, double t0, double t_end, const char* what) {
    if (!(t >= t0 && t <= t_end))
        throw std::domain_error(std::string(what) + ": t = " + format_sig6(t) +
                                " outside window [" + format_sig6(t0) + ", " +
                                format_sig6(t_end) + "]");
}

// Quadratic forms in (g1, g2) and their derivatives for coefficients (c3, c4, c5):
//   R  = c3 g1^2 + 2 c4 g1 g2 + c5 g2^2          (= T = rho^2)
//   R' = 2 (c3 g1 g1' + c4 (g1' g2 + g1 g2') + c5 g2 g2')
//   S  = c3 g1'^2 + 2 c4 g1' g2' + c5 g2'^2      (so T'' = 2S - 2 omega^2 R)
struct QuadForms {
    double R, R_dot, S;
};

QuadForms quad_forms(const FundamentalPair::Values& v, const PinneyCoefficients& c) {
    QuadForms f;
    f.R = c.c3 * v.g1 * v.g1 + 2.0 * c.c4 * v.g1 * v.g2 + c.c5 * v.g2 * v.g2;
    f.R_dot = 2.0 * (c.c3 * v.g1 * v.g1_dot + c.c4 * (v.g1_dot * v.g2 + v.g1 * v.g2_dot) +
                     c.c5 * v.g2 * v.g2_dot);
    f.S = c.c3 * v.g1_dot * v.g1_dot + 2.0 * c.c4 * v.g1_dot * v.g2_dot +
          c.c5 * v.g2_dot * v.g2_dot;
    return f;
}

double positive_radicand(const QuadForms& f, double t, const char* what) {
    if (!(f.R > 0.0))
        throw std::domain_error(std::string(what) + ": radicand " + format_sig6(f.R) +
                                " not positive at t = " + format_sig6(t));
    return f.R;
}

}  // namespace

FundamentalPair FundamentalPair::integrate(const GaugeProfile& profile, double t0, double t_end,
                                           const Tolerances& tol) {
    if (!(t0 >= profile.t_min))
        throw std::invalid_argument("fundamental_pair: t0 below the profile domain edge");
    if (!(t_end > t0)) throw std::invalid_argument("fundamental_pair: t_end must exceed t0");

    auto rhs = [profile](double t, const std::vector<double>& y, std::vector<double>& dy) {
        const double w2 = 1.0 - profile.phi_dot(t) - profile.phi(t) * profile.phi(t);
        dy[0] = y[1];
        dy[1] = -w2 * y[0];
        dy[2] = y[3];
        dy[3] = -w2 * y[2];
    };
    FundamentalPair pair;
    pair.profile_ = profile;
    pair.t0_ = t0;
    pair.t_end_ = t_end;
    pair.traj_ = std::make_shared<Trajectory>(
        solve_ivp(rhs, t0, std::vector<double>{1.0, 0.0, 0.0, 1.0}, t_end, tol));
    return pair;
}

FundamentalPair FundamentalPair::from_functions(const GaugeProfile& profile, double t0,
                                                double t_end, std::function<double(double)> g1,
                                                std::function<double(double)> g1_dot,
                                                std::function<double(double)> g2,
                                                std::function<double(double)> g2_dot) {
    if (!(t_end > t0))
        throw std::invalid_argument("FundamentalPair: t_end must exceed t0");
    FundamentalPair pair;
    pair.profile_ = profile;
    pair.t0_ = t0;
    pair.t_end_ = t_end;
    pair.fn_ = {std::move(g1), std::move(g1_dot), std::move(g2), std::move(g2_dot)};
    return pair;
}

FundamentalPair::Values FundamentalPair::eval(double t) const {
    check_window(t, t0_, t_end_, "FundamentalPair");
    if (traj_) {
        double buf[4];
        traj_->at_into(t, buf);
        return {buf[0], buf[1], buf[2], buf[3]};
    }
    return {fn_[0](t), fn_[1](t), fn_[2](t), fn_[3](t)};
}

FundamentalPair fundamental_pair(const GaugeProfile& profile, double t0, double t_end,
                                 const Tolerances& tol) {
    return FundamentalPair::integrate(profile, t0, t_end, tol);
}

double wronskian(const FundamentalPair& pair, double t) {
    const auto v = pair.eval(t);
    return v.g1 * v.g2_dot - v.g2 * v.g1_dot;
}

double g2_by_quadrature(const FundamentalPair& pair, double t, double g1_floor, double tol) {
    check_window(t, pair.t0(), pair.t_end(), "g2_by_quadrature");
    if (!(g1_floor > 0.0))
        throw std::invalid_argument("g2_by_quadrature: g1_floor must be positive");

    // Reduction of order needs g1 bounded away from zero on the whole range.
    const int scan = 2048;
    double prev = pair.eval(pair.t0()).g1;
    for (int k = 1; k <= scan; ++k) {
        const double u = pair.t0() + (t - pair.t0()) * k / scan;
        const double g = pair.eval(u).g1;
        if (std::abs(g) < g1_floor || g * prev < 0.0)
            throw std::domain_error("g2_by_quadrature: g1 reaches " + format_sig6(g) +
                                    " near t = " + format_sig6(u) +
                                    "; interval crosses a node of g1");
        prev = g;
    }
    const double integral = quadrature(
        [&pair](double u) {
            const double g = pair.eval(u).g1;
            return 1.0 / (g * g);
        },
        pair.t0(), t, tol);
    return pair.eval(t).g1 * integral;
}

double invariant_I(const FundamentalPair& pair, int index, const PhaseState& s) {
    const auto v = pair.eval(s.t);
    const double qd = s.p + pair.profile().phi(s.t) * s.q;
    switch (index) {
        case 1:
            return v.g1 * qd - v.g1_dot * s.q;
        case 2:
            return v.g2 * qd - v.g2_dot * s.q;
        case 3:
            return 0.5 * (v.g1 * v.g1 * qd * qd - 2.0 * v.g1 * v.g1_dot * s.q * qd +
                          v.g1_dot * v.g1_dot * s.q * s.q);
        case 4:
            return v.g1 * v.g2 * qd * qd - (v.g1 * v.g2_dot + v.g2 * v.g1_dot) * s.q * qd +
                   v.g1_dot * v.g2_dot * s.q * s.q;
        case 5:
            return 0.5 * (v.g2 * v.g2 * qd * qd - 2.0 * v.g2 * v.g2_dot * s.q * qd +
                          v.g2_dot * v.g2_dot * s.q * s.q);
        default:
            throw std::invalid_argument("invariant_I: index must be 1..5, got " +
                                        std::to_string(index));
    }
}

PinneyCoefficients checked_pinney(const FundamentalPair& pair, double c3, double c4, double c5,
                                  int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("checked_pinney: grid_points must be >= 2");
    if (!(c3 > 0.0))
        throw std::domain_error("checked_pinney: c3 must be positive so rho(t0) is real");
    const PinneyCoefficients c{c3, c4, c5};
    for (int k = 0; k < grid_points; ++k) {
        const double t =
            pair.t0() + (pair.t_end() - pair.t0()) * k / static_cast<double>(grid_points - 1);
        const auto f = quad_forms(pair.eval(t), c);
        positive_radicand(f, t, "checked_pinney");
    }
    return c;
}

double pinney_rho(const FundamentalPair& pair, const PinneyCoefficients& c, double t) {
    const auto f = quad_forms(pair.eval(t), c);
    return std::sqrt(positive_radicand(f, t, "pinney_rho"));
}

double pinney_rho_dot(const FundamentalPair& pair, const PinneyCoefficients& c, double t) {
    const auto f = quad_forms(pair.eval(t), c);
    return 0.5 * f.R_dot / std::sqrt(positive_radicand(f, t, "pinney_rho_dot"));
}

namespace {

// Derivative of a scalar map at t: fourth-order central stencil where the
// window allows, degrading to second-order central and then one-sided at the
// edges. The residuals differentiate quantities whose higher derivatives grow
// like kappa rho'^2 / rho^5, so the h^2 truncation of a plain central
// difference is not accurate enough near minima of rho.
double fd_derivative(const std::function<double(double)>& f, double t, double lo, double hi,
                     double h) {
    if (t - 2.0 * h >= lo && t + 2.0 * h <= hi)
        return (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h);
    if (t - h >= lo && t + h <= hi) return (f(t + h) - f(t - h)) / (2.0 * h);
    if (t + 2.0 * h <= hi) return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h);
    return (3.0 * f(t) - 4.0 * f(t - h) + f(t - 2.0 * h)) / (2.0 * h);
}

constexpr double kResidualStep = 5e-4;

}  // namespace

double pinney_residual(const FundamentalPair& pair, const PinneyCoefficients& c, double t) {
    const auto f = quad_forms(pair.eval(t), c);
    const double R = positive_radicand(f, t, "pinney_residual");
    const double rho = std::sqrt(R);
    const double w2 = omega_squared(pair.profile(), t);
    // rho'' by differencing the analytic rho', so the residual genuinely
    // probes the dynamics instead of cancelling algebraically.
    const double rho_ddot = fd_derivative(
        [&](double tt) { return pinney_rho_dot(pair, c, tt); }, t, pair.t0(), pair.t_end(),
        kResidualStep);
    return rho_ddot + w2 * rho - c.kappa() / (rho * R);
}

TDeriv T_solution(const FundamentalPair& pair, const PinneyCoefficients& c, double t) {
    const auto f = quad_forms(pair.eval(t), c);
    const double w2 = omega_squared(pair.profile(), t);
    return {f.R, f.R_dot, 2.0 * f.S - 2.0 * w2 * f.R};
}

double third_order_residual(const FundamentalPair& pair, const PinneyCoefficients& c, double t) {
    const auto f = quad_forms(pair.eval(t), c);
    const double w2 = omega_squared(pair.profile(), t);
    const double w2_dot = omega_squared_dot(pair.profile(), t);
    // T''' by differencing the analytic T'' = 2S - 2 omega^2 R; an algebraic
    // T''' would cancel against the other two terms identically.
    const double T_ddd = fd_derivative(
        [&](double tt) { return T_solution(pair, c, tt).T_ddot; }, t, pair.t0(), pair.t_end(),
        kResidualStep);
    return T_ddd + 4.0 * w2 * f.R_dot + 2.0 * w2_dot * f.R;
}

namespace {

struct GaugeParts {
    double g, g_dot;       // linear combination c1 g1 + c2 g2 and its derivative
    double T, T_dot, T_ddot, T_dddot;
    double C, C_dot, D, D_dot;  // F = C q^2/2 - D q
};

GaugeParts gauge_parts(const FundamentalPair& pair, const NoetherCoefficients& c, double t) {
    const auto v = pair.eval(t);
    const PinneyCoefficients pc{c.c3, c.c4, c.c5};
    const auto f = quad_forms(v, pc);
    const GaugeProfile& profile = pair.profile();
    const double w2 = omega_squared(profile, t);
    const double w2_dot = omega_squared_dot(profile, t);
    const double phi = profile.phi(t);
    const double phi_dot = profile.phi_dot(t);
    const double phi_ddot = profile.phi_ddot(t);

    GaugeParts out;
    out.g = c.c1 * v.g1 + c.c2 * v.g2;
    out.g_dot = c.c1 * v.g1_dot + c.c2 * v.g2_dot;
    out.T = f.R;
    out.T_dot = f.R_dot;
    out.T_ddot = 2.0 * f.S - 2.0 * w2 * f.R;
    out.T_dddot = -4.0 * w2 * f.R_dot - 2.0 * w2_dot * f.R;
    out.C = 0.5 * out.T_ddot - phi * out.T_dot - phi_dot * out.T;
    out.C_dot =
        0.5 * out.T_dddot - phi * out.T_ddot - 2.0 * phi_dot * out.T_dot - phi_ddot * out.T;
    out.D = out.g_dot - phi * out.g;
    // g'' = -omega^2 g, so D' = -omega^2 g - phi' g - phi g'.
    out.D_dot = -w2 * out.g - phi_dot * out.g - phi * out.g_dot;
    return out;
}

}  // namespace

double gauge_function_F(const FundamentalPair& pair, const NoetherCoefficients& c, double q,
                        double t) {
    const auto parts = gauge_parts(pair, c, t);
    return 0.5 * parts.C * q * q - parts.D * q;
}

ScalarField gauge_function_field(const FundamentalPair& pair, const NoetherCoefficients& c) {
    ScalarField field;
    field.value = [pair, c](double q, double t) {
        const auto parts = gauge_parts(pair, c, t);
        return 0.5 * parts.C * q * q - parts.D * q;
    };
    field.d_q = [pair, c](double q, double t) {
        const auto parts = gauge_parts(pair, c, t);
        return parts.C * q - parts.D;
    };
    field.d_t = [pair, c](double q, double t) {
        const auto parts = gauge_parts(pair, c, t);
        return 0.5 * parts.C_dot * q * q - parts.D_dot * q;
    };
    return field;
}

double noether_invariant(const FundamentalPair& pair, const NoetherCoefficients& c,
                         const PhaseState& s) {
    const auto parts = gauge_parts(pair, c, s.t);
    const double w2 = omega_squared(pair.profile(), s.t);
    const double qd = s.p + pair.profile().phi(s.t) * s.q;
    return 0.5 * parts.T * qd * qd - 0.5 * parts.T_dot * s.q * qd +
           0.25 * (parts.T_ddot + 2.0 * w2 * parts.T) * s.q * s.q + parts.g * qd -
           parts.g_dot * s.q;
}

double ermakov_lewis(const FundamentalPair& pair, const PinneyCoefficients& c,
                     const PhaseState& s) {
    if (c.c3 == 0.0 && c.c4 == 0.0 && c.c5 == 0.0) return 0.0;
    const auto v = pair.eval(s.t);
    const auto f = quad_forms(v, c);
    const double R = positive_radicand(f, s.t, "ermakov_lewis");
    const double rho = std::sqrt(R);
    const double rho_dot = 0.5 * f.R_dot / rho;
    const double qd = s.p + pair.profile().phi(s.t) * s.q;
    const double m = rho * qd - rho_dot * s.q;
    return 0.5 * m * m + 0.5 * c.kappa() * (s.q / rho) * (s.q / rho);
}

double ScalarField::dq(double q, double t) const {
    if (d_q) return d_q(q, t);
    const double h = 1e-6 * std::max(1.0, std::abs(q));
    return (value(q + h, t) - value(q - h, t)) / (2.0 * h);
}

double ScalarField::dt(double q, double t) const {
    if (d_t) return d_t(q, t);
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    return (value(q, t + h) - value(q, t - h)) / (2.0 * h);
}

double invariance_condition_residual(const GaugeProfile& profile, const ScalarField& tau,
                                     const ScalarField& eta, const ScalarField& F, double q,
                                     double qdot, double t) {
    const double phi = profile.phi(t);
    const double phi_dot = profile.phi_dot(t);
    const double L = 0.5 * qdot * qdot - 0.5 * (1.0 - phi * phi) * q * q - phi * q * qdot;
    const double L_t = phi * phi_dot * q * q - phi_dot * q * qdot;
    const double L_q = -(1.0 - phi * phi) * q - phi * qdot;
    const double L_qd = qdot - phi * q;

    const double tau_total = tau.dt(q, t) + qdot * tau.dq(q, t);
    const double eta_total = eta.dt(q, t) + qdot * eta.dq(q, t);
    const double F_total = F.dt(q, t) + qdot * F.dq(q, t);

    return tau(q, t) * L_t + eta(q, t) * L_q + (eta_total - tau_total * qdot) * L_qd +
           tau_total * L - F_total;
}

nlohmann::json InvariantReport::to_json() const {
    nlohmann::json j;
    j["coefficients"] = {{"c1", coefficients.c1}, {"c2", coefficients.c2},
                         {"c3", coefficients.c3}, {"c4", coefficients.c4},
                         {"c5", coefficients.c5}};
    j["kappa"] = coefficients.c3 * coefficients.c5 - coefficients.c4 * coefficients.c4;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    j["grid"] = grid;
    nlohmann::json jseries = nlohmann::json::object();
    nlohmann::json jdrift = nlohmann::json::object();
    for (const auto& s : series) {
        jseries[s.name] = s.values;
        jdrift[s.name] = s.drift;
    }
    j["series"] = jseries;
    j["drift"] = jdrift;
    return j;
}

void InvariantReport::write_csv(std::ostream& os) const {
    os << "t";
    for (const auto& s : series) os << "," << s.name;
    os << "\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        os << format_sig17(grid[k]);
        for (const auto& s : series) os << "," << format_sig17(s.values[k]);
        os << "\n";
    }
}

InvariantReport drift_report(const FundamentalPair& pair, const Trajectory& traj,
                             const NoetherCoefficients& c, std::span<const double> grid,
                             double tolerance) {
    if (grid.empty()) throw std::invalid_argument("drift_report: empty grid");
    if (traj.dimension() < 2)
        throw std::invalid_argument("drift_report: trajectory must carry (q, p)");
    for (double t : grid) {
        if (!(t >= pair.t0() && t <= pair.t_end() && t >= traj.t_begin() && t <= traj.t_end()))
            throw std::invalid_argument("drift_report: grid point " + format_sig6(t) +
                                        " outside the common window");
    }

    const bool quad_zero = (c.c3 == 0.0 && c.c4 == 0.0 && c.c5 == 0.0);
    const PinneyCoefficients pc{c.c3, c.c4, c.c5};

    InvariantReport rep;
    rep.coefficients = c;
    rep.tolerance = tolerance;
    rep.grid.assign(grid.begin(), grid.end());
    rep.series.resize(8);
    const char* names[8] = {"I1", "I2", "I3", "I4", "I5", "I_EL", "W", "I_total"};
    for (int k = 0; k < 8; ++k) {
        rep.series[k].name = names[k];
        rep.series[k].values.reserve(grid.size());
    }

    double state[2];
    for (double t : grid) {
        traj.at_into(t, {state, 2});
        const PhaseState s{t, state[0], state[1]};
        for (int i = 1; i <= 5; ++i) rep.series[i - 1].values.push_back(invariant_I(pair, i, s));
        rep.series[5].values.push_back(quad_zero ? 0.0 : ermakov_lewis(pair, pc, s));
        rep.series[6].values.push_back(c.c1 * rep.series[0].values.back() +
                                       c.c2 * rep.series[1].values.back());
        rep.series[7].values.push_back(noether_invariant(pair, c, s));
    }

    rep.pass = true;
    for (auto& s : rep.series) {
        const double base = s.values.front();
        double dev = 0.0;
        for (double v : s.values) dev = std::max(dev, std::abs(v - base));
        s.drift = dev / std::max(1.0, std::abs(base));
        rep.pass = rep.pass && s.drift <= tolerance;
    }
    return rep;
}

}  // namespace noether
