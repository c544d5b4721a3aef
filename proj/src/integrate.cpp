#include "noether/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>

#include "noether/io.hpp"

namespace noether {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Difference between the 5th and the embedded 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output weights for the quartic interpolant.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafe = 0.9;
constexpr double kFacMin = 0.2;   // strongest allowed shrink factor base
constexpr double kFacMax = 10.0;  // strongest allowed growth factor base
constexpr double kBeta = 0.04;    // Lund stabilization
constexpr long kMaxSteps = 20000000;

double error_norm(const std::vector<double>& yerr, const std::vector<double>& y,
                  const std::vector<double>& ynew, const Tolerances& tol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < yerr.size(); ++i) {
        const double sk = tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double r = yerr[i] / sk;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(yerr.size()));
}

double initial_step_guess(const RhsFn& rhs, double t, const std::vector<double>& y,
                          const std::vector<double>& f0, double hmax, const Tolerances& tol,
                          StepStats& stats) {
    const std::size_t n = y.size();
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = tol.abs + tol.rel * std::abs(y[i]);
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (y[i] / sk) * (y[i] / sk);
    }
    double h0 = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h0 = std::min(h0, hmax);

    std::vector<double> y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y[i] + h0 * f0[i];
    rhs(t + h0, y1, f1);
    ++stats.rhs_evals;

    double der2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = tol.abs + tol.rel * std::abs(y[i]);
        const double d = (f1[i] - f0[i]) / sk;
        der2 += d * d;
    }
    der2 = std::sqrt(der2) / h0;

    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 =
        (der12 <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h0, h1, hmax});
}

}  // namespace

void validate_tolerances(const Tolerances& tol) {
    if (!(tol.rel >= 1e-14))
        throw std::invalid_argument("Tolerances: rel must be >= 1e-14");
    if (!(tol.abs >= 1e-16))
        throw std::invalid_argument("Tolerances: abs must be >= 1e-16");
    if (tol.max_step < 0.0)
        throw std::invalid_argument("Tolerances: max_step must be >= 0");
    if (tol.initial_step < 0.0)
        throw std::invalid_argument("Tolerances: initial_step must be >= 0");
}

std::span<const double> Trajectory::node_state(std::size_t node) const {
    if (node >= t_nodes_.size()) throw std::out_of_range("Trajectory: node index");
    return {states_.data() + node * dim_, dim_};
}

void Trajectory::at_into(double t, std::span<double> out) const {
    const double lo = t_nodes_.front();
    const double hi = t_nodes_.back();
    const double slack = 1e-12 * (hi - lo);
    if (t < lo - slack || t > hi + slack)
        throw std::domain_error("Trajectory: time " + format_sig6(t) + " outside [" +
                                format_sig6(lo) + ", " + format_sig6(hi) + "]");
    t = std::clamp(t, lo, hi);

    auto it = std::lower_bound(t_nodes_.begin(), t_nodes_.end(), t);
    if (it != t_nodes_.end() && *it == t) {
        const std::size_t node = static_cast<std::size_t>(it - t_nodes_.begin());
        const double* row = states_.data() + node * dim_;
        std::copy(row, row + dim_, out.begin());
        return;
    }
    std::size_t seg = static_cast<std::size_t>(it - t_nodes_.begin());
    seg = (seg == 0) ? 0 : seg - 1;
    seg = std::min(seg, t_nodes_.size() - 2);

    const double t0 = t_nodes_[seg];
    const double t1 = t_nodes_[seg + 1];
    const double theta = (t - t0) / (t1 - t0);
    const double theta1 = 1.0 - theta;
    const double* r = rcont_.data() + seg * 5 * dim_;
    for (std::size_t i = 0; i < dim_; ++i) {
        out[i] = r[i] +
                 theta * (r[dim_ + i] +
                          theta1 * (r[2 * dim_ + i] +
                                    theta * (r[3 * dim_ + i] + theta1 * r[4 * dim_ + i])));
    }
}

std::vector<double> Trajectory::at(double t) const {
    std::vector<double> out(dim_);
    at_into(t, out);
    return out;
}

double Trajectory::at(double t, std::size_t component) const {
    if (component >= dim_) throw std::out_of_range("Trajectory: component index");
    std::vector<double> out(dim_);
    at_into(t, out);
    return out[component];
}

void Trajectory::write_csv(std::ostream& os, std::span<const std::string> columns) const {
    os << "t";
    for (std::size_t c = 0; c < dim_; ++c)
        os << "," << (c < columns.size() ? columns[c] : "y" + std::to_string(c));
    os << "\n";
    for (std::size_t k = 0; k < t_nodes_.size(); ++k) {
        os << format_sig17(t_nodes_[k]);
        const double* row = states_.data() + k * dim_;
        for (std::size_t c = 0; c < dim_; ++c) os << "," << format_sig17(row[c]);
        os << "\n";
    }
}

Trajectory solve_ivp(const RhsFn& rhs, double t0, const std::vector<double>& y0, double t_end,
                     const Tolerances& tol) {
    validate_tolerances(tol);
    if (!(t_end > t0)) throw std::invalid_argument("solve_ivp: t_end must exceed t0");
    if (y0.empty()) throw std::invalid_argument("solve_ivp: empty initial state");
    for (double v : y0)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_ivp: non-finite initial state");

    const std::size_t n = y0.size();
    const double span_t = t_end - t0;
    const double hmax = tol.max_step > 0.0 ? std::min(tol.max_step, span_t) : span_t / 10.0;

    Trajectory traj;
    traj.dim_ = n;
    traj.t_nodes_.push_back(t0);
    traj.states_.insert(traj.states_.end(), y0.begin(), y0.end());
    StepStats& stats = traj.stats_;

    std::vector<double> y = y0;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n), yerr(n);

    double t = t0;
    rhs(t, y, k1);
    ++stats.rhs_evals;
    for (double v : k1)
        if (!std::isfinite(v))
            throw IntegrationError("solve_ivp: non-finite derivative at t = " + format_sig6(t), t);

    double h = tol.initial_step > 0.0
                   ? std::min(tol.initial_step, hmax)
                   : initial_step_guess(rhs, t, y, k1, hmax, tol, stats);

    const double expo1 = 0.2 - kBeta * 0.75;
    double facold = 1e-4;
    bool rejected = false;
    bool last = false;

    for (long step = 0; step < kMaxSteps; ++step) {
        if (std::abs(h) <= 16.0 * std::numeric_limits<double>::epsilon() *
                               std::max(1.0, std::abs(t)))
            throw IntegrationError("solve_ivp: step size underflow near t = " + format_sig6(t), t);
        if (t + 1.01 * h - t_end > 0.0) {
            h = t_end - t;
            last = true;
        }

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] =
                y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] =
                y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(t + h, ynew, k7);
        stats.rhs_evals += 6;

        for (std::size_t i = 0; i < n; ++i)
            yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
        const double err = error_norm(yerr, y, ynew, tol);
        if (!std::isfinite(err))
            throw IntegrationError("solve_ivp: non-finite state or derivative at t = " +
                                       format_sig6(t),
                                   t);

        const double fac11 = std::pow(err, expo1);
        double fac = fac11 / std::pow(facold, kBeta);
        fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafe));
        double hnew = h / fac;

        if (err <= 1.0) {
            facold = std::max(err, 1e-4);
            ++stats.steps_accepted;

            const double tnew = last ? t_end : t + h;
            const std::size_t base = traj.rcont_.size();
            traj.rcont_.resize(base + 5 * n);
            double* r = traj.rcont_.data() + base;
            for (std::size_t i = 0; i < n; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                r[i] = y[i];
                r[n + i] = ydiff;
                r[2 * n + i] = bspl;
                r[3 * n + i] = ydiff - h * k7[i] - bspl;
                r[4 * n + i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                    d6 * k6[i] + d7 * k7[i]);
            }
            traj.t_nodes_.push_back(tnew);
            traj.states_.insert(traj.states_.end(), ynew.begin(), ynew.end());

            if (last) break;
            k1.swap(k7);  // first-same-as-last
            y.swap(ynew);
            t = tnew;

            if (std::abs(hnew) > hmax) hnew = hmax;
            if (rejected) hnew = std::min(hnew, h);
            rejected = false;
            h = hnew;
        } else {
            ++stats.steps_rejected;
            rejected = true;
            last = false;
            h = h / std::min(1.0 / kFacMin, fac11 / kSafe);
        }
    }
    if (traj.t_nodes_.back() != t_end)
        throw IntegrationError("solve_ivp: step budget exhausted at t = " + format_sig6(t), t);
    return traj;
}

namespace {

// 15-point Kronrod nodes (nonnegative half) with the embedded 7-point Gauss rule.
constexpr double kQNodes[8] = {
    0.99145537112081263920685469752633, 0.94910791234275852452618968404785,
    0.86486442335976907278971278864093, 0.74153118559939443986386477328079,
    0.58608723546769113029414483825873, 0.40584515137739716690660641207696,
    0.20778495500789846760068940377324, 0.0,
};
constexpr double kQKronrod[8] = {
    0.02293532201052922496373200805897, 0.06309209262997855329070066318920,
    0.10479001032225018383987632254152, 0.14065325971552591874518959051024,
    0.16900472663926790282658342659855, 0.19035057806478540991325640242101,
    0.20443294007529889241416199923465, 0.20948214108472782801299917489171,
};
constexpr double kQGauss[4] = {
    0.12948496616886969327061143267908, 0.27970539148927666790146777142378,
    0.38183005050511894495036977548898, 0.41795918367346938775510204081633,
};

struct Panel {
    double a, b, value, error;
};

Panel gk15_panel(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(mid);
    double kron = kQKronrod[7] * fc;
    double gauss = kQGauss[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kQNodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kron += kQKronrod[i] * fsum;
        if (i % 2 == 1) gauss += kQGauss[i / 2] * fsum;
    }
    return {a, b, kron * half, std::abs((kron - gauss) * half)};
}

}  // namespace

QuadratureResult quadrature_result(const std::function<double(double)>& f, double a, double b,
                                   double tol, long max_evals) {
    if (!(tol > 0.0)) throw std::invalid_argument("quadrature: tol must be positive");
    if (!(b >= a)) throw std::invalid_argument("quadrature: requires b >= a");
    QuadratureResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }

    auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> queue(worse);
    queue.push(gk15_panel(f, a, b));
    res.evaluations = 15;
    double total = queue.top().value;
    double err = queue.top().error;

    while (err > tol && res.evaluations + 30 <= max_evals) {
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gk15_panel(f, worst.a, mid);
        const Panel right = gk15_panel(f, mid, worst.b);
        res.evaluations += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    res.value = total;
    res.error_bound = err;
    res.converged = err <= tol;
    return res;
}

double quadrature(const std::function<double(double)>& f, double a, double b, double tol) {
    const QuadratureResult res = quadrature_result(f, a, b, tol);
    if (!res.converged)
        throw QuadratureError("quadrature: did not reach tol " + format_sig6(tol) +
                                  " (error bound " + format_sig6(res.error_bound) + ")",
                              res.value, res.error_bound);
    return res.value;
}

}  // namespace noether
