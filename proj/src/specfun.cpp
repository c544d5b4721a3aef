#include "noether/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace noether {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSeriesCut = 2.0;
constexpr double kAsymptoticCut = 36.0;

[[noreturn]] void throw_domain(const char* fn, double t) {
    throw std::domain_error(std::string(fn) + ": argument must be positive, got " +
                            std::to_string(t));
}

}  // namespace

namespace specfun_detail {

// K0(t) = -(ln(t/2) + gamma) I0(t) + sum_{k>=1} (t^2/4)^k / (k!)^2 * H_k
double k0_series(double t) {
    const double z = 0.25 * t * t;
    double term = 1.0;  // z^k / (k!)^2
    double i0 = 1.0;
    double hsum = 0.0;
    double h = 0.0;
    for (int k = 1; k < 80; ++k) {
        term *= z / (static_cast<double>(k) * k);
        h += 1.0 / k;
        i0 += term;
        hsum += term * h;
        if (term * (h + 1.0) < 1e-18 * (i0 + hsum)) break;
    }
    return -(std::log(0.5 * t) + kEulerGamma) * i0 + hsum;
}

// K1(t) = ln(t/2) I1(t) + 1/t - (t/4) sum_{k>=0} (H_k + H_{k+1} - 2 gamma)
//         (t^2/4)^k / (k! (k+1)!)
double k1_series(double t) {
    const double z = 0.25 * t * t;
    double term = 1.0;  // z^k / (k! (k+1)!)
    double i1sum = 1.0;
    double wsum = 1.0 - 2.0 * kEulerGamma;
    double hk = 0.0;
    double hk1 = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= z / (static_cast<double>(k) * (k + 1));
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1);
        i1sum += term;
        wsum += term * (hk + hk1 - 2.0 * kEulerGamma);
        if (term * (hk + hk1 + 1.0) < 1e-18 * (i1sum + std::abs(wsum) + 1.0)) break;
    }
    const double i1 = 0.5 * t * i1sum;
    return std::log(0.5 * t) * i1 + 1.0 / t - 0.25 * t * wsum;
}

namespace {

// Steed/Thompson-Barnett continued fraction for K0 and the ratio K1/K0,
// evaluated with the exponential factored out. Returns {e^t K0, e^t K1}.
std::pair<double, double> k01_cf_scaled(double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i <= 30000; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) <= eps) break;
    }
    h = a1 * h;
    const double k0 = std::sqrt(kPi / (2.0 * x)) / s;
    const double k1 = k0 * (x + 0.5 - h) / x;
    return {k0, k1};
}

// Large-argument expansion with the exponential factored out:
// e^t K_nu(t) ~ sqrt(pi/2t) sum_k c_k,  c_k = c_{k-1} (4 nu^2 - (2k-1)^2)/(8 k t).
std::pair<double, double> k01_asymptotic_scaled(double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    double s0 = 1.0;
    double s1 = 1.0;
    double c0 = 1.0;
    double c1 = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 60; ++k) {
        const double m = 2.0 * k - 1.0;
        const double denom = 8.0 * k * x;
        c0 *= -m * m / denom;
        c1 *= (4.0 - m * m) / denom;
        const double mag = std::abs(c0) + std::abs(c1);
        if (mag >= prev) break;  // expansion is divergent; stop at the smallest term
        prev = mag;
        s0 += c0;
        s1 += c1;
        if (mag <= eps * (s0 + s1)) break;
    }
    const double f = std::sqrt(kPi / (2.0 * x));
    return {f * s0, f * s1};
}

}  // namespace

std::pair<double, double> k01_continued_fraction(double t) {
    const auto [h0, h1] = k01_cf_scaled(t);
    const double damp = std::exp(-t);
    return {h0 * damp, h1 * damp};
}

std::pair<double, double> k01_asymptotic(double t) {
    const auto [h0, h1] = k01_asymptotic_scaled(t);
    const double damp = std::exp(-t);
    return {h0 * damp, h1 * damp};
}

}  // namespace specfun_detail

namespace {

struct PairEval {
    double k0 = 0.0;
    double k1 = 0.0;
    BesselMethod method = BesselMethod::series;
    bool underflowed = false;
};

PairEval eval_pair(double t) {
    PairEval e;
    if (t <= kSeriesCut) {
        e.method = BesselMethod::series;
        e.k0 = specfun_detail::k0_series(t);
        e.k1 = specfun_detail::k1_series(t);
        return e;
    }
    double h0 = 0.0;
    double h1 = 0.0;
    if (t < kAsymptoticCut) {
        e.method = BesselMethod::continued_fraction;
        std::tie(h0, h1) = specfun_detail::k01_cf_scaled(t);
    } else {
        e.method = BesselMethod::asymptotic;
        std::tie(h0, h1) = specfun_detail::k01_asymptotic_scaled(t);
    }
    const double damp = std::exp(-t);
    e.k0 = h0 * damp;
    e.k1 = h1 * damp;
    e.underflowed = (e.k0 == 0.0 || e.k1 == 0.0);
    return e;
}

}  // namespace

BesselEval bessel_k0_eval(double t) {
    if (!(t > 0.0)) throw_domain("bessel_k0", t);
    const PairEval p = eval_pair(t);
    return {t, p.k0, p.method, p.underflowed};
}

BesselEval bessel_k1_eval(double t) {
    if (!(t > 0.0)) throw_domain("bessel_k1", t);
    const PairEval p = eval_pair(t);
    return {t, p.k1, p.method, p.underflowed};
}

double bessel_k0(double t) { return bessel_k0_eval(t).value; }

double bessel_k1(double t) { return bessel_k1_eval(t).value; }

std::pair<double, double> bessel_k01(double t) {
    if (!(t > 0.0)) throw_domain("bessel_k01", t);
    const PairEval p = eval_pair(t);
    return {p.k0, p.k1};
}

double bessel_k1_deriv(double t) {
    if (!(t > 0.0)) throw_domain("bessel_k1_deriv", t);
    const PairEval p = eval_pair(t);
    return -(p.k0 + p.k1 / t);
}

}  // namespace noether
