#pragma once

#include <utility>

namespace noether {

/// Which evaluation branch produced a Bessel value.
enum class BesselMethod { series, continued_fraction, asymptotic };

struct BesselEval {
    double argument = 0.0;
    double value = 0.0;
    BesselMethod method_tag = BesselMethod::series;
    bool underflowed = false;  // value flushed to zero for very large arguments
};

/// Modified Bessel functions of the second kind, K0 and K1.
/// Branches: power series for t <= 2, a continued fraction for 2 < t < 36,
/// and the large-argument expansion for t >= 36. Relative error is at the
/// 1e-13 level across [1e-6, 700]; beyond roughly t = 746 the value
/// underflows to zero and the eval carries a flag.
BesselEval bessel_k0_eval(double t);
BesselEval bessel_k1_eval(double t);

double bessel_k0(double t);
double bessel_k1(double t);

/// {K0(t), K1(t)} in one evaluation (single pass for the shared branches).
std::pair<double, double> bessel_k01(double t);

/// K1'(t) = -K0(t) - K1(t)/t.
double bessel_k1_deriv(double t);

namespace specfun_detail {
// Branch internals, exposed so the selftest can cross-check seam agreement.
double k0_series(double t);
double k1_series(double t);
std::pair<double, double> k01_continued_fraction(double t);
std::pair<double, double> k01_asymptotic(double t);
}  // namespace specfun_detail

}  // namespace noether
