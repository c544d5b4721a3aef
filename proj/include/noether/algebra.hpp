#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "noether/invariants.hpp"

#include <json.hpp>

namespace noether {

/// Point-symmetry vector field tau(q,t) d_t + eta(q,t) d_q with analytic
/// partial derivatives. index identifies the basis element (1..5).
struct GeneratorField {
    int index = 0;
    std::function<double(double q, double t)> tau, eta;
    std::function<double(double q, double t)> tau_q, tau_t, eta_q, eta_t;
};

/// Basis generators built from the fundamental pair:
///   G1 = -g1 d_q                 G2 = -g2 d_q
///   G3 = g1^2 d_t + g1 g1' q d_q
///   G4 = 2 g1 g2 d_t + (g1 g2' + g2 g1') q d_q
///   G5 = g2^2 d_t + g2 g2' q d_q
GeneratorField generator(const FundamentalPair& pair, int index);

/// Components {tau, eta} of the commutator [A, B] at (q, t).
std::pair<double, double> lie_bracket(const GeneratorField& a, const GeneratorField& b, double q,
                                      double t);

struct CommutatorRelation {
    int i = 0, j = 0;
    std::array<double, 5> expected{};   // basis coefficients of [Gi, Gj]
    double max_deviation = 0.0;         // pointwise gap to the expected combination
    std::array<double, 5> recovered{};  // least-squares coefficients over the samples
    std::array<int, 5> recovered_rounded{};
    double recovery_gap = 0.0;  // max |recovered - rounded|
    bool pass = false;
};

struct CommutatorReport {
    std::vector<CommutatorRelation> relations;  // the 10 unordered pairs
    double tolerance = 0.0;                     // threshold applied to max_deviation
    double g_scale = 0.0;                       // max |pair component| over the samples
    int sample_count = 0;
    bool pass = false;

    nlohmann::json to_json() const;
};

/// Verifies the closure table of the five generators at the given (q, t)
/// samples. Threshold: 1e-6 * (1 + g_scale^2).
CommutatorReport verify_commutator_table(const FundamentalPair& pair,
                                         std::span<const std::array<double, 2>> qt_samples);

/// p = qdot - phi(t) q.
double canonical_momentum(const GaugeProfile& profile, double q, double qdot, double t);

struct PhaseFunction {
    std::function<double(double q, double p, double t)> evaluator;
    std::string label;

    double operator()(double q, double p, double t) const { return evaluator(q, p, t); }
};

/// The conserved quantity I_index as a function on phase space.
PhaseFunction invariant_phase_function(const FundamentalPair& pair, int index);

/// Central-difference canonical bracket {A, B} = A_q B_p - A_p B_q with
/// stencil h = step * max(1, |q|, |p|).
double poisson_bracket(const PhaseFunction& a, const PhaseFunction& b, double q, double p,
                       double t, double step = 1e-6);

struct PoissonRelation {
    int i = 0, j = 0;
    std::string name;
    double max_deviation = 0.0;  // scale-relative
    bool pass = false;
};

struct PoissonReport {
    std::vector<PoissonRelation> relations;  // the 10 unordered pairs
    double tolerance = 0.0;
    double fd_step = 0.0;
    int sample_count = 0;
    bool pass = false;

    nlohmann::json to_json() const;
};

/// Verifies the canonical bracket table of I1..I5 at the given (q, p, t)
/// samples. Deviations are measured relative to 1 + I1^2 + I2^2 at the
/// sample; threshold 1e-6. The invariants are quadratic in (q, p), so the
/// central differences carry no truncation error and the default step is
/// sized to suppress rounding instead.
PoissonReport verify_poisson_table(const FundamentalPair& pair,
                                   std::span<const std::array<double, 3>> qpt_samples,
                                   double fd_step = 1e-3);

}  // namespace noether
