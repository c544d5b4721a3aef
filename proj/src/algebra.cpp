#include "noether/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "noether/io.hpp"

namespace noether {

GeneratorField generator(const FundamentalPair& pair, int index) {
    if (index < 1 || index > 5)
        throw std::invalid_argument("generator: index must be 1..5, got " +
                                    std::to_string(index));
    GeneratorField f;
    f.index = index;
    auto zero = [](double, double) { return 0.0; };

    switch (index) {
        case 1:
        case 2: {
            const bool first = (index == 1);
            f.tau = zero;
            f.tau_q = zero;
            f.tau_t = zero;
            f.eta = [pair, first](double, double t) {
                const auto v = pair.eval(t);
                return -(first ? v.g1 : v.g2);
            };
            f.eta_q = zero;
            f.eta_t = [pair, first](double, double t) {
                const auto v = pair.eval(t);
                return -(first ? v.g1_dot : v.g2_dot);
            };
            break;
        }
        case 3:
        case 5: {
            const bool first = (index == 3);
            f.tau = [pair, first](double, double t) {
                const auto v = pair.eval(t);
                const double g = first ? v.g1 : v.g2;
                return g * g;
            };
            f.tau_q = zero;
            f.tau_t = [pair, first](double, double t) {
                const auto v = pair.eval(t);
                return 2.0 * (first ? v.g1 * v.g1_dot : v.g2 * v.g2_dot);
            };
            f.eta = [pair, first](double q, double t) {
                const auto v = pair.eval(t);
                return (first ? v.g1 * v.g1_dot : v.g2 * v.g2_dot) * q;
            };
            f.eta_q = [pair, first](double, double t) {
                const auto v = pair.eval(t);
                return first ? v.g1 * v.g1_dot : v.g2 * v.g2_dot;
            };
            f.eta_t = [pair, first](double q, double t) {
                const auto v = pair.eval(t);
                const double w2 = omega_squared(pair.profile(), t);
                const double g = first ? v.g1 : v.g2;
                const double gd = first ? v.g1_dot : v.g2_dot;
                return (gd * gd - w2 * g * g) * q;
            };
            break;
        }
        case 4: {
            f.tau = [pair](double, double t) {
                const auto v = pair.eval(t);
                return 2.0 * v.g1 * v.g2;
            };
            f.tau_q = zero;
            f.tau_t = [pair](double, double t) {
                const auto v = pair.eval(t);
                return 2.0 * (v.g1_dot * v.g2 + v.g1 * v.g2_dot);
            };
            f.eta = [pair](double q, double t) {
                const auto v = pair.eval(t);
                return (v.g1 * v.g2_dot + v.g2 * v.g1_dot) * q;
            };
            f.eta_q = [pair](double, double t) {
                const auto v = pair.eval(t);
                return v.g1 * v.g2_dot + v.g2 * v.g1_dot;
            };
            f.eta_t = [pair](double q, double t) {
                const auto v = pair.eval(t);
                const double w2 = omega_squared(pair.profile(), t);
                return 2.0 * (v.g1_dot * v.g2_dot - w2 * v.g1 * v.g2) * q;
            };
            break;
        }
    }
    return f;
}

std::pair<double, double> lie_bracket(const GeneratorField& a, const GeneratorField& b, double q,
                                      double t) {
    const double ta = a.tau(q, t), ea = a.eta(q, t);
    const double tb = b.tau(q, t), eb = b.eta(q, t);
    const double tau_c =
        ta * b.tau_t(q, t) + ea * b.tau_q(q, t) - tb * a.tau_t(q, t) - eb * a.tau_q(q, t);
    const double eta_c =
        ta * b.eta_t(q, t) + ea * b.eta_q(q, t) - tb * a.eta_t(q, t) - eb * a.eta_q(q, t);
    return {tau_c, eta_c};
}

namespace {

// Closure table: coefficients of [Gi, Gj] in the (G1..G5) basis.
//   [G1,G4] = G1   [G1,G5] = G2   [G2,G3] = -G1   [G2,G4] = -G2
//   [G3,G4] = 2G3  [G3,G5] = G4   [G4,G5] = 2G5   (the rest vanish)
std::array<double, 5> expected_bracket(int i, int j) {
    std::array<double, 5> c{};
    auto set = [&c](int k, double v) { c[k - 1] = v; };
    if (i == 1 && j == 4) set(1, 1.0);
    if (i == 1 && j == 5) set(2, 1.0);
    if (i == 2 && j == 3) set(1, -1.0);
    if (i == 2 && j == 4) set(2, -1.0);
    if (i == 3 && j == 4) set(3, 2.0);
    if (i == 3 && j == 5) set(4, 1.0);
    if (i == 4 && j == 5) set(5, 2.0);
    return c;
}

// Solve the 5x5 normal equations by Gaussian elimination with partial pivoting.
std::array<double, 5> solve_normal(std::array<std::array<double, 5>, 5> m,
                                   std::array<double, 5> rhs) {
    for (int col = 0; col < 5; ++col) {
        int piv = col;
        for (int r = col + 1; r < 5; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        std::swap(rhs[col], rhs[piv]);
        if (std::abs(m[col][col]) < 1e-300)
            throw std::runtime_error("verify_commutator_table: degenerate sample set");
        for (int r = col + 1; r < 5; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int k = col; k < 5; ++k) m[r][k] -= f * m[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    std::array<double, 5> x{};
    for (int r = 4; r >= 0; --r) {
        double acc = rhs[r];
        for (int k = r + 1; k < 5; ++k) acc -= m[r][k] * x[k];
        x[r] = acc / m[r][r];
    }
    return x;
}

}  // namespace

CommutatorReport verify_commutator_table(const FundamentalPair& pair,
                                         std::span<const std::array<double, 2>> qt_samples) {
    if (qt_samples.size() < 5)
        throw std::invalid_argument("verify_commutator_table: need at least 5 samples");

    std::array<GeneratorField, 5> basis;
    for (int k = 1; k <= 5; ++k) basis[k - 1] = generator(pair, k);

    CommutatorReport rep;
    rep.sample_count = static_cast<int>(qt_samples.size());
    for (const auto& s : qt_samples) {
        const auto v = pair.eval(s[1]);
        for (double x : {v.g1, v.g1_dot, v.g2, v.g2_dot})
            rep.g_scale = std::max(rep.g_scale, std::abs(x));
    }
    rep.tolerance = 1e-6 * (1.0 + rep.g_scale * rep.g_scale);

    rep.pass = true;
    for (int i = 1; i <= 5; ++i) {
        for (int j = i + 1; j <= 5; ++j) {
            CommutatorRelation rel;
            rel.i = i;
            rel.j = j;
            rel.expected = expected_bracket(i, j);

            // Least-squares decomposition of the bracket in the basis,
            // accumulating both components of every sample. Each sample is
            // weighted by its inverse squared magnitude: the basis fields grow
            // like g^2, so unweighted normal equations are dominated by the
            // late-time samples and the recovered coefficients inherit their
            // absolute noise.
            std::array<std::array<double, 5>, 5> normal{};
            std::array<double, 5> moment{};

            for (const auto& s : qt_samples) {
                const double q = s[0];
                const double t = s[1];
                const auto [bt, be] = lie_bracket(basis[i - 1], basis[j - 1], q, t);

                double expect_t = 0.0, expect_e = 0.0;
                double local = 1.0;
                std::array<double, 5> base_t{}, base_e{};
                for (int k = 0; k < 5; ++k) {
                    base_t[k] = basis[k].tau(q, t);
                    base_e[k] = basis[k].eta(q, t);
                    expect_t += rel.expected[k] * base_t[k];
                    expect_e += rel.expected[k] * base_e[k];
                    local = std::max({local, std::abs(base_t[k]), std::abs(base_e[k])});
                }
                rel.max_deviation = std::max({rel.max_deviation, std::abs(bt - expect_t),
                                              std::abs(be - expect_e)});
                const double weight = 1.0 / (local * local);
                for (int r = 0; r < 5; ++r) {
                    moment[r] += weight * (base_t[r] * bt + base_e[r] * be);
                    for (int k = 0; k < 5; ++k)
                        normal[r][k] += weight * (base_t[r] * base_t[k] + base_e[r] * base_e[k]);
                }
            }
            rel.recovered = solve_normal(normal, moment);
            for (int k = 0; k < 5; ++k) {
                rel.recovered_rounded[k] = static_cast<int>(std::lround(rel.recovered[k]));
                rel.recovery_gap = std::max(
                    rel.recovery_gap, std::abs(rel.recovered[k] - rel.recovered_rounded[k]));
            }
            rel.pass = rel.max_deviation <= rep.tolerance;
            for (int k = 0; k < 5; ++k)
                rel.pass = rel.pass && rel.recovered_rounded[k] ==
                                           static_cast<int>(std::lround(rel.expected[k]));
            rep.pass = rep.pass && rel.pass;
            rep.relations.push_back(rel);
        }
    }
    return rep;
}

nlohmann::json CommutatorReport::to_json() const {
    nlohmann::json j;
    j["tolerance"] = tolerance;
    j["g_scale"] = g_scale;
    j["sample_count"] = sample_count;
    j["pass"] = pass;
    j["relations"] = nlohmann::json::array();
    for (const auto& r : relations) {
        j["relations"].push_back({{"i", r.i},
                                  {"j", r.j},
                                  {"expected", r.expected},
                                  {"max_deviation", r.max_deviation},
                                  {"recovered", r.recovered},
                                  {"recovered_rounded", r.recovered_rounded},
                                  {"recovery_gap", r.recovery_gap},
                                  {"pass", r.pass}});
    }
    return j;
}

double canonical_momentum(const GaugeProfile& profile, double q, double qdot, double t) {
    return qdot - profile.phi(t) * q;
}

PhaseFunction invariant_phase_function(const FundamentalPair& pair, int index) {
    if (index < 1 || index > 5)
        throw std::invalid_argument("invariant_phase_function: index must be 1..5");
    PhaseFunction f;
    f.label = "I" + std::to_string(index);
    f.evaluator = [pair, index](double q, double p, double t) {
        return invariant_I(pair, index, PhaseState{t, q, p});
    };
    return f;
}

double poisson_bracket(const PhaseFunction& a, const PhaseFunction& b, double q, double p,
                       double t, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("poisson_bracket: step must be positive");
    const double h = step * std::max({1.0, std::abs(q), std::abs(p)});
    const double a_q = (a(q + h, p, t) - a(q - h, p, t)) / (2.0 * h);
    const double a_p = (a(q, p + h, t) - a(q, p - h, t)) / (2.0 * h);
    const double b_q = (b(q + h, p, t) - b(q - h, p, t)) / (2.0 * h);
    const double b_p = (b(q, p + h, t) - b(q, p - h, t)) / (2.0 * h);
    return a_q * b_p - a_p * b_q;
}

PoissonReport verify_poisson_table(const FundamentalPair& pair,
                                   std::span<const std::array<double, 3>> qpt_samples,
                                   double fd_step) {
    if (qpt_samples.empty())
        throw std::invalid_argument("verify_poisson_table: need at least one sample");

    std::array<PhaseFunction, 5> inv;
    for (int k = 1; k <= 5; ++k) inv[k - 1] = invariant_phase_function(pair, k);

    // {Ii, Ij} written as w-, I1-, I2-polynomials evaluated at the sample:
    //   {I1,I2} = 1     {I1,I3} = 0      {I1,I4} = I1     {I1,I5} = I2
    //   {I2,I3} = -I1   {I2,I4} = -I2    {I2,I5} = 0
    //   {I3,I4} = I1^2  {I3,I5} = I1 I2  {I4,I5} = I2^2
    auto expected = [](int i, int j, double i1, double i2) -> double {
        if (i == 1 && j == 2) return 1.0;
        if (i == 1 && j == 4) return i1;
        if (i == 1 && j == 5) return i2;
        if (i == 2 && j == 3) return -i1;
        if (i == 2 && j == 4) return -i2;
        if (i == 3 && j == 4) return i1 * i1;
        if (i == 3 && j == 5) return i1 * i2;
        if (i == 4 && j == 5) return i2 * i2;
        return 0.0;
    };

    PoissonReport rep;
    rep.tolerance = 1e-6;
    rep.fd_step = fd_step;
    rep.sample_count = static_cast<int>(qpt_samples.size());
    rep.pass = true;

    for (int i = 1; i <= 5; ++i) {
        for (int j = i + 1; j <= 5; ++j) {
            PoissonRelation rel;
            rel.i = i;
            rel.j = j;
            rel.name = "{I" + std::to_string(i) + ",I" + std::to_string(j) + "}";
            for (const auto& s : qpt_samples) {
                const double q = s[0], p = s[1], t = s[2];
                const double bracket = poisson_bracket(inv[i - 1], inv[j - 1], q, p, t, fd_step);
                const double i1 = inv[0](q, p, t);
                const double i2 = inv[1](q, p, t);
                const double scale = 1.0 + i1 * i1 + i2 * i2;
                rel.max_deviation = std::max(
                    rel.max_deviation, std::abs(bracket - expected(i, j, i1, i2)) / scale);
            }
            rel.pass = rel.max_deviation <= rep.tolerance;
            rep.pass = rep.pass && rel.pass;
            rep.relations.push_back(rel);
        }
    }
    return rep;
}

nlohmann::json PoissonReport::to_json() const {
    nlohmann::json j;
    j["tolerance"] = tolerance;
    j["fd_step"] = fd_step;
    j["sample_count"] = sample_count;
    j["pass"] = pass;
    j["relations"] = nlohmann::json::array();
    for (const auto& r : relations) {
        j["relations"].push_back({{"i", r.i},
                                  {"j", r.j},
                                  {"name", r.name},
                                  {"max_deviation", r.max_deviation},
                                  {"pass", r.pass}});
    }
    return j;
}

}  // namespace noether
