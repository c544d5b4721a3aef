#include "noether/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "noether/algebra.hpp"
#include "noether/io.hpp"
#include "noether/rng.hpp"
#include "noether/specfun.hpp"

namespace noether::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path ensure_outdir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory '" + dir.string() +
                          "': " + ec.message());
    return dir;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw ConfigError("cannot open '" + p.string() + "' for writing");
    os << content;
    os.flush();
    if (!os) throw ConfigError("failed while writing '" + p.string() + "'");
}

bool wants(const RunConfig& cfg, const std::string& fmt) {
    return std::find(cfg.formats.begin(), cfg.formats.end(), fmt) != cfg.formats.end();
}

json config_json(const RunConfig& cfg) {
    return json{{"profile", cfg.profile},
                {"n", cfg.n},
                {"allow_even_n", cfg.allow_even_n},
                {"t0", cfg.t0},
                {"t_end", cfg.t_end},
                {"rtol", cfg.tolerances.rel},
                {"atol", cfg.tolerances.abs},
                {"q0", cfg.q0},
                {"p0", cfg.p0},
                {"c", {cfg.coefficients.c1, cfg.coefficients.c2, cfg.coefficients.c3,
                       cfg.coefficients.c4, cfg.coefficients.c5}},
                {"seed", cfg.seed},
                {"samples", cfg.samples},
                {"drift_tol", cfg.drift_tol}};
}

// Minimal self-contained polyline plot; deterministic output.
std::string svg_plot(const std::string& title, std::span<const double> t,
                     std::span<const std::pair<std::string, const std::vector<double>*>> series) {
    constexpr double W = 880, H = 520, ml = 70, mr = 20, mt = 40, mb = 40;
    double ymin = 0.0, ymax = 0.0;
    bool first = true;
    for (const auto& [name, vals] : series) {
        for (double v : *vals) {
            if (first) {
                ymin = ymax = v;
                first = false;
            }
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (ymax - ymin < 1e-300) {
        ymax += 1.0;
        ymin -= 1.0;
    }
    const double x0 = t.front(), x1 = t.back();
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 880 520\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"880\" height=\"520\" fill=\"white\"/>\n";
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (W - ml - mr)
       << "\" height=\"" << (H - mt - mb)
       << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
       << title << "</text>\n";
    os << "<text x=\"8\" y=\"" << py(ymax) + 4
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_sig6(ymax) << "</text>\n";
    os << "<text x=\"8\" y=\"" << py(ymin) + 4
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_sig6(ymin) << "</text>\n";
    os << "<text x=\"" << px(x0) << "\" y=\"" << H - 12
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_sig6(x0) << "</text>\n";
    os << "<text x=\"" << px(x1) - 40 << "\" y=\"" << H - 12
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_sig6(x1) << "</text>\n";

    int color = 0;
    double legend_x = ml + 10;
    for (const auto& [name, vals] : series) {
        os << "<polyline fill=\"none\" stroke=\"" << palette[color % 4]
           << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t k = 0; k < t.size(); ++k) {
            os << format_sig6(px(t[k])) << "," << format_sig6(py((*vals)[k]));
            if (k + 1 < t.size()) os << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << legend_x << "\" y=\"" << mt + 16
           << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << palette[color % 4]
           << "\">" << name << "</text>\n";
        legend_x += 60;
        ++color;
    }
    os << "</svg>\n";
    return os.str();
}

std::vector<double> uniform_grid(double a, double b, int points) {
    std::vector<double> g(points);
    for (int k = 0; k < points; ++k)
        g[k] = a + (b - a) * k / static_cast<double>(points - 1);
    g.back() = b;
    return g;
}

RhsFn reduced_system(const GaugeProfile& profile) {
    return [profile](double t, const std::vector<double>& y, std::vector<double>& dy) {
        const double f = profile.phi(t);
        dy[0] = y[1] + f * y[0];
        dy[1] = -y[0] - f * y[1];
    };
}

}  // namespace

void validate_config(const RunConfig& cfg) {
    if (cfg.profile != "bessel" && cfg.profile != "zero")
        throw ConfigError("profile must be 'bessel' or 'zero', got '" + cfg.profile + "'");
    if (!(cfg.t0 > 0.0)) throw ConfigError("t0 must be positive");
    if (!(cfg.t_end > cfg.t0)) throw ConfigError("t_end must exceed t0");
    try {
        validate_tolerances(cfg.tolerances);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.profile == "bessel") {
        if (cfg.n == 0) throw ConfigError("vorticity n must be nonzero");
        if (cfg.n % 2 == 0 && !cfg.allow_even_n)
            throw ConfigError("even vorticity n = " + std::to_string(cfg.n) +
                              " requires --allow-even-n");
        if (cfg.n % 2 == 0 && cfg.allow_even_n)
            std::cerr << "warning: running with even vorticity n = " << cfg.n << "\n";
    }
    if (cfg.formats.empty()) throw ConfigError("format list must not be empty");
    for (const auto& f : cfg.formats)
        if (f != "csv" && f != "json" && f != "svg")
            throw ConfigError("unknown format '" + f + "' (expected csv, json or svg)");
    if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
    if (!(cfg.drift_tol > 0.0)) throw ConfigError("drift tolerance must be positive");
}

GaugeProfile profile_of(const RunConfig& cfg) {
    if (cfg.profile == "zero") return phi_zero();
    return phi_bessel(cfg.n, cfg.allow_even_n);
}

int cmd_simulate(const RunConfig& cfg) {
    const fs::path dir = ensure_outdir(cfg);
    const GaugeProfile profile = profile_of(cfg);
    const Trajectory traj = solve_ivp(reduced_system(profile), cfg.t0, {cfg.q0, cfg.p0},
                                      cfg.t_end, cfg.tolerances);

    const auto& tg = traj.t_grid();
    std::vector<double> qs(tg.size()), ps(tg.size());
    std::string csv = "t,q,p,qdot,H\n";
    for (std::size_t k = 0; k < tg.size(); ++k) {
        const auto row = traj.node_state(k);
        const PhaseState s{tg[k], row[0], row[1]};
        qs[k] = s.q;
        ps[k] = s.p;
        csv += format_sig17(s.t);
        csv += ",";
        csv += format_sig17(s.q);
        csv += ",";
        csv += format_sig17(s.p);
        csv += ",";
        csv += format_sig17(qdot_of(profile, s));
        csv += ",";
        csv += format_sig17(hamiltonian(profile, s));
        csv += "\n";
    }
    if (wants(cfg, "csv")) write_file(dir / "simulate.csv", csv);
    if (wants(cfg, "json")) {
        json j;
        j["config"] = config_json(cfg);
        j["stats"] = {{"steps_accepted", traj.stats().steps_accepted},
                      {"steps_rejected", traj.stats().steps_rejected},
                      {"rhs_evals", traj.stats().rhs_evals},
                      {"nodes", traj.node_count()}};
        j["final"] = {{"t", tg.back()}, {"q", qs.back()}, {"p", ps.back()}};
        write_file(dir / "simulate.json", j.dump(2) + "\n");
    }
    if (wants(cfg, "svg")) {
        const std::array<std::pair<std::string, const std::vector<double>*>, 2> series{
            {{"q", &qs}, {"p", &ps}}};
        write_file(dir / "simulate.svg", svg_plot("reduced system", tg, series));
    }
    std::cout << "simulate: " << traj.node_count() << " nodes, final q = "
              << format_sig6(qs.back()) << ", p = " << format_sig6(ps.back()) << "\n";
    return kExitOk;
}

int cmd_fundamental(const RunConfig& cfg) {
    const fs::path dir = ensure_outdir(cfg);
    const GaugeProfile profile = profile_of(cfg);
    const FundamentalPair pair = fundamental_pair(profile, cfg.t0, cfg.t_end, cfg.tolerances);
    const Trajectory& traj = *pair.trajectory();

    const auto& tg = traj.t_grid();
    std::vector<double> g1(tg.size()), g2(tg.size());
    double wmax_dev = 0.0;
    std::string csv = "t,g1,g1dot,g2,g2dot,wronskian\n";
    for (std::size_t k = 0; k < tg.size(); ++k) {
        const auto row = traj.node_state(k);
        const double w = row[0] * row[3] - row[2] * row[1];
        wmax_dev = std::max(wmax_dev, std::abs(w - 1.0));
        g1[k] = row[0];
        g2[k] = row[2];
        csv += format_sig17(tg[k]);
        for (double v : {row[0], row[1], row[2], row[3], w}) {
            csv += ",";
            csv += format_sig17(v);
        }
        csv += "\n";
    }
    if (wants(cfg, "csv")) write_file(dir / "fundamental.csv", csv);
    if (wants(cfg, "json")) {
        json j;
        j["config"] = config_json(cfg);
        j["stats"] = {{"steps_accepted", traj.stats().steps_accepted},
                      {"steps_rejected", traj.stats().steps_rejected},
                      {"rhs_evals", traj.stats().rhs_evals},
                      {"nodes", traj.node_count()}};
        j["wronskian_max_deviation"] = wmax_dev;
        write_file(dir / "fundamental.json", j.dump(2) + "\n");
    }
    if (wants(cfg, "svg")) {
        const std::array<std::pair<std::string, const std::vector<double>*>, 2> series{
            {{"g1", &g1}, {"g2", &g2}}};
        write_file(dir / "fundamental.svg", svg_plot("fundamental pair", tg, series));
    }
    std::cout << "fundamental: " << traj.node_count()
              << " nodes, max |W - 1| = " << format_sig6(wmax_dev) << "\n";
    return kExitOk;
}

int cmd_invariants(const RunConfig& cfg) {
    const fs::path dir = ensure_outdir(cfg);
    const GaugeProfile profile = profile_of(cfg);
    const FundamentalPair pair = fundamental_pair(profile, cfg.t0, cfg.t_end, cfg.tolerances);
    const Trajectory traj = solve_ivp(reduced_system(profile), cfg.t0, {cfg.q0, cfg.p0},
                                      cfg.t_end, cfg.tolerances);

    const std::vector<double> grid = uniform_grid(cfg.t0, cfg.t_end, 512);
    const InvariantReport report =
        drift_report(pair, traj, cfg.coefficients, grid, cfg.drift_tol);

    if (wants(cfg, "json")) {
        json j = report.to_json();
        j["config"] = config_json(cfg);
        write_file(dir / "invariants.json", j.dump(2) + "\n");
    }
    if (wants(cfg, "csv")) {
        std::ostringstream os;
        report.write_csv(os);
        write_file(dir / "invariants.csv", os.str());
    }
    for (const auto& s : report.series)
        std::cout << "invariants: drift " << s.name << " = " << format_sig6(s.drift) << "\n";
    if (!report.pass) {
        std::cerr << "invariants: drift exceeds tolerance " << format_sig6(cfg.drift_tol)
                  << "\n";
        return kExitVerification;
    }
    return kExitOk;
}

int cmd_algebra(const RunConfig& cfg) {
    const fs::path dir = ensure_outdir(cfg);
    const GaugeProfile profile = profile_of(cfg);
    const FundamentalPair pair = fundamental_pair(profile, cfg.t0, cfg.t_end, cfg.tolerances);

    const double t_lo = cfg.t0 + 0.1;
    const double t_hi = 0.8 * cfg.t_end;
    if (!(t_hi > t_lo))
        throw ConfigError("window too short for algebra sampling (need 0.8 t_end > t0 + 0.1)");

    SampleRng rng(cfg.seed);
    std::vector<std::array<double, 2>> qt(cfg.samples);
    for (auto& s : qt) s = {rng.uniform(-2.0, 2.0), rng.uniform(t_lo, t_hi)};
    std::vector<std::array<double, 3>> qpt(cfg.samples);
    for (auto& s : qpt)
        s = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(t_lo, t_hi)};

    const CommutatorReport com = verify_commutator_table(pair, qt);
    const PoissonReport poi = verify_poisson_table(pair, qpt);

    if (wants(cfg, "json")) {
        json j;
        j["config"] = config_json(cfg);
        j["commutator"] = com.to_json();
        j["poisson"] = poi.to_json();
        j["pass"] = com.pass && poi.pass;
        write_file(dir / "algebra.json", j.dump(2) + "\n");
    }
    std::cout << "algebra: commutator " << (com.pass ? "ok" : "FAIL") << " (max dev "
              << format_sig6(std::max_element(com.relations.begin(), com.relations.end(),
                                              [](const auto& a, const auto& b) {
                                                  return a.max_deviation < b.max_deviation;
                                              })
                                 ->max_deviation)
              << ", tol " << format_sig6(com.tolerance) << ")\n";
    std::cout << "algebra: poisson " << (poi.pass ? "ok" : "FAIL") << " (max dev "
              << format_sig6(std::max_element(poi.relations.begin(), poi.relations.end(),
                                              [](const auto& a, const auto& b) {
                                                  return a.max_deviation < b.max_deviation;
                                              })
                                 ->max_deviation)
              << ", tol " << format_sig6(poi.tolerance) << ")\n";
    return (com.pass && poi.pass) ? kExitOk : kExitVerification;
}

int cmd_figures(const RunConfig& cfg) {
    const fs::path dir = ensure_outdir(cfg);
    struct Preset {
        const char* stem;
        int n;
        double t0;
    };
    constexpr Preset presets[3] = {{"fig1", 1, 1e-2}, {"fig2", 3, 1e-2}, {"fig3", 1, 1e-4}};

    for (const Preset& ps : presets) {
        const FundamentalPair pair =
            fundamental_pair(phi_bessel(ps.n), ps.t0, cfg.t_end, cfg.tolerances);
        const std::vector<double> grid = uniform_grid(ps.t0, cfg.t_end, 2001);

        std::vector<double> g1(grid.size()), g1d(grid.size()), g2(grid.size()),
            g2d(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto v = pair.eval(grid[k]);
            g1[k] = v.g1;
            g1d[k] = v.g1_dot;
            g2[k] = v.g2;
            g2d[k] = v.g2_dot;
        }
        auto panel = [&](const char suffix, const std::vector<double>& g,
                         const std::vector<double>& gd) {
            const std::string stem = std::string(ps.stem) + suffix;
            std::string csv = "t,g,gdot\n";
            for (std::size_t k = 0; k < grid.size(); ++k) {
                csv += format_sig17(grid[k]);
                csv += ",";
                csv += format_sig17(g[k]);
                csv += ",";
                csv += format_sig17(gd[k]);
                csv += "\n";
            }
            if (wants(cfg, "csv")) write_file(dir / (stem + ".csv"), csv);
            if (wants(cfg, "svg")) {
                const std::array<std::pair<std::string, const std::vector<double>*>, 1>
                    series{{{suffix == 'a' ? "g1" : "g2", &g}}};
                write_file(dir / (stem + ".svg"), svg_plot(stem, grid, series));
            }
        };
        panel('a', g1, g1d);
        panel('b', g2, g2d);
        std::cout << "figures: " << ps.stem << " (n = " << ps.n
                  << ", t0 = " << format_sig6(ps.t0) << ") written\n";
    }
    return kExitOk;
}

namespace {

struct Check {
    std::string name;
    double max_dev = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

std::vector<double> log_grid(double a, double b, int points) {
    std::vector<double> g(points);
    const double la = std::log10(a), lb = std::log10(b);
    for (int k = 0; k < points; ++k)
        g[k] = std::pow(10.0, la + (lb - la) * k / static_cast<double>(points - 1));
    return g;
}

}  // namespace

int cmd_selftest(const RunConfig& cfg) {
    const fs::path dir = ensure_outdir(cfg);
    std::vector<Check> checks;

    // Cross-check table for the special functions.
    struct Row {
        double t, k0, k1, k1d;
    };
    std::vector<Row> rows;
    for (double t : log_grid(1e-4, 50.0, 1000))
        rows.push_back({t, bessel_k0(t), bessel_k1(t), bessel_k1_deriv(t)});
    if (cfg.inject_fault) rows[rows.size() / 2].k0 *= 1.0 + 1e-6;

    {
        Check c{"bessel-recurrence", 0.0, 1e-11, false};
        for (const Row& r : rows) {
            const double res = std::abs(r.k1d + r.k0 + r.k1 / r.t) / (1.0 + std::abs(r.k1d));
            c.max_dev = std::max(c.max_dev, res);
        }
        c.pass = c.max_dev <= c.threshold;
        checks.push_back(c);
    }
    {
        Check c{"bessel-monotone", 0.0, 0.0, false};
        for (std::size_t k = 1; k < rows.size(); ++k) {
            c.max_dev = std::max(c.max_dev, rows[k].k0 - rows[k - 1].k0);
            c.max_dev = std::max(c.max_dev, rows[k].k1 - rows[k - 1].k1);
        }
        c.pass = c.max_dev <= c.threshold;
        checks.push_back(c);
    }
    {
        Check c{"bessel-small-t-coarse", 0.0, 1e-2, false};
        for (double t : log_grid(1e-6, 1e-2, 200))
            c.max_dev = std::max(c.max_dev, std::abs(t * bessel_k1(t) - 1.0));
        c.pass = c.max_dev <= c.threshold;
        checks.push_back(c);
    }
    {
        Check c{"bessel-small-t-fine", 0.0, 1e-4, false};
        for (double t : log_grid(1e-6, 1e-4, 200))
            c.max_dev = std::max(c.max_dev, std::abs(t * bessel_k1(t) - 1.0));
        c.pass = c.max_dev <= c.threshold;
        checks.push_back(c);
    }
    {
        Check c{"bessel-seam-series-cf", 0.0, 1e-13, false};
        const double s0 = specfun_detail::k0_series(2.0);
        const double s1 = specfun_detail::k1_series(2.0);
        const auto [c0, c1] = specfun_detail::k01_continued_fraction(2.0);
        c.max_dev = std::max(std::abs(s0 - c0) / c0, std::abs(s1 - c1) / c1);
        c.pass = c.max_dev <= c.threshold;
        checks.push_back(c);
    }
    {
        Check c{"bessel-seam-cf-asym", 0.0, 1e-13, false};
        const auto [c0, c1] = specfun_detail::k01_continued_fraction(36.0);
        const auto [a0, a1] = specfun_detail::k01_asymptotic(36.0);
        c.max_dev = std::max(std::abs(c0 - a0) / a0, std::abs(c1 - a1) / a1);
        c.pass = c.max_dev <= c.threshold;
        checks.push_back(c);
    }

    // Closed-form oscillator cross-checks on a tight integration.
    const double t0 = 0.25, t1 = 40.25;
    const Tolerances tight{1e-12, 1e-14, 0.0, 0.0};
    const GaugeProfile zero = phi_zero();
    const FundamentalPair pair = fundamental_pair(zero, t0, t1, tight);
    {
        Check c{"oscillator-closed-form", 0.0, 1e-9, false};
        for (double t : uniform_grid(t0, t1, 800)) {
            const auto v = pair.eval(t);
            c.max_dev = std::max(c.max_dev, std::abs(v.g1 - std::cos(t - t0)));
            c.max_dev = std::max(c.max_dev, std::abs(v.g2 - std::sin(t - t0)));
        }
        c.pass = c.max_dev <= c.threshold;
        checks.push_back(c);
    }
    {
        Check c{"oscillator-wronskian", 0.0, 1e-10, false};
        for (double t : uniform_grid(t0, t1, 800))
            c.max_dev = std::max(c.max_dev, std::abs(wronskian(pair, t) - 1.0));
        c.pass = c.max_dev <= c.threshold;
        checks.push_back(c);
    }
    {
        Check c{"oscillator-invariant-drift", 0.0, 1e-10, false};
        const Trajectory traj = solve_ivp(reduced_system(zero), t0, {1.0, 0.0}, t1, tight);
        const std::vector<double> grid = uniform_grid(t0, t1, 256);
        const InvariantReport rep =
            drift_report(pair, traj, NoetherCoefficients{1, 1, 1, 0, 1}, grid, 1e-10);
        for (const auto& s : rep.series) c.max_dev = std::max(c.max_dev, s.drift);
        c.pass = c.max_dev <= c.threshold;
        checks.push_back(c);
    }

    if (wants(cfg, "csv")) {
        std::string table = "t,k0,k1,k1_deriv,recurrence_residual\n";
        for (const Row& r : rows) {
            table += format_sig17(r.t);
            for (double v : {r.k0, r.k1, r.k1d, r.k1d + r.k0 + r.k1 / r.t}) {
                table += ",";
                table += format_sig17(v);
            }
            table += "\n";
        }
        write_file(dir / "selftest_bessel.csv", table);

        std::string summary = "check,max_deviation,threshold,pass\n";
        for (const Check& c : checks)
            summary += c.name + "," + format_sig17(c.max_dev) + "," +
                       format_sig17(c.threshold) + "," + (c.pass ? "1" : "0") + "\n";
        write_file(dir / "selftest.csv", summary);
    }

    std::vector<std::string> failed;
    for (const Check& c : checks) {
        std::cout << (c.pass ? "ok   " : "FAIL ") << c.name << " (max dev "
                  << format_sig6(c.max_dev) << ", threshold " << format_sig6(c.threshold)
                  << ")\n";
        if (!c.pass) failed.push_back(c.name);
    }
    if (!failed.empty()) {
        std::cerr << "selftest: failed:";
        for (const auto& name : failed) std::cerr << " " << name;
        std::cerr << "\n";
        return kExitVerification;
    }
    std::cout << "selftest: all " << checks.size() << " checks passed\n";
    return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"conserved quantities and symmetry algebra of a reduced planar gauge model"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file");

    RunConfig cfg;
    app.add_option("--profile", cfg.profile, "gauge profile: bessel | zero")
        ->capture_default_str();
    app.add_option("--n", cfg.n, "vorticity (odd)")->capture_default_str();
    app.add_flag("--allow-even-n", cfg.allow_even_n, "permit even vorticity");
    app.add_option("--t0", cfg.t0, "window start")->capture_default_str();
    app.add_option("--t-end", cfg.t_end, "window end")->capture_default_str();
    app.add_option("--rtol", cfg.tolerances.rel, "relative tolerance")->capture_default_str();
    app.add_option("--atol", cfg.tolerances.abs, "absolute tolerance")->capture_default_str();
    app.add_option("--q0", cfg.q0, "initial q")->capture_default_str();
    app.add_option("--p0", cfg.p0, "initial p")->capture_default_str();
    app.add_option("--c1", cfg.coefficients.c1, "symmetry coefficient c1")
        ->capture_default_str();
    app.add_option("--c2", cfg.coefficients.c2, "symmetry coefficient c2")
        ->capture_default_str();
    app.add_option("--c3", cfg.coefficients.c3, "symmetry coefficient c3")
        ->capture_default_str();
    app.add_option("--c4", cfg.coefficients.c4, "symmetry coefficient c4")
        ->capture_default_str();
    app.add_option("--c5", cfg.coefficients.c5, "symmetry coefficient c5")
        ->capture_default_str();
    app.add_option("--out", cfg.out_dir, "output directory")
        ->envname("NOETHER_OUT")
        ->capture_default_str();
    app.add_option("--format", cfg.formats, "output formats (csv,json,svg)")->delimiter(',');
    app.add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
    app.add_option("--max-step", cfg.tolerances.max_step)->group("");
    app.add_option("--initial-step", cfg.tolerances.initial_step)->group("");
    app.add_option("--drift-tol", cfg.drift_tol)->group("");
    app.add_option("--samples", cfg.samples)->group("");
    app.add_flag("--inject-fault", cfg.inject_fault)->group("");

    CLI::App* sub_simulate = app.add_subcommand("simulate", "integrate the reduced system");
    CLI::App* sub_fundamental =
        app.add_subcommand("fundamental", "integrate the fundamental pair");
    CLI::App* sub_invariants =
        app.add_subcommand("invariants", "evaluate conserved quantities along a trajectory");
    CLI::App* sub_algebra =
        app.add_subcommand("algebra", "verify the commutator and bracket tables");
    CLI::App* sub_figures = app.add_subcommand("figures", "write the preset solution panels");
    CLI::App* sub_selftest = app.add_subcommand("selftest", "run built-in cross-checks");
    for (CLI::App* sub : {sub_simulate, sub_fundamental, sub_invariants, sub_algebra,
                          sub_figures, sub_selftest})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        validate_config(cfg);
        if (app.got_subcommand(sub_simulate)) return cmd_simulate(cfg);
        if (app.got_subcommand(sub_fundamental)) return cmd_fundamental(cfg);
        if (app.got_subcommand(sub_invariants)) return cmd_invariants(cfg);
        if (app.got_subcommand(sub_algebra)) return cmd_algebra(cfg);
        if (app.got_subcommand(sub_figures)) return cmd_figures(cfg);
        if (app.got_subcommand(sub_selftest)) return cmd_selftest(cfg);
        std::cerr << "config error: no subcommand selected\n";
        return kExitConfig;
    } catch (const IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return kExitIntegration;
    } catch (const QuadratureError& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return kExitIntegration;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace noether::cli
