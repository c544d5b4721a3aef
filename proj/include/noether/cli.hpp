#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noether/integrate.hpp"
#include "noether/invariants.hpp"
#include "noether/model.hpp"

namespace noether::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIntegration = 3;
inline constexpr int kExitVerification = 4;

struct RunConfig {
    std::string profile = "bessel";  // "bessel" | "zero"
    int n = 1;
    bool allow_even_n = false;
    double t0 = 1e-2;
    double t_end = 50.0;
    Tolerances tolerances{};
    double q0 = 1.0;
    double p0 = 0.0;
    NoetherCoefficients coefficients{1.0, 1.0, 1.0, 0.0, 1.0};
    std::string out_dir = ".";
    std::vector<std::string> formats{"csv", "json"};
    std::uint64_t seed = 42;
    double drift_tol = 1e-7;
    int samples = 100;
    bool inject_fault = false;  // selftest hook: corrupt one table entry
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Throws ConfigError on invalid settings (window, profile kind, formats...).
void validate_config(const RunConfig& cfg);

GaugeProfile profile_of(const RunConfig& cfg);

int cmd_simulate(const RunConfig& cfg);
int cmd_fundamental(const RunConfig& cfg);
int cmd_invariants(const RunConfig& cfg);
int cmd_algebra(const RunConfig& cfg);
int cmd_figures(const RunConfig& cfg);
int cmd_selftest(const RunConfig& cfg);

/// Full argv entry point: flags, optional key=value config file (--config),
/// NOETHER_OUT env override for --out, subcommand dispatch. Returns the
/// process exit code (0 ok, 2 config, 3 integration, 4 verification).
int run_cli(int argc, const char* const* argv);

}  // namespace noether::cli
