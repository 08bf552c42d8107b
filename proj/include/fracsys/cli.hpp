#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracsys/oracle.hpp"
#include "fracsys/positivity.hpp"
#include "fracsys/solver.hpp"
#include "fracsys/system.hpp"

// Configuration files, trajectory CSV, JSON reports and the subcommand
// drivers behind the `fracsys` executable.

namespace fracsys::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationError = 1,
    kNumericalFailure = 2,
    kPositivityViolation = 3,
};

/// Malformed configuration document (not valid JSON, or not an object).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SolverKind { Recursive, LinearSeries, SemilinearSeries };

struct GammaSource {
    enum class Kind { Zero, Constant, File } kind = Kind::Zero;
    std::vector<double> constant;        ///< Kind::Constant
    std::string path;                    ///< Kind::File, as written in the config
    std::vector<std::vector<double>> samples;  ///< Kind::File, loaded at parse time

    friend bool operator==(const GammaSource&, const GammaSource&) = default;
};

struct RunConfig {
    double alpha = 1.0;
    double beta = 1.0;
    double h = 1.0;
    std::size_t N = 0;
    std::size_t dim = 1;
    std::vector<std::vector<double>> A;
    std::vector<double> x_a;
    std::vector<double> x_0;
    GammaSource gamma;
    SolverKind solver = SolverKind::Recursive;
    KernelVariant kernel = KernelVariant::Corrected;
    ForcingLag recursion = ForcingLag::OneStep;
    double truncation_tol = 1e-12;
    std::size_t max_terms = 0;
    std::string trajectory_path;
    std::string report_path;
    bool check_positivity = false;
    bool check_compare = false;
    bool check_reconstruct_y = false;
    std::uint64_t seed = oracle::kDefaultSeed;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates a JSON configuration. Relative gamma sample paths are
/// resolved against `base_dir`. Throws ParseError, ValidationError (with key
/// path) or std::runtime_error for an unreadable sample file.
[[nodiscard]] RunConfig parse_config(const std::string& text,
                                     const std::filesystem::path& base_dir = {});

[[nodiscard]] RunConfig load_config(const std::filesystem::path& file);

/// Inverse of parse_config (gamma files are referenced by path, not inlined).
[[nodiscard]] std::string serialize_config(const RunConfig& cfg);

/// Builds the system description; gamma is sampled onto (hN)_0.
[[nodiscard]] SystemSpec to_system(const RunConfig& cfg);

/// Reads gamma samples: one vector per line, whitespace separated.
[[nodiscard]] std::vector<std::vector<double>> read_gamma_file(const std::filesystem::path& file,
                                                               std::size_t dim);

/// `n,t,x_1..x_dim[,y_1..y_dim]`, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

[[nodiscard]] std::string format_real(double v);

struct SolveFlags {
    std::optional<std::string> output;
    std::optional<std::string> report;
    std::optional<KernelVariant> kernel;
    bool fail_on_violation = false;
};

struct PositivityFlags {
    std::size_t tau = 1;
    std::size_t samples = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> report;
    bool fail_on_violation = false;
};

struct VerifyFlags {
    std::uint64_t seed = oracle::kDefaultSeed;
    std::optional<std::string> report;
    double kernel_perturbation = 0.0;
};

/// Runs the configured solver and checks. Without an output path the CSV
/// goes to `out`. Diagnostics go to `err`.
[[nodiscard]] int run(const RunConfig& cfg, const SolveFlags& flags, std::ostream& out,
                      std::ostream& err);

[[nodiscard]] int run_compare(const RunConfig& cfg, const SolveFlags& flags, std::ostream& out,
                              std::ostream& err);

[[nodiscard]] int run_positivity(const RunConfig& cfg, const PositivityFlags& flags,
                                 std::ostream& out, std::ostream& err);

/// Identity suite; prints one line per identity, returns 0 iff all pass.
[[nodiscard]] int verify_suite(const VerifyFlags& flags, std::ostream& out, std::ostream& err);

/// Report text for a verify run (JSON, deterministic for a given seed).
[[nodiscard]] std::string identity_report(const std::vector<oracle::IdentityCheckResult>& results,
                                          std::uint64_t seed);

}  // namespace fracsys::cli
