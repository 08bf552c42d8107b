#include "fracsys/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fracsys/errors.hpp"

namespace fracsys::cli {

using json = nlohmann::ordered_json;

namespace {

const char* solver_name(SolverKind s) {
    switch (s) {
        case SolverKind::Recursive: return "recursive";
        case SolverKind::LinearSeries: return "linear-series";
        case SolverKind::SemilinearSeries: return "semilinear-series";
    }
    return "?";
}

const char* kernel_name(KernelVariant k) { return k == KernelVariant::Corrected ? "corrected" : "literal"; }

const char* recursion_name(ForcingLag l) { return l == ForcingLag::OneStep ? "one-step" : "two-step"; }

double get_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ValidationError(key, "expected a number");
    return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& key) {
    if (j.is_number_unsigned()) return j.get<std::size_t>();
    if (j.is_number_integer()) throw ValidationError(key, "must be nonnegative, got " + j.dump());
    throw ValidationError(key, "expected a nonnegative integer");
}

bool get_bool(const json& j, const std::string& key) {
    if (!j.is_boolean()) throw ValidationError(key, "expected true or false");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& key) {
    if (!j.is_string()) throw ValidationError(key, "expected a string");
    return j.get<std::string>();
}

std::vector<double> get_vector(const json& j, const std::string& key, std::size_t dim) {
    if (!j.is_array()) throw ValidationError(key, "expected an array of numbers");
    if (j.size() != dim) {
        throw ValidationError(key, "expected " + std::to_string(dim) + " entries, got " +
                                       std::to_string(j.size()));
    }
    std::vector<double> v;
    v.reserve(dim);
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(get_number(j[i], key + "[" + std::to_string(i) + "]"));
    return v;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) throw ValidationError(prefix + key, "unknown key");
    }
}

json verdict_json(const PositivityReport& r) {
    json j;
    j["verdict"] = describe(r.verdict);
    j["positive"] = r.positive();
    j["horizon"] = r.horizon;
    j["tolerance"] = r.tolerance;
    if (r.samples > 0) {
        j["samples"] = r.samples;
        j["hypothesis_held"] = r.hypothesis_held;
    }
    return j;
}

json discrepancy_json(const DiscrepancyReport& d) {
    json j;
    j["method"] = d.series_method;
    j["threshold"] = d.threshold;
    j["max"] = d.max();
    j["flagged"] = d.flagged;
    j["per_step"] = d.per_step;
    return j;
}

json vector_json(const Vector& v) {
    json j = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
}

json run_header(const RunConfig& cfg, KernelVariant kernel) {
    json j;
    j["solver"] = solver_name(cfg.solver);
    j["kernel"] = kernel_name(kernel);
    j["recursion"] = recursion_name(cfg.recursion);
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["h"] = cfg.h;
    j["N"] = cfg.N;
    j["dim"] = cfg.dim;
    j["a"] = (cfg.alpha - 1.0) * cfg.h;
    j["b"] = (cfg.beta - 1.0) * cfg.h;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
}

SeriesOptions series_options(const RunConfig& cfg, KernelVariant kernel) {
    SeriesOptions opts;
    opts.kernel = kernel;
    opts.truncation_tol = cfg.truncation_tol;
    opts.max_terms = cfg.max_terms;
    return opts;
}

const Matrix* system_matrix(const SystemSpec& spec) {
    if (const auto* lin = std::get_if<LinearRhs>(&spec.rhs)) return &lin->A;
    if (const auto* semi = std::get_if<SemilinearRhs>(&spec.rhs)) return &semi->A;
    return nullptr;
}

// Maps exceptions onto exit statuses.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const NonFiniteError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const OverflowError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const TruncationError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    }
}

}  // namespace

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::vector<double>> read_gamma_file(const std::filesystem::path& file, std::size_t dim) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("gamma sample file not found: " + file.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<double> row;
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || !std::isfinite(v)) {
                throw ValidationError("gamma", file.string() + ":" + std::to_string(lineno) +
                                                   ": bad number '" + tok + "'");
            }
            row.push_back(v);
        }
        if (row.empty()) continue;
        if (row.size() != dim) {
            throw ValidationError("gamma", file.string() + ":" + std::to_string(lineno) + ": expected " +
                                               std::to_string(dim) + " values, got " +
                                               std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed configuration: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("configuration must be a JSON object");

    reject_unknown(doc,
                   {"alpha", "beta", "h", "N", "dim", "A", "x_a", "x_0", "gamma", "solver", "kernel",
                    "recursion", "truncation_tol", "max_terms", "outputs", "checks", "seed"},
                   "");
    for (const char* key : {"alpha", "beta", "h", "N", "dim", "A", "x_a", "x_0"}) {
        if (!doc.contains(key)) throw ValidationError(key, "missing required key");
    }

    RunConfig cfg;
    cfg.alpha = get_number(doc["alpha"], "alpha");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
        throw ValidationError("alpha", "must lie in (0,1], got " + doc["alpha"].dump());
    }
    cfg.beta = get_number(doc["beta"], "beta");
    if (!(cfg.beta > 0.0 && cfg.beta <= 1.0)) {
        throw ValidationError("beta", "must lie in (0,1], got " + doc["beta"].dump());
    }
    cfg.h = get_number(doc["h"], "h");
    if (!(cfg.h > 0.0)) throw ValidationError("h", "must be positive, got " + doc["h"].dump());
    cfg.N = get_count(doc["N"], "N");
    cfg.dim = get_count(doc["dim"], "dim");
    if (cfg.dim == 0) throw ValidationError("dim", "must be positive");

    const json& A = doc["A"];
    if (!A.is_array() || A.size() != cfg.dim) {
        throw ValidationError("A", "expected " + std::to_string(cfg.dim) + " rows");
    }
    for (std::size_t i = 0; i < cfg.dim; ++i) {
        cfg.A.push_back(get_vector(A[i], "A[" + std::to_string(i) + "]", cfg.dim));
    }
    cfg.x_a = get_vector(doc["x_a"], "x_a", cfg.dim);
    cfg.x_0 = get_vector(doc["x_0"], "x_0", cfg.dim);

    if (doc.contains("gamma")) {
        const json& g = doc["gamma"];
        std::string path;
        if (g.is_string() && g.get<std::string>() == "zero") {
            cfg.gamma.kind = GammaSource::Kind::Zero;
        } else if (g.is_array()) {
            cfg.gamma.kind = GammaSource::Kind::Constant;
            cfg.gamma.constant = get_vector(g, "gamma", cfg.dim);
        } else if (g.is_string()) {
            path = g.get<std::string>();
        } else if (g.is_object()) {
            reject_unknown(g, {"file"}, "gamma.");
            if (!g.contains("file")) throw ValidationError("gamma.file", "missing required key");
            path = get_string(g["file"], "gamma.file");
        } else {
            throw ValidationError("gamma", "expected \"zero\", a vector or a sample file path");
        }
        if (!path.empty()) {
            cfg.gamma.kind = GammaSource::Kind::File;
            cfg.gamma.path = path;
            std::filesystem::path p(path);
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            cfg.gamma.samples = read_gamma_file(p, cfg.dim);
            if (cfg.gamma.samples.size() < cfg.N + 1) {
                throw ValidationError("gamma", "sample file has " + std::to_string(cfg.gamma.samples.size()) +
                                                   " rows, need at least N+1 = " + std::to_string(cfg.N + 1));
            }
        }
    }

    if (doc.contains("solver")) {
        const auto s = get_string(doc["solver"], "solver");
        if (s == "recursive") cfg.solver = SolverKind::Recursive;
        else if (s == "linear-series") cfg.solver = SolverKind::LinearSeries;
        else if (s == "semilinear-series") cfg.solver = SolverKind::SemilinearSeries;
        else throw ValidationError("solver", "expected recursive, linear-series or semilinear-series");
    }
    if (cfg.solver == SolverKind::LinearSeries && cfg.gamma.kind != GammaSource::Kind::Zero) {
        throw ValidationError("solver", "linear-series needs gamma = \"zero\"");
    }
    if (doc.contains("kernel")) {
        const auto k = get_string(doc["kernel"], "kernel");
        if (k == "corrected") cfg.kernel = KernelVariant::Corrected;
        else if (k == "literal") cfg.kernel = KernelVariant::Literal;
        else throw ValidationError("kernel", "expected corrected or literal");
    }
    if (doc.contains("recursion")) {
        const auto r = get_string(doc["recursion"], "recursion");
        if (r == "one-step") cfg.recursion = ForcingLag::OneStep;
        else if (r == "two-step") cfg.recursion = ForcingLag::TwoStep;
        else throw ValidationError("recursion", "expected one-step or two-step");
    }
    if (doc.contains("truncation_tol")) {
        cfg.truncation_tol = get_number(doc["truncation_tol"], "truncation_tol");
        if (!(cfg.truncation_tol > 0.0)) throw ValidationError("truncation_tol", "must be positive");
    }
    if (doc.contains("max_terms")) cfg.max_terms = get_count(doc["max_terms"], "max_terms");
    if (doc.contains("outputs")) {
        const json& o = doc["outputs"];
        if (!o.is_object()) throw ValidationError("outputs", "expected an object");
        reject_unknown(o, {"trajectory", "report"}, "outputs.");
        if (o.contains("trajectory")) cfg.trajectory_path = get_string(o["trajectory"], "outputs.trajectory");
        if (o.contains("report")) cfg.report_path = get_string(o["report"], "outputs.report");
    }
    if (doc.contains("checks")) {
        const json& c = doc["checks"];
        if (!c.is_object()) throw ValidationError("checks", "expected an object");
        reject_unknown(c, {"positivity", "compare_solvers", "reconstruct_y"}, "checks.");
        if (c.contains("positivity")) cfg.check_positivity = get_bool(c["positivity"], "checks.positivity");
        if (c.contains("compare_solvers")) cfg.check_compare = get_bool(c["compare_solvers"], "checks.compare_solvers");
        if (c.contains("reconstruct_y")) cfg.check_reconstruct_y = get_bool(c["reconstruct_y"], "checks.reconstruct_y");
    }
    if (doc.contains("seed")) cfg.seed = get_count(doc["seed"], "seed");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), file.parent_path());
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["h"] = cfg.h;
    j["N"] = cfg.N;
    j["dim"] = cfg.dim;
    j["A"] = cfg.A;
    j["x_a"] = cfg.x_a;
    j["x_0"] = cfg.x_0;
    switch (cfg.gamma.kind) {
        case GammaSource::Kind::Zero: j["gamma"] = "zero"; break;
        case GammaSource::Kind::Constant: j["gamma"] = cfg.gamma.constant; break;
        case GammaSource::Kind::File: j["gamma"] = json{{"file", cfg.gamma.path}}; break;
    }
    j["solver"] = solver_name(cfg.solver);
    j["kernel"] = kernel_name(cfg.kernel);
    j["recursion"] = recursion_name(cfg.recursion);
    j["truncation_tol"] = cfg.truncation_tol;
    j["max_terms"] = cfg.max_terms;
    json outputs = json::object();
    if (!cfg.trajectory_path.empty()) outputs["trajectory"] = cfg.trajectory_path;
    if (!cfg.report_path.empty()) outputs["report"] = cfg.report_path;
    j["outputs"] = outputs;
    j["checks"] = {{"positivity", cfg.check_positivity},
                   {"compare_solvers", cfg.check_compare},
                   {"reconstruct_y", cfg.check_reconstruct_y}};
    j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

SystemSpec to_system(const RunConfig& cfg) {
    SystemSpec spec;
    spec.dim = cfg.dim;
    spec.orders = FracOrderPair(cfg.alpha, cfg.beta);
    spec.h = cfg.h;
    spec.horizon = cfg.N;
    const auto d = static_cast<Eigen::Index>(cfg.dim);
    Matrix A(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) A(i, j) = cfg.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    spec.x_a = Eigen::Map<const Vector>(cfg.x_a.data(), d);
    spec.x_0 = Eigen::Map<const Vector>(cfg.x_0.data(), d);

    if (cfg.gamma.kind == GammaSource::Kind::Zero && cfg.solver != SolverKind::SemilinearSeries) {
        spec.rhs = LinearRhs{A};
    } else {
        SemilinearRhs semi{A, {}};
        semi.gamma.reserve(cfg.N + 1);
        for (std::size_t n = 0; n <= cfg.N; ++n) {
            switch (cfg.gamma.kind) {
                case GammaSource::Kind::Zero: semi.gamma.push_back(Vector::Zero(d)); break;
                case GammaSource::Kind::Constant:
                    semi.gamma.push_back(Eigen::Map<const Vector>(cfg.gamma.constant.data(), d));
                    break;
                case GammaSource::Kind::File:
                    semi.gamma.push_back(Eigen::Map<const Vector>(cfg.gamma.samples[n].data(), d));
                    break;
            }
        }
        spec.rhs = std::move(semi);
    }
    spec.validate();
    return spec;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "n,t";
    for (std::size_t i = 1; i <= traj.dim; ++i) os << ",x_" << i;
    if (traj.aux) {
        for (std::size_t i = 1; i <= traj.dim; ++i) os << ",y_" << i;
    }
    os << "\n";
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        os << n << "," << format_real(traj.times[n]);
        for (Eigen::Index i = 0; i < traj.states[n].size(); ++i) os << "," << format_real(traj.states[n](i));
        if (traj.aux) {
            const auto& y = (*traj.aux)[n];
            for (Eigen::Index i = 0; i < y.size(); ++i) os << "," << format_real(y(i));
        }
        os << "\n";
    }
}

int run(const RunConfig& cfg, const SolveFlags& flags, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        const SystemSpec spec = to_system(cfg);
        const KernelVariant kernel = flags.kernel.value_or(cfg.kernel);
        const SeriesOptions opts = series_options(cfg, kernel);

        Trajectory traj;
        switch (cfg.solver) {
            case SolverKind::Recursive: traj = solve_recursive(spec, {cfg.recursion, Execution::Parallel}); break;
            case SolverKind::LinearSeries: traj = solve_linear_series(spec); break;
            case SolverKind::SemilinearSeries: traj = solve_semilinear_series(spec, opts); break;
        }
        if (cfg.check_reconstruct_y) traj = reconstruct_y(spec, std::move(traj));
        for (const auto& w : traj.warnings) err << "warning: " << w << "\n";

        json report = run_header(cfg, kernel);
        report["warnings"] = traj.warnings;
        report["final_state"] = vector_json(traj.states.back());

        bool violation = false;
        if (cfg.check_compare) {
            const auto d = compare_solvers(spec, opts);
            report["compare"] = discrepancy_json(d);
            if (!d.ok()) {
                err << "compare: " << d.flagged.size() << " steps exceed " << format_real(d.threshold) << "\n";
            }
        }
        if (cfg.check_positivity) {
            json pos;
            if (const Matrix* A = system_matrix(spec)) {
                const auto crit = local_positivity_criterion(*A, spec.orders, spec.h);
                pos["local_criterion"] = verdict_json(crit);
                violation = violation || !crit.positive();
            }
            const auto scan = check_trajectory_positivity(traj);
            pos["trajectory"] = verdict_json(scan);
            violation = violation || !scan.positive();
            report["positivity"] = pos;
        }

        const std::string trajectory_path = flags.output.value_or(cfg.trajectory_path);
        if (trajectory_path.empty()) {
            write_trajectory_csv(out, traj);
        } else {
            std::ostringstream csv;
            write_trajectory_csv(csv, traj);
            write_text(trajectory_path, csv.str());
        }
        const std::string report_path = flags.report.value_or(cfg.report_path);
        if (!report_path.empty()) write_text(report_path, report.dump(2) + "\n");

        if (violation && flags.fail_on_violation) {
            err << "positivity violation\n";
            return kPositivityViolation;
        }
        return kOk;
    });
}

int run_compare(const RunConfig& cfg, const SolveFlags& flags, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        const SystemSpec spec = to_system(cfg);
        const KernelVariant kernel = flags.kernel.value_or(cfg.kernel);
        const auto d = compare_solvers(spec, series_options(cfg, kernel));
        out << "# recursive vs " << d.series_method << ", threshold " << format_real(d.threshold) << "\n";
        out << "n,discrepancy,flag\n";
        for (std::size_t n = 0; n < d.per_step.size(); ++n) {
            out << n << "," << format_real(d.per_step[n]) << "," << (d.per_step[n] > d.threshold ? 1 : 0) << "\n";
        }
        out << "# max " << format_real(d.max()) << ", flagged " << d.flagged.size() << "\n";
        if (const auto path = flags.report.value_or(cfg.report_path); !path.empty()) {
            json report = run_header(cfg, kernel);
            report["compare"] = discrepancy_json(d);
            write_text(path, report.dump(2) + "\n");
        }
        return kOk;
    });
}

int run_positivity(const RunConfig& cfg, const PositivityFlags& flags, std::ostream& out,
                   std::ostream& err) {
    return guarded(err, [&]() -> int {
        const SystemSpec spec = to_system(cfg);
        json report = run_header(cfg, cfg.kernel);
        bool violation = false;

        if (const Matrix* A = system_matrix(spec)) {
            const auto crit = local_positivity_criterion(*A, spec.orders, spec.h);
            out << "local criterion (I + A h^(alpha+beta) >= 0): " << describe(crit.verdict) << "\n";
            report["local_criterion"] = verdict_json(crit);
            violation = violation || !crit.positive();
        }
        const auto local = check_local_positivity(spec, flags.tau);
        out << "states n <= " << flags.tau << ": " << describe(local.verdict) << "\n";
        report["local_positivity"] = verdict_json(local);
        violation = violation || !local.positive();

        if (flags.samples > 0) {
            const auto seed = flags.seed.value_or(cfg.seed);
            const auto fals = nonneg_rhs_positivity_check(spec, flags.samples, cfg.N, seed);
            out << "falsification (" << flags.samples << " nonnegative initial pairs, N=" << cfg.N
                << ", seed " << seed << "): " << describe(fals.verdict);
            if (!fals.positive()) out << (fals.hypothesis_held ? " [counterexample]" : " [rhs went negative first]");
            out << "\n";
            report["falsification"] = verdict_json(fals);
            report["seed"] = seed;
            violation = violation || (!fals.positive() && fals.hypothesis_held);
        }
        if (flags.report) write_text(*flags.report, report.dump(2) + "\n");
        if (violation && flags.fail_on_violation) return kPositivityViolation;
        return kOk;
    });
}

std::string identity_report(const std::vector<oracle::IdentityCheckResult>& results, std::uint64_t seed) {
    json j;
    j["seed"] = seed;
    json rows = json::array();
    bool all = true;
    for (const auto& r : results) {
        rows.push_back({{"identity", r.name},
                        {"pass", r.pass},
                        {"max_abs_error", r.max_abs_error},
                        {"max_rel_error", r.max_rel_error},
                        {"tolerance", r.tolerance},
                        {"checks", r.checks},
                        {"worst_case", r.worst_case}});
        all = all && r.pass;
    }
    j["results"] = rows;
    j["all_pass"] = all;
    return j.dump(2) + "\n";
}

int verify_suite(const VerifyFlags& flags, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        const auto results = oracle::run_identity_suite({flags.seed, flags.kernel_perturbation});
        std::vector<std::string> failed;
        for (const auto& r : results) {
            std::ostringstream line;
            line << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(28) << r.name
                 << " max_rel=" << std::setw(12) << std::setprecision(3) << std::scientific << r.max_rel_error
                 << " tol=" << r.tolerance << " checks=" << r.checks;
            if (!r.pass) line << "  worst: " << r.worst_case;
            out << line.str() << "\n";
            if (!r.pass) failed.push_back(r.name);
        }
        if (flags.report) write_text(*flags.report, identity_report(results, flags.seed));
        if (!failed.empty()) {
            err << "identity suite: failed";
            for (const auto& name : failed) err << " " << name;
            err << "\n";
            return kValidationError;
        }
        return kOk;
    });
}

}  // namespace fracsys::cli
