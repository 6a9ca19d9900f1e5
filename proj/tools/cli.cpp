#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "qad/bench.hpp"
#include "qad/dataset.hpp"
#include "qad/detector.hpp"
#include "qad/error.hpp"
#include "qad/eval.hpp"
#include "qad/random.hpp"
#include "qad/serialize.hpp"
#include "qad/solver.hpp"

namespace qad::cli {

namespace {

using nlohmann::json;

// Seed streams derived from the single --seed flag.
constexpr std::uint64_t kStreamSolver = 1;
constexpr std::uint64_t kStreamGaussianSeeds = 1000;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::uint64_t seed = 42;
    std::string out;
    std::string format = "json";
};

struct SolverOptions {
    std::string solver = "sa";
    std::size_t sweeps = SaConfig{}.sweeps;
    std::size_t restarts = SaConfig{}.restarts;
    double beta_initial = SaConfig{}.beta_initial;
    double beta_final = SaConfig{}.beta_final;

    SaConfig sa(std::uint64_t seed) const {
        SaConfig c;
        c.sweeps = sweeps;
        c.restarts = restarts;
        c.beta_initial = beta_initial;
        c.beta_final = beta_final;
        c.seed = derive_seed(seed, kStreamSolver);
        if (beta_initial > beta_final) {
            throw UsageError("--beta-initial must not exceed --beta-final");
        }
        return c;
    }
};

void add_solver_options(CLI::App* cmd, SolverOptions& o) {
    cmd->add_option("--solver", o.solver, "QUBO solver")->check(CLI::IsMember({"sa", "exact"}))->capture_default_str();
    cmd->add_option("--sweeps", o.sweeps, "SA sweeps per restart")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--restarts", o.restarts, "SA restarts")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--beta-initial", o.beta_initial, "initial inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--beta-final", o.beta_final, "final inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

struct DetectorOptions {
    double ridge = kDefaultRidge;
    std::optional<std::size_t> neighbor_limit;
    std::optional<double> penalty_weight;
    bool squared = false;
};

void add_detector_options(CLI::App* cmd, DetectorOptions& o) {
    cmd->add_option("--ridge", o.ridge, "covariance ridge (relative to mean variance)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--neighbor-limit", o.neighbor_limit, "furthest neighbours kept per point (default k)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--penalty-weight", o.penalty_weight, "explicit cardinality penalty weight A")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--squared", o.squared, "use squared Mahalanobis distances");
}

DetectorConfig make_config(const DetectorOptions& d, const SolverOptions& s, std::uint64_t seed) {
    DetectorConfig c;
    c.ridge = d.ridge;
    c.neighbor_limit = d.neighbor_limit;
    c.penalty_weight = d.penalty_weight;
    c.squared_distances = d.squared;
    c.solver = parse_solver_kind(s.solver);
    c.sa = s.sa(seed);
    return c;
}

void emit(const GlobalOptions& g, const std::string& text, std::ostream& out) {
    if (g.out.empty()) {
        out << text;
    } else {
        write_text_file(g.out, text);
    }
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) {
        parts.push_back(part);
    }
    return parts;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("\"" + s + "\" is not a number");
    }
    return v;
}

std::vector<Method> parse_methods(const std::string& list, double alpha, std::size_t knn_m) {
    std::vector<Method> methods;
    for (const auto& name : split(list, ',')) {
        Method m;
        try {
            m = parse_method(name);
        } catch (const InvalidArgument& e) {
            throw UsageError(std::string("--methods: ") + e.what());
        }
        m.alpha = alpha;
        m.knn_m = knn_m;
        methods.push_back(m);
    }
    if (methods.empty()) {
        throw UsageError("--methods: no method given");
    }
    return methods;
}

int cmd_generate(const GlobalOptions& g, const GaussianSpec& base, const std::string& label_column, std::ostream& out) {
    GaussianSpec spec = base;
    spec.seed = g.seed;
    const Dataset data = generate_gaussian(spec);
    if (g.out.empty()) {
        write_csv(data, out, label_column);
    } else {
        write_csv(data, std::filesystem::path(g.out), label_column);
    }
    return kExitOk;
}

std::string flags_csv(const Dataset& data, const DetectionResult& r) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    os << "id,flag,score\n";
    for (std::size_t i = 0; i < r.flags.size(); ++i) {
        os << data.ids[i] << ',' << static_cast<int>(r.flags[i]) << ',' << (i < r.scores.size() ? r.scores[i] : 0.0)
           << '\n';
    }
    return os.str();
}

} // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw std::invalid_argument("grid range must be start:stop:step");
        }
        const double start = parse_double(parts[0]);
        const double stop = parse_double(parts[1]);
        const double step = parse_double(parts[2]);
        if (!(step > 0.0) || start > stop || start < 0.0 || stop > 1.0) {
            throw std::invalid_argument("grid range needs 0 <= start <= stop <= 1 and step > 0");
        }
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) {
            // Round away representation noise such as 0.30000000000000004.
            const double v = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
            grid.push_back(std::min(v, stop));
        }
    } else {
        for (const auto& part : split(text, ',')) {
            const double v = parse_double(part);
            if (v < 0.0 || v > 1.0) {
                throw std::invalid_argument("grid values must lie in [0, 1]");
            }
            grid.push_back(v);
        }
    }
    if (grid.empty()) {
        throw std::invalid_argument("grid is empty");
    }
    return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"QUBO-based anomaly detection: detect, fit alpha, solve QUBOs, benchmark"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "seed for every random choice of the run")->capture_default_str();
    app.add_option("-o,--out", g.out, "output file (default: standard output)");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    // generate
    GaussianSpec gen_spec;
    std::string gen_label = "label";
    auto* generate = app.add_subcommand("generate", "write a synthetic Gaussian data set as CSV");
    generate->add_option("--n-inliers", gen_spec.n_inliers)->check(CLI::PositiveNumber)->capture_default_str();
    generate->add_option("--n-outliers", gen_spec.n_outliers)->check(CLI::NonNegativeNumber)->capture_default_str();
    generate->add_option("--dims", gen_spec.dims)->check(CLI::PositiveNumber)->capture_default_str();
    generate->add_option("--sigma", gen_spec.sigma)->check(CLI::PositiveNumber)->capture_default_str();
    generate->add_option("--outlier-shift", gen_spec.outlier_shift)->check(CLI::NonNegativeNumber)->capture_default_str();
    generate->add_option("--label-column", gen_label)->capture_default_str();

    // detect
    std::string input;
    std::string label_column = "label";
    double alpha = 0.5;
    std::size_t k = 1;
    SolverOptions solver_opts;
    DetectorOptions det_opts;
    auto* detect_cmd = app.add_subcommand("detect", "flag outliers in a CSV data set");
    detect_cmd->add_option("-i,--input", input, "input CSV")->required();
    detect_cmd->add_option("--label-column", label_column, "label column, used for evaluation when present")
        ->capture_default_str();
    detect_cmd->add_option("--alpha", alpha, "weight of centroid distances vs pairwise distances")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    detect_cmd->add_option("--k", k, "number of outliers to flag")->required()->check(CLI::PositiveNumber);
    add_detector_options(detect_cmd, det_opts);
    add_solver_options(detect_cmd, solver_opts);

    // fit-alpha
    std::optional<std::size_t> fit_k;
    std::string grid_text = "0:1:0.05";
    auto* fit_cmd = app.add_subcommand("fit-alpha", "grid-search alpha on labeled data");
    fit_cmd->add_option("-i,--input", input, "labeled input CSV")->required();
    fit_cmd->add_option("--label-column", label_column)->capture_default_str();
    fit_cmd->add_option("--k", fit_k, "expected outlier count (must match the labels)")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--grid", grid_text, "start:stop:step or comma list of alpha values")->capture_default_str();
    add_detector_options(fit_cmd, det_opts);
    add_solver_options(fit_cmd, solver_opts);

    // solve
    std::string qubo_path;
    std::optional<std::size_t> warm_k;
    auto* solve_cmd = app.add_subcommand("solve", "maximize a QUBO given in interchange JSON");
    solve_cmd->add_option("--qubo", qubo_path, "QUBO interchange JSON")->required();
    solve_cmd->add_option("--warm-k", warm_k, "start SA restart 0 from the top-k linear coefficients")
        ->check(CLI::PositiveNumber);
    add_solver_options(solve_cmd, solver_opts);

    // benchmark
    auto* bench_cmd = app.add_subcommand("benchmark", "compare detectors on synthetic or CSV data");
    bench_cmd->require_subcommand(1);
    std::string methods_text = "qubo-fit,mahalanobis-topk,knn";
    std::size_t knn_m = 5;
    std::string svg_path;
    auto add_bench_common = [&](CLI::App* cmd) {
        cmd->add_option("--methods", methods_text, "comma list: qubo, qubo-fit, mahalanobis-topk, knn")
            ->capture_default_str();
        cmd->add_option("--alpha", alpha, "alpha for the fixed-alpha qubo method")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        cmd->add_option("--knn-m", knn_m, "neighbour count of the knn baseline")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--svg", svg_path, "also write a bar chart of mean AUCs");
        add_detector_options(cmd, det_opts);
        add_solver_options(cmd, solver_opts);
    };

    std::string sigmas_text = "1,2,3";
    std::size_t seed_count = 10;
    GaussianSpec bench_spec;
    auto* bench_gauss = bench_cmd->add_subcommand("gaussian", "synthetic Gaussian suite");
    bench_gauss->add_option("--sigmas", sigmas_text, "comma list of inlier standard deviations")->capture_default_str();
    bench_gauss->add_option("--seeds", seed_count, "number of data seeds per sigma")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_gauss->add_option("--n-inliers", bench_spec.n_inliers)->check(CLI::PositiveNumber)->capture_default_str();
    bench_gauss->add_option("--n-outliers", bench_spec.n_outliers)->check(CLI::PositiveNumber)->capture_default_str();
    bench_gauss->add_option("--dims", bench_spec.dims)->check(CLI::PositiveNumber)->capture_default_str();
    bench_gauss->add_option("--outlier-shift", bench_spec.outlier_shift)
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_bench_common(bench_gauss);

    std::vector<std::string> csv_inputs;
    std::optional<std::size_t> subsample;
    auto* bench_csv = bench_cmd->add_subcommand("csv", "labeled CSV suite");
    bench_csv->add_option("-i,--input", csv_inputs, "labeled CSV file(s)")->required();
    bench_csv->add_option("--label-column", label_column)->capture_default_str();
    bench_csv->add_option("--subsample", subsample, "stratified seeded subsample to this many rows")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
    add_bench_common(bench_csv);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (generate->parsed()) {
            return cmd_generate(g, gen_spec, gen_label, out);
        }

        if (detect_cmd->parsed()) {
            DetectorConfig config = make_config(det_opts, solver_opts, g.seed);
            config.alpha = alpha;
            config.k = k;
            const Dataset data = load_csv_if_labeled(input, label_column);
            const DetectionResult result = detect(data, config);
            if (g.format == "csv") {
                emit(g, flags_csv(data, result), out);
                return kExitOk;
            }
            json doc = result;
            doc["config"] = config;
            doc["config"]["seed"] = g.seed;
            doc["config"]["input"] = input;
            if (data.labeled() && data.outlier_count() > 0 && data.outlier_count() < data.size()) {
                doc["eval"] = roc_auc_binary(*data.labels, result.flags);
                doc["eval"]["score_auc"] = roc_auc_scores(*data.labels, result.scores);
            }
            emit(g, dump(doc), out);
            return kExitOk;
        }

        if (fit_cmd->parsed()) {
            std::vector<double> grid;
            try {
                grid = parse_grid(grid_text);
            } catch (const std::invalid_argument& e) {
                throw UsageError(std::string("--grid: ") + e.what());
            }
            DetectorConfig config = make_config(det_opts, solver_opts, g.seed);
            const Dataset data = load_csv_if_labeled(input, label_column);
            if (!data.labeled()) {
                throw DataError("'" + input + "' has no label column \"" + label_column + "\"; fit-alpha needs labels");
            }
            if (fit_k && *fit_k != data.outlier_count()) {
                throw DataError("--k " + std::to_string(*fit_k) + " disagrees with the labels ("
                                + std::to_string(data.outlier_count()) + " outliers)");
            }
            const AlphaFit fit = fit_alpha(data, config, grid);
            if (g.format == "csv") {
                std::ostringstream os;
                os << std::setprecision(std::numeric_limits<double>::max_digits10) << "alpha,auc\n";
                for (const auto& [a, auc] : fit.table) {
                    os << a << ',' << auc << '\n';
                }
                emit(g, os.str(), out);
                return kExitOk;
            }
            json doc = fit;
            config.k = data.outlier_count();
            config.alpha = fit.best_alpha;
            doc["config"] = config;
            doc["config"]["seed"] = g.seed;
            doc["config"]["input"] = input;
            doc["config"]["grid"] = grid;
            emit(g, dump(doc), out);
            return kExitOk;
        }

        if (solve_cmd->parsed()) {
            const Qubo q = qubo_from_json(read_json_file(qubo_path));
            Solution sol;
            if (parse_solver_kind(solver_opts.solver) == SolverKind::Exact) {
                sol = solve_exact(q);
            } else {
                SaConfig sa = solver_opts.sa(g.seed);
                sa.warm_start_count = warm_k;
                sol = solve_sa(q, sa);
            }
            if (g.format == "csv") {
                std::ostringstream os;
                os << "index,value\n";
                for (std::size_t i = 0; i < sol.assignment.size(); ++i) {
                    os << i << ',' << static_cast<int>(sol.assignment[i]) << '\n';
                }
                emit(g, os.str(), out);
                return kExitOk;
            }
            emit(g, dump(json(sol)), out);
            return kExitOk;
        }

        if (bench_cmd->parsed()) {
            DetectorConfig config = make_config(det_opts, solver_opts, g.seed);
            const auto methods = parse_methods(methods_text, alpha, knn_m);
            BenchmarkReport report;
            if (bench_gauss->parsed()) {
                std::vector<double> sigmas;
                for (const auto& s : split(sigmas_text, ',')) {
                    double v = 0.0;
                    try {
                        v = parse_double(s);
                    } catch (const std::invalid_argument& e) {
                        throw UsageError(std::string("--sigmas: ") + e.what());
                    }
                    if (!(v > 0.0)) {
                        throw UsageError("--sigmas: values must be positive");
                    }
                    sigmas.push_back(v);
                }
                if (sigmas.empty()) {
                    throw UsageError("--sigmas: no value given");
                }
                std::vector<std::uint64_t> seeds;
                for (std::size_t i = 0; i < seed_count; ++i) {
                    seeds.push_back(derive_seed(g.seed, kStreamGaussianSeeds + i));
                }
                report = run_gaussian_suite(sigmas, bench_spec, methods, seeds, config);
            } else {
                std::vector<CsvSource> files;
                for (const auto& p : csv_inputs) {
                    files.push_back({p, label_column});
                }
                report = run_csv_suite(files, methods, config, subsample, g.seed);
            }
            if (!svg_path.empty()) {
                write_text_file(svg_path, render_svg(report));
            }
            if (g.format == "csv") {
                if (g.out.empty()) {
                    throw UsageError("--format csv for benchmark reports needs --out");
                }
                write_report_csv(report, g.out);
                return kExitOk;
            }
            json doc = report;
            doc["config"] = config;
            doc["config"]["seed"] = g.seed;
            emit(g, dump(doc), out);
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace qad::cli
