#include "qad/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "qad/error.hpp"
#include "qad/random.hpp"
#include "qad/serialize.hpp"

namespace qad {

namespace {

using nlohmann::json;

MethodRun run_method(const Dataset& data, const Method& method, DetectorConfig config) {
    const std::size_t k = data.outlier_count();
    config.k = k;
    json params;
    DetectionResult result;

    const auto start = std::chrono::steady_clock::now();
    switch (method.kind) {
    case MethodKind::Qubo:
        config.alpha = method.alpha;
        result = detect(data, config);
        params = config;
        break;
    case MethodKind::QuboFitted: {
        const AlphaFit fit = fit_alpha(data, config, method.alpha_grid);
        config.alpha = fit.best_alpha;
        result = detect(data, config);
        params = config;
        params["alpha_grid"] = method.alpha_grid;
        params["fit_auc"] = fit.best_auc;
        break;
    }
    case MethodKind::MahalanobisTopK:
        result = baseline_mahalanobis_topk(data, k, config.ridge);
        params = json{{"k", k}, {"ridge", config.ridge}};
        break;
    case MethodKind::Knn: {
        const std::size_t m = std::min(method.knn_m, data.size() - 1);
        result = baseline_knn_dist(data, k, m, config.ridge);
        params = json{{"k", k}, {"m", m}, {"ridge", config.ridge}};
        break;
    }
    }
    const auto stop = std::chrono::steady_clock::now();

    MethodRun run;
    run.method = method.name();
    run.eval = roc_auc_binary(*data.labels, result.flags);
    run.score_auc = roc_auc_scores(*data.labels, result.scores);
    run.flagged = result.flagged();
    run.wall_seconds = std::chrono::duration<double>(stop - start).count();
    run.parameters = std::move(params);
    return run;
}

void summarize(BenchmarkReport& report) {
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> acc;
    for (const MethodRun& run : report.runs) {
        const auto key = std::make_pair(run.group, run.method);
        if (!acc.contains(key)) {
            order.push_back(key);
        }
        auto& [sum, count] = acc[key];
        sum += run.eval.auc;
        ++count;
    }
    report.summary.clear();
    for (const auto& key : order) {
        const auto& [sum, count] = acc[key];
        report.summary.push_back({key.first, key.second, sum / static_cast<double>(count), count});
    }
}

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

std::string Method::name() const {
    switch (kind) {
    case MethodKind::Qubo: return "qubo";
    case MethodKind::QuboFitted: return "qubo-fit";
    case MethodKind::MahalanobisTopK: return "mahalanobis-topk";
    case MethodKind::Knn: return "knn";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    Method m;
    if (name == "qubo") {
        m.kind = MethodKind::Qubo;
    } else if (name == "qubo-fit") {
        m.kind = MethodKind::QuboFitted;
    } else if (name == "mahalanobis-topk") {
        m.kind = MethodKind::MahalanobisTopK;
    } else if (name == "knn") {
        m.kind = MethodKind::Knn;
    } else {
        throw InvalidArgument("unknown method \"" + name + "\" (expected qubo, qubo-fit, mahalanobis-topk or knn)");
    }
    return m;
}

BenchmarkReport run_gaussian_suite(const std::vector<double>& sigmas, const GaussianSpec& spec_template,
                                   const std::vector<Method>& methods, const std::vector<std::uint64_t>& seeds,
                                   const DetectorConfig& config) {
    if (sigmas.empty() || methods.empty() || seeds.empty()) {
        throw InvalidArgument("gaussian suite needs at least one sigma, method and seed");
    }
    if (spec_template.n_outliers < 1) {
        throw InvalidArgument("gaussian suite needs n_outliers >= 1 to score detections");
    }
    BenchmarkReport report;
    report.scenario = "gaussian";
    report.seeds = seeds;
    for (double sigma : sigmas) {
        for (std::uint64_t seed : seeds) {
            GaussianSpec spec = spec_template;
            spec.sigma = sigma;
            spec.seed = seed;
            const Dataset data = generate_gaussian(spec);
            for (const Method& method : methods) {
                DetectorConfig cell = config;
                cell.sa.seed = derive_seed(config.sa.seed, seed);
                MethodRun run = run_method(data, method, cell);
                run.group = "sigma=" + format_number(sigma);
                run.seed = seed;
                run.parameters["data"] = json{{"n_inliers", spec.n_inliers}, {"n_outliers", spec.n_outliers},
                                              {"dims", spec.dims},           {"sigma", spec.sigma},
                                              {"outlier_shift", spec.outlier_shift}, {"seed", spec.seed}};
                report.runs.push_back(std::move(run));
            }
        }
    }
    summarize(report);
    return report;
}

BenchmarkReport run_csv_suite(const std::vector<CsvSource>& files, const std::vector<Method>& methods,
                              const DetectorConfig& config, std::optional<std::size_t> subsample, std::uint64_t seed) {
    if (files.empty() || methods.empty()) {
        throw InvalidArgument("csv suite needs at least one file and one method");
    }
    std::vector<Dataset> sets;
    for (const CsvSource& src : files) {
        Dataset data = load_csv_if_labeled(src.path, src.label_column);
        if (!data.labeled()) {
            throw DataError("'" + src.path.string() + "' has no label column \"" + src.label_column
                            + "\"; benchmarks need labeled data");
        }
        if (subsample) {
            data = subsample_stratified(data, *subsample, seed);
        }
        const std::size_t k = data.outlier_count();
        if (k == 0 || k == data.size()) {
            throw DataError("'" + src.path.string() + "' must contain both label classes");
        }
        const bool uses_solver = std::any_of(methods.begin(), methods.end(), [](const Method& m) {
            return m.kind == MethodKind::Qubo || m.kind == MethodKind::QuboFitted;
        });
        if (uses_solver && config.solver == SolverKind::Exact && data.size() > kMaxExactVariables) {
            throw SolverLimit("'" + src.path.string() + "' has " + std::to_string(data.size())
                              + " rows but the exact solver is limited to n <= "
                              + std::to_string(kMaxExactVariables) + "; use the sa solver");
        }
        sets.push_back(std::move(data));
    }

    BenchmarkReport report;
    report.scenario = "csv";
    report.seeds = {seed};
    for (std::size_t f = 0; f < files.size(); ++f) {
        for (const Method& method : methods) {
            MethodRun run = run_method(sets[f], method, config);
            run.group = files[f].path.filename().string();
            run.seed = seed;
            run.parameters["data"] = json{{"path", files[f].path.string()}, {"label_column", files[f].label_column},
                                          {"rows", sets[f].size()}, {"dims", sets[f].dims()}};
            if (subsample) {
                run.parameters["data"]["subsample"] = *subsample;
            }
            report.runs.push_back(std::move(run));
        }
    }
    summarize(report);
    return report;
}

void write_report_csv(const BenchmarkReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "scenario,group,method,seed,auc,score_auc,tp,fp,tn,fn,flagged,wall_seconds\n";
    for (const MethodRun& r : report.runs) {
        out << report.scenario << ',' << r.group << ',' << r.method << ',' << r.seed << ',' << r.eval.auc << ',';
        if (r.score_auc) {
            out << *r.score_auc;
        }
        out << ',' << r.eval.tp << ',' << r.eval.fp << ',' << r.eval.tn << ',' << r.eval.fn << ',' << r.flagged
            << ',' << r.wall_seconds << '\n';
    }
    if (!out) {
        throw DataError("failed writing '" + path.string() + "'");
    }
}

std::string render_svg(const BenchmarkReport& report) {
    std::vector<std::string> groups;
    std::vector<std::string> methods;
    for (const SummaryRow& s : report.summary) {
        if (std::find(groups.begin(), groups.end(), s.group) == groups.end()) {
            groups.push_back(s.group);
        }
        if (std::find(methods.begin(), methods.end(), s.method) == methods.end()) {
            methods.push_back(s.method);
        }
    }
    static constexpr const char* palette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948"};
    const int bar = 36;
    const int gap = 24;
    const int plot_h = 240;
    const int top = 40;
    const int left = 40;
    const int group_w = static_cast<int>(methods.size()) * bar + gap;
    const int width = left + static_cast<int>(groups.size()) * group_w + gap;
    const int height = top + plot_h + 60;

    std::ostringstream svg;
    svg << std::fixed << std::setprecision(4);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    svg << "<text class=\"title\" x=\"" << left << "\" y=\"20\" font-size=\"14\">" << xml_escape(report.scenario)
        << ": mean binary ROC AUC</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << width << "\" y2=\"" << top + plot_h
        << "\" stroke=\"black\"/>\n";
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const int gx = left + gap + static_cast<int>(g) * group_w;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const auto it = std::find_if(report.summary.begin(), report.summary.end(), [&](const SummaryRow& s) {
                return s.group == groups[g] && s.method == methods[m];
            });
            if (it == report.summary.end()) {
                continue;
            }
            const int h = static_cast<int>(std::lround(it->mean_auc * plot_h));
            const int x = gx + static_cast<int>(m) * bar;
            svg << "<rect x=\"" << x << "\" y=\"" << top + plot_h - h << "\" width=\"" << bar - 4 << "\" height=\""
                << h << "\" fill=\"" << palette[m % std::size(palette)] << "\"/>\n";
            svg << "<text class=\"auc\" x=\"" << x << "\" y=\"" << top + plot_h - h - 4
                << "\" font-size=\"9\" data-method=\"" << xml_escape(methods[m]) << "\" data-group=\""
                << xml_escape(groups[g]) << "\">" << xml_escape(methods[m]) << ' ' << it->mean_auc << "</text>\n";
        }
        svg << "<text class=\"group\" x=\"" << gx << "\" y=\"" << top + plot_h + 20 << "\" font-size=\"11\">"
            << xml_escape(groups[g]) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace qad
