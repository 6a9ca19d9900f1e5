#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qad/dataset.hpp"
#include "qad/detector.hpp"
#include "qad/eval.hpp"

namespace qad {

enum class MethodKind {
    Qubo,            // fixed alpha
    QuboFitted,      // alpha grid-searched on the same labeled data
    MahalanobisTopK, // statistical baseline
    Knn,             // mean distance to m nearest neighbours
};

struct Method {
    MethodKind kind = MethodKind::Qubo;
    double alpha = 0.5;
    std::size_t knn_m = 5;
    std::vector<double> alpha_grid = default_alpha_grid();

    std::string name() const;
};

// "qubo", "qubo-fit", "mahalanobis-topk" or "knn".
Method parse_method(const std::string& name);

struct MethodRun {
    std::string method;
    std::string group;   // "sigma=<value>" or the file name
    std::uint64_t seed = 0;
    EvalReport eval;     // binary AUC of the flags
    std::optional<double> score_auc; // ranking AUC of the per-point scores
    std::size_t flagged = 0;
    double wall_seconds = 0.0;
    nlohmann::json parameters;
};

struct SummaryRow {
    std::string group;
    std::string method;
    double mean_auc = 0.0;
    std::size_t runs = 0;
};

struct BenchmarkReport {
    std::string scenario;
    std::vector<MethodRun> runs; // one per group x seed x method
    std::vector<SummaryRow> summary;
    std::vector<std::uint64_t> seeds;
};

/// For each sigma and data seed: generate the data set from `spec_template`
/// (sigma and seed replaced), run every method with k = n_outliers and score
/// it against the generated labels. Summary rows hold the mean binary AUC per
/// sigma and method.
BenchmarkReport run_gaussian_suite(const std::vector<double>& sigmas, const GaussianSpec& spec_template,
                                   const std::vector<Method>& methods, const std::vector<std::uint64_t>& seeds,
                                   const DetectorConfig& config = {});

struct CsvSource {
    std::filesystem::path path;
    std::string label_column = "label";
};

/// Every file must be labeled; all are loaded and checked before any method
/// runs. k is each file's positive count. With `subsample` set, larger files
/// are reduced by subsample_stratified using `seed`.
BenchmarkReport run_csv_suite(const std::vector<CsvSource>& files, const std::vector<Method>& methods,
                              const DetectorConfig& config = {}, std::optional<std::size_t> subsample = std::nullopt,
                              std::uint64_t seed = 42);

// Flat projection, one row per run.
void write_report_csv(const BenchmarkReport& report, const std::filesystem::path& path);

// Grouped bar chart of summary mean AUCs; every bar has a <text class="auc">
// label carrying "<method> <auc>".
std::string render_svg(const BenchmarkReport& report);

} // namespace qad
