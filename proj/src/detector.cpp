#include "qad/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qad/error.hpp"
#include "qad/eval.hpp"

namespace qad {

namespace {

Assignment top_k_flags(const std::vector<double>& scores, std::size_t k) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    Assignment flags(scores.size(), 0);
    for (std::size_t r = 0; r < k; ++r) {
        flags[order[r]] = 1;
    }
    return flags;
}

void check_k(std::size_t k, std::size_t n) {
    if (k < 1 || k >= n) {
        throw InvalidArgument("k must satisfy 1 <= k < N (k = " + std::to_string(k) + ", N = " + std::to_string(n)
                              + ")");
    }
}

} // namespace

void DetectorConfig::validate(std::size_t n) const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InvalidArgument("alpha must lie in [0, 1]");
    }
    check_k(k, n);
    if (neighbor_limit && *neighbor_limit < 1) {
        throw InvalidArgument("neighbor_limit must be at least 1");
    }
    if (solver == SolverKind::Sa) {
        sa.validate();
    }
}

std::size_t DetectionResult::flagged() const {
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
}

Distances compute_distances(const Dataset& data, double ridge, bool squared) {
    const CovarianceModel model = fit_covariance(data, ridge);
    Distances d{mahalanobis_to_centroid(model, data), pairwise_mahalanobis(model, data)};
    if (squared) {
        d.to_centroid = d.to_centroid.array().square();
        d.pairwise = d.pairwise.array().square();
    }
    return d;
}

DetectionResult detect(const Dataset& data, const DetectorConfig& config) {
    config.validate(data.size());
    return detect(compute_distances(data, config.ridge, config.squared_distances), config);
}

DetectionResult detect(const Distances& distances, const DetectorConfig& config) {
    const auto n = static_cast<std::size_t>(distances.to_centroid.size());
    config.validate(n);

    AnomalyQuboSpec spec;
    spec.alpha = config.alpha;
    spec.k = config.k;
    spec.neighbor_limit = config.neighbor_limit;
    spec.penalty_weight = config.penalty_weight;
    const Qubo objective = build_anomaly_qubo(distances.to_centroid, distances.pairwise, spec);
    const double weight = config.penalty_weight.value_or(penalty_weight(objective));
    const Qubo penalized = apply_cardinality_penalty(objective, config.k, weight);

    Solution solution;
    if (config.solver == SolverKind::Exact) {
        solution = solve_exact(penalized);
    } else {
        SaConfig sa = config.sa;
        sa.warm_start_count = config.k;
        solution = solve_sa(penalized, sa);
    }

    DetectionResult result;
    result.method = "qubo";
    result.flags = solution.assignment;
    result.objective = energy(objective, result.flags);
    result.alpha = config.alpha;
    result.k = config.k;
    result.feasible = result.flagged() == config.k;
    result.penalty_weight = weight;

    result.scores.assign(objective.linear().begin(), objective.linear().end());
    for (const Term& t : objective.quadratic()) {
        if (result.flags[t.j]) {
            result.scores[t.i] += t.coeff;
        }
        if (result.flags[t.i]) {
            result.scores[t.j] += t.coeff;
        }
    }
    result.solution = std::move(solution);
    return result;
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) {
        grid.push_back(static_cast<double>(i) / 20.0);
    }
    return grid;
}

AlphaFit fit_alpha(const Dataset& data, DetectorConfig config, std::span<const double> grid) {
    if (!data.labeled()) {
        throw InvalidArgument("alpha fitting needs labeled data");
    }
    const std::size_t outliers = data.outlier_count();
    if (outliers == 0 || outliers == data.size()) {
        throw InvalidArgument("alpha fitting needs both classes in the labels");
    }
    if (grid.empty()) {
        throw InvalidArgument("alpha grid is empty");
    }
    for (double a : grid) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw InvalidArgument("alpha grid values must lie in [0, 1]");
        }
    }
    config.k = outliers;
    config.validate(data.size());
    const Distances distances = compute_distances(data, config.ridge, config.squared_distances);

    AlphaFit fit;
    bool first = true;
    for (double a : grid) {
        config.alpha = a;
        const DetectionResult r = detect(distances, config);
        const double auc = roc_auc_binary(*data.labels, r.flags).auc;
        fit.table.emplace_back(a, auc);
        if (first || auc > fit.best_auc || (auc == fit.best_auc && a < fit.best_alpha)) {
            fit.best_alpha = a;
            fit.best_auc = auc;
            first = false;
        }
    }
    return fit;
}

DetectionResult baseline_mahalanobis_topk(const Dataset& data, std::size_t k, double ridge) {
    check_k(k, data.size());
    const CovarianceModel model = fit_covariance(data, ridge);
    const Eigen::VectorXd d = mahalanobis_to_centroid(model, data);

    DetectionResult result;
    result.method = "mahalanobis-topk";
    result.scores.assign(d.data(), d.data() + d.size());
    result.flags = top_k_flags(result.scores, k);
    result.k = k;
    for (std::size_t i = 0; i < result.flags.size(); ++i) {
        if (result.flags[i]) {
            result.objective += result.scores[i];
        }
    }
    return result;
}

DetectionResult baseline_knn_dist(const Dataset& data, std::size_t k, std::size_t m, double ridge) {
    check_k(k, data.size());
    if (m < 1 || m >= data.size()) {
        throw InvalidArgument("neighbour count m must satisfy 1 <= m < N (m = " + std::to_string(m) + ")");
    }
    const CovarianceModel model = fit_covariance(data, ridge);
    const Eigen::MatrixXd d = pairwise_mahalanobis(model, data);
    const auto n = static_cast<Eigen::Index>(data.size());

    DetectionResult result;
    result.method = "knn";
    result.k = k;
    result.scores.resize(data.size());
    std::vector<double> row;
    for (Eigen::Index i = 0; i < n; ++i) {
        row.clear();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) {
                row.push_back(d(i, j));
            }
        }
        std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(m), row.end());
        double sum = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            sum += row[r];
        }
        result.scores[static_cast<std::size_t>(i)] = sum / static_cast<double>(m);
    }
    result.flags = top_k_flags(result.scores, k);
    for (std::size_t i = 0; i < result.flags.size(); ++i) {
        if (result.flags[i]) {
            result.objective += result.scores[i];
        }
    }
    return result;
}

} // namespace qad
