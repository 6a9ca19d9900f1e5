#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qad/dataset.hpp"
#include "qad/distance.hpp"
#include "qad/qubo.hpp"
#include "qad/solver.hpp"

namespace qad {

struct DetectorConfig {
    double alpha = 0.5;
    std::size_t k = 1;
    double ridge = kDefaultRidge;
    std::optional<std::size_t> neighbor_limit; // defaults to k
    SolverKind solver = SolverKind::Sa;
    SaConfig sa;
    bool squared_distances = false;
    std::optional<double> penalty_weight; // defaults to penalty_weight(q)

    // Throws InvalidArgument unless 0 <= alpha <= 1 and 1 <= k < n.
    void validate(std::size_t n) const;
};

struct DetectionResult {
    std::string method;
    Assignment flags;                 // 1 = flagged outlier
    double objective = 0.0;           // unpenalized objective of the flagged set
    std::optional<double> alpha;      // absent for methods without an alpha
    std::size_t k = 0;
    bool feasible = true;             // exactly k points flagged
    std::vector<double> scores;       // per-point anomaly score
    std::optional<Solution> solution; // raw solver output on the penalized QUBO
    std::optional<double> penalty_weight;

    std::size_t flagged() const;
};

// Centroid and pairwise distances under one covariance model.
struct Distances {
    Eigen::VectorXd to_centroid;
    Eigen::MatrixXd pairwise;
};

Distances compute_distances(const Dataset& data, double ridge, bool squared = false);

/// Distances, sparsified QUBO, cardinality penalty, solve.
///
/// scores[i] is point i's marginal contribution against the flagged set:
/// alpha d_i + (1 - alpha) * sum of d_ij over flagged j with (i, j) kept.
/// It is computed after the fact and is not what the solver optimizes.
DetectionResult detect(const Dataset& data, const DetectorConfig& config);
DetectionResult detect(const Distances& distances, const DetectorConfig& config);

struct AlphaFit {
    double best_alpha = 0.0;
    double best_auc = 0.0;
    std::vector<std::pair<double, double>> table; // (alpha, binary AUC) in grid order
};

// 0, 0.05, ..., 1.
std::vector<double> default_alpha_grid();

/// Grid search over alpha on labeled data with k set to the true outlier
/// count. The highest binary AUC wins, the smallest alpha on ties. Distances
/// are computed once and shared by all grid points.
AlphaFit fit_alpha(const Dataset& data, DetectorConfig config, std::span<const double> grid);

// Flags the k largest d_i (lower index first on ties); scores are d_i.
DetectionResult baseline_mahalanobis_topk(const Dataset& data, std::size_t k, double ridge = kDefaultRidge);

// score_i is the mean distance to the m nearest other points; flags the k largest.
DetectionResult baseline_knn_dist(const Dataset& data, std::size_t k, std::size_t m, double ridge = kDefaultRidge);

} // namespace qad
