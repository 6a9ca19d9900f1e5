#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace qad {

struct EvalReport {
    double auc = 0.0; // binary AUC: area under the ROC through the single operating point
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
    double tpr = 0.0;
    double fpr = 0.0;
};

/// AUC of hard 0/1 predictions, (tpr + 1 - fpr) / 2 (balanced accuracy).
/// Throws InvalidArgument on length mismatch, non-binary entries or labels
/// holding a single class.
EvalReport roc_auc_binary(std::span<const std::uint8_t> labels, std::span<const std::uint8_t> flags);

/// Ranking AUC: probability that a random positive scores above a random
/// negative, ties counting one half.
double roc_auc_scores(std::span<const std::uint8_t> labels, std::span<const double> scores);

} // namespace qad
