#include "qad/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qad/error.hpp"

namespace qad {

namespace {

struct ClassCounts {
    std::uint64_t positives = 0;
    std::uint64_t negatives = 0;
};

ClassCounts count_classes(std::span<const std::uint8_t> labels) {
    ClassCounts c;
    for (auto v : labels) {
        if (v > 1) {
            throw InvalidArgument("labels must be 0 or 1");
        }
        (v ? c.positives : c.negatives) += 1;
    }
    if (c.positives == 0 || c.negatives == 0) {
        throw InvalidArgument("ROC AUC needs both classes in the labels");
    }
    return c;
}

// Both AUC routes finish with this division of integers so they agree bit-for-bit.
double auc_from_twice_wins(std::uint64_t twice_wins, const ClassCounts& c) {
    return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(c.positives) * static_cast<double>(c.negatives));
}

} // namespace

EvalReport roc_auc_binary(std::span<const std::uint8_t> labels, std::span<const std::uint8_t> flags) {
    if (labels.size() != flags.size()) {
        throw InvalidArgument("labels and flags differ in length (" + std::to_string(labels.size()) + " vs "
                              + std::to_string(flags.size()) + ")");
    }
    const ClassCounts c = count_classes(labels);
    EvalReport r;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (flags[i] > 1) {
            throw InvalidArgument("flags must be 0 or 1");
        }
        if (labels[i]) {
            (flags[i] ? r.tp : r.fn) += 1;
        } else {
            (flags[i] ? r.fp : r.tn) += 1;
        }
    }
    r.tpr = static_cast<double>(r.tp) / static_cast<double>(c.positives);
    r.fpr = static_cast<double>(r.fp) / static_cast<double>(c.negatives);
    // (tpr + 1 - fpr) / 2 over the common denominator 2 P N.
    const std::uint64_t twice_wins = 2 * std::uint64_t{r.tp} * r.tn + std::uint64_t{r.tp} * r.fp
                                     + std::uint64_t{r.fn} * r.tn;
    r.auc = auc_from_twice_wins(twice_wins, c);
    return r;
}

double roc_auc_scores(std::span<const std::uint8_t> labels, std::span<const double> scores) {
    if (labels.size() != scores.size()) {
        throw InvalidArgument("labels and scores differ in length");
    }
    const ClassCounts c = count_classes(labels);
    for (double s : scores) {
        if (!std::isfinite(s)) {
            throw InvalidArgument("scores must be finite");
        }
    }
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    std::uint64_t twice_wins = 0;
    std::uint64_t negatives_below = 0;
    for (std::size_t a = 0; a < order.size();) {
        std::size_t b = a;
        std::uint64_t pos = 0;
        std::uint64_t neg = 0;
        while (b < order.size() && scores[order[b]] == scores[order[a]]) {
            (labels[order[b]] ? pos : neg) += 1;
            ++b;
        }
        twice_wins += 2 * pos * negatives_below + pos * neg;
        negatives_below += neg;
        a = b;
    }
    return auc_from_twice_wins(twice_wins, c);
}

} // namespace qad
