#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qad {

using Assignment = std::vector<std::uint8_t>;

struct AnomalyQuboSpec;

struct Term {
    std::size_t i = 0;
    std::size_t j = 0;
    double coeff = 0.0;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Quadratic binary objective f(x) = sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j,
/// to be maximized.
///
/// Linear coefficients are held densely; quadratic terms are kept sorted by
/// (i, j) with i < j, each unordered pair stored once. Zero coefficients are
/// never reported as terms.
class Qubo {
public:
    Qubo() = default;
    explicit Qubo(std::size_t n);

    /// Sums duplicate entries and drops zeros. Throws InvalidArgument on an
    /// index outside [0, n), on i > j, or on a non-finite coefficient; the
    /// message names the offending position in `terms`.
    static Qubo from_terms(std::size_t n, std::span<const Term> terms);

    std::size_t size() const { return n_; }
    std::span<const double> linear() const { return linear_; }
    std::span<const Term> quadratic() const { return quadratic_; }

    // Q_ij for any ordered pair; Q_ij == Q_ji.
    double coefficient(std::size_t i, std::size_t j) const;

    // Every non-zero term, diagonal included, in (i, j) order.
    std::vector<Term> terms() const;
    std::size_t term_count() const;
    double max_abs_coefficient() const;

    friend Qubo operator+(const Qubo& a, const Qubo& b);
    friend bool operator==(const Qubo&, const Qubo&) = default;

private:
    friend Qubo apply_cardinality_penalty(const Qubo&, std::size_t, std::optional<double>);
    friend Qubo build_anomaly_qubo(const Eigen::VectorXd&, const Eigen::MatrixXd&, const AnomalyQuboSpec&);

    std::size_t n_ = 0;
    std::vector<double> linear_;
    std::vector<Term> quadratic_;
};

// f(x) under the maximization convention. Throws InvalidArgument on a
// length mismatch or a non-binary entry.
double energy(const Qubo& q, std::span<const std::uint8_t> x);

struct AnomalyQuboSpec {
    double alpha = 0.5;
    std::size_t k = 1;
    std::optional<std::size_t> neighbor_limit; // furthest neighbours kept per point; defaults to k
    std::optional<double> penalty_weight;      // explicit A; derived when absent

    std::size_t effective_neighbor_limit() const { return neighbor_limit.value_or(k); }
    void validate(std::size_t n) const;
};

/// Anomaly objective before the cardinality penalty.
///
/// Linear term i is alpha * d_i. Every point nominates its
/// effective_neighbor_limit() furthest points (ties to the lower index); the
/// union of nominated pairs is kept and each gets (1 - alpha) * d_ij once.
Qubo build_anomaly_qubo(const Eigen::VectorXd& d_lin, const Eigen::MatrixXd& d_quad,
                        const AnomalyQuboSpec& spec);

enum class PenaltyRule {
    // 1 + the largest gain any single variable can contribute
    // (|Q_ii| + sum_j |Q_ij|). Guarantees every maximizer selects exactly k.
    SingleVariableGain,
    // 1 + max |Q_ij| over all coefficients. Not sufficient in general.
    MaxCoefficient,
};

double penalty_weight(const Qubo& q, PenaltyRule rule = PenaltyRule::SingleVariableGain);

/// q plus the expansion of -A (sum_i x_i - k)^2 without its constant -A k^2:
/// every Q_ii gains A (2k - 1) and every pair i < j gains -2A. A defaults to
/// penalty_weight(q).
Qubo apply_cardinality_penalty(const Qubo& q, std::size_t k, std::optional<double> weight = std::nullopt);

} // namespace qad
