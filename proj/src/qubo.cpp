#include "qad/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qad/error.hpp"

namespace qad {

namespace {

bool pair_less(const Term& a, const Term& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
}

} // namespace

Qubo::Qubo(std::size_t n) : n_(n), linear_(n, 0.0) {}

Qubo Qubo::from_terms(std::size_t n, std::span<const Term> terms) {
    Qubo q(n);
    std::vector<Term> quad;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const Term& term = terms[t];
        if (term.i >= n || term.j >= n) {
            throw InvalidArgument("term " + std::to_string(t) + ": index out of range [0, "
                                  + std::to_string(n) + ")");
        }
        if (term.i > term.j) {
            throw InvalidArgument("term " + std::to_string(t) + ": expected i <= j, got ("
                                  + std::to_string(term.i) + ", " + std::to_string(term.j) + ")");
        }
        if (!std::isfinite(term.coeff)) {
            throw InvalidArgument("term " + std::to_string(t) + ": coefficient is not finite");
        }
        if (term.i == term.j) {
            q.linear_[term.i] += term.coeff;
        } else {
            quad.push_back(term);
        }
    }
    std::stable_sort(quad.begin(), quad.end(), pair_less);
    for (const Term& term : quad) {
        if (!q.quadratic_.empty() && q.quadratic_.back().i == term.i && q.quadratic_.back().j == term.j) {
            q.quadratic_.back().coeff += term.coeff;
        } else {
            q.quadratic_.push_back(term);
        }
    }
    std::erase_if(q.quadratic_, [](const Term& t) { return t.coeff == 0.0; });
    return q;
}

double Qubo::coefficient(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) {
        throw InvalidArgument("coefficient index out of range");
    }
    if (i == j) {
        return linear_[i];
    }
    const Term key{std::min(i, j), std::max(i, j), 0.0};
    const auto it = std::lower_bound(quadratic_.begin(), quadratic_.end(), key, pair_less);
    return (it != quadratic_.end() && it->i == key.i && it->j == key.j) ? it->coeff : 0.0;
}

std::vector<Term> Qubo::terms() const {
    std::vector<Term> out;
    out.reserve(term_count());
    auto quad = quadratic_.begin();
    for (std::size_t i = 0; i < n_; ++i) {
        if (linear_[i] != 0.0) {
            out.push_back({i, i, linear_[i]});
        }
        for (; quad != quadratic_.end() && quad->i == i; ++quad) {
            out.push_back(*quad);
        }
    }
    return out;
}

std::size_t Qubo::term_count() const {
    return quadratic_.size()
           + static_cast<std::size_t>(std::count_if(linear_.begin(), linear_.end(), [](double v) { return v != 0.0; }));
}

double Qubo::max_abs_coefficient() const {
    double m = 0.0;
    for (double v : linear_) {
        m = std::max(m, std::abs(v));
    }
    for (const Term& t : quadratic_) {
        m = std::max(m, std::abs(t.coeff));
    }
    return m;
}

Qubo operator+(const Qubo& a, const Qubo& b) {
    if (a.n_ != b.n_) {
        throw InvalidArgument("cannot add QUBOs of different sizes");
    }
    std::vector<Term> all = a.terms();
    const auto more = b.terms();
    all.insert(all.end(), more.begin(), more.end());
    return Qubo::from_terms(a.n_, all);
}

double energy(const Qubo& q, std::span<const std::uint8_t> x) {
    if (x.size() != q.size()) {
        throw InvalidArgument("assignment has length " + std::to_string(x.size()) + ", QUBO has "
                              + std::to_string(q.size()) + " variables");
    }
    double e = 0.0;
    const auto lin = q.linear();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 1) {
            throw InvalidArgument("assignment entries must be 0 or 1");
        }
        if (x[i]) {
            e += lin[i];
        }
    }
    for (const Term& t : q.quadratic()) {
        if (x[t.i] && x[t.j]) {
            e += t.coeff;
        }
    }
    return e;
}

void AnomalyQuboSpec::validate(std::size_t n) const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InvalidArgument("alpha must lie in [0, 1]");
    }
    if (k < 1 || k > n) {
        throw InvalidArgument("k must satisfy 0 < k <= N (k = " + std::to_string(k) + ", N = "
                              + std::to_string(n) + ")");
    }
    if (neighbor_limit && *neighbor_limit < 1) {
        throw InvalidArgument("neighbor_limit must be at least 1");
    }
    if (penalty_weight && !(std::isfinite(*penalty_weight) && *penalty_weight > 0.0)) {
        throw InvalidArgument("penalty weight must be positive and finite");
    }
}

Qubo build_anomaly_qubo(const Eigen::VectorXd& d_lin, const Eigen::MatrixXd& d_quad, const AnomalyQuboSpec& spec) {
    const auto n = static_cast<std::size_t>(d_lin.size());
    if (d_quad.rows() != d_lin.size() || d_quad.cols() != d_lin.size()) {
        throw InvalidArgument("distance inputs disagree on N: " + std::to_string(n) + " centroid distances, "
                              + std::to_string(d_quad.rows()) + "x" + std::to_string(d_quad.cols())
                              + " pairwise matrix");
    }
    spec.validate(n);
    if (!d_lin.allFinite() || (d_lin.array() < 0.0).any()) {
        throw InvalidArgument("centroid distances must be finite and non-negative");
    }
    if (!d_quad.allFinite() || (d_quad.array() < 0.0).any()) {
        throw InvalidArgument("pairwise distances must be finite and non-negative");
    }
    if (n > 0) {
        const double scale = d_quad.maxCoeff();
        if ((d_quad.diagonal().array() != 0.0).any()
            || (d_quad - d_quad.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            throw InvalidArgument("pairwise distances must be symmetric with a zero diagonal");
        }
    }

    Qubo q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.linear_[i] = spec.alpha * d_lin(static_cast<Eigen::Index>(i));
    }
    const double pair_weight = 1.0 - spec.alpha;
    if (pair_weight == 0.0 || n < 2) {
        return q;
    }

    const std::size_t limit = std::min(spec.effective_neighbor_limit(), n - 1);
    std::vector<std::pair<std::size_t, std::size_t>> kept;
    kept.reserve(n * limit);
    std::vector<std::size_t> others(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        std::iota(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(i), std::size_t{0});
        std::iota(others.begin() + static_cast<std::ptrdiff_t>(i), others.end(), i + 1);
        const auto further = [&](std::size_t a, std::size_t b) {
            const double da = d_quad(row, static_cast<Eigen::Index>(a));
            const double db = d_quad(row, static_cast<Eigen::Index>(b));
            return da != db ? da > db : a < b;
        };
        std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(limit), others.end(), further);
        for (std::size_t r = 0; r < limit; ++r) {
            kept.emplace_back(std::min(i, others[r]), std::max(i, others[r]));
        }
    }
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

    for (const auto& [i, j] : kept) {
        // Read the upper triangle so the coefficient does not depend on which endpoint nominated the pair.
        const double c = pair_weight * d_quad(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (c != 0.0) {
            q.quadratic_.push_back({i, j, c});
        }
    }
    return q;
}

double penalty_weight(const Qubo& q, PenaltyRule rule) {
    if (rule == PenaltyRule::MaxCoefficient) {
        return 1.0 + q.max_abs_coefficient();
    }
    std::vector<double> gain(q.size(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        gain[i] = std::abs(q.linear()[i]);
    }
    for (const Term& t : q.quadratic()) {
        gain[t.i] += std::abs(t.coeff);
        gain[t.j] += std::abs(t.coeff);
    }
    const double worst = gain.empty() ? 0.0 : *std::max_element(gain.begin(), gain.end());
    return 1.0 + worst;
}

Qubo apply_cardinality_penalty(const Qubo& q, std::size_t k, std::optional<double> weight) {
    const std::size_t n = q.size();
    if (k < 1 || k > n) {
        throw InvalidArgument("cardinality target k must satisfy 0 < k <= n (k = " + std::to_string(k)
                              + ", n = " + std::to_string(n) + ")");
    }
    const double a = weight.value_or(penalty_weight(q));
    if (!(std::isfinite(a) && a > 0.0)) {
        throw InvalidArgument("penalty weight must be positive and finite");
    }

    Qubo out(n);
    const double diagonal_gain = a * (2.0 * static_cast<double>(k) - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        out.linear_[i] = q.linear_[i] + diagonal_gain;
    }
    // Merge the existing sorted pairs with the complete pair list.
    out.quadratic_.reserve(n * (n - 1) / 2);
    auto existing = q.quadratic_.begin();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double c = -2.0 * a;
            if (existing != q.quadratic_.end() && existing->i == i && existing->j == j) {
                c = existing->coeff + c;
                ++existing;
            }
            if (c != 0.0) {
                out.quadratic_.push_back({i, j, c});
            }
        }
    }
    return out;
}

} // namespace qad
