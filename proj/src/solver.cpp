#include "qad/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "qad/error.hpp"
#include "qad/random.hpp"

namespace qad {

std::string_view to_string(SolverKind kind) {
    return kind == SolverKind::Exact ? "exact" : "sa";
}

SolverKind parse_solver_kind(std::string_view name) {
    if (name == "exact") {
        return SolverKind::Exact;
    }
    if (name == "sa") {
        return SolverKind::Sa;
    }
    throw InvalidArgument("unknown solver \"" + std::string(name) + "\" (expected exact or sa)");
}

void SaConfig::validate() const {
    if (restarts < 1) {
        throw InvalidArgument("restarts must be at least 1");
    }
    if (sweeps < 1) {
        throw InvalidArgument("sweeps must be at least 1");
    }
    if (!(beta_initial > 0.0 && beta_initial <= beta_final && std::isfinite(beta_final))) {
        throw InvalidArgument("beta schedule must satisfy 0 < beta_initial <= beta_final");
    }
}

CouplingGraph::CouplingGraph(const Qubo& q, double scale) : linear_(q.size()) {
    const std::size_t n = q.size();
    for (std::size_t i = 0; i < n; ++i) {
        linear_[i] = scale * q.linear()[i];
    }
    const auto quad = q.quadratic();

    // Most frequent coupling value, used only when every pair is present.
    if (n >= 3 && quad.size() == n * (n - 1) / 2) {
        std::vector<double> values(quad.size());
        std::transform(quad.begin(), quad.end(), values.begin(), [](const Term& t) { return t.coeff; });
        std::sort(values.begin(), values.end());
        std::size_t best_run = 0;
        double mode = 0.0;
        for (std::size_t a = 0; a < values.size();) {
            std::size_t b = a;
            while (b < values.size() && values[b] == values[a]) {
                ++b;
            }
            if (b - a > best_run) {
                best_run = b - a;
                mode = values[a];
            }
            a = b;
        }
        if (2 * best_run > values.size()) {
            uniform_ = mode;
        }
    }

    std::vector<std::size_t> degree(n, 0);
    for (const Term& t : quad) {
        if (t.coeff != uniform_ || uniform_ == 0.0) {
            ++degree[t.i];
            ++degree[t.j];
        }
    }
    offsets_.assign(n + 1, 0);
    std::partial_sum(degree.begin(), degree.end(), offsets_.begin() + 1);
    neighbors_.resize(offsets_[n]);
    weights_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Term& t : quad) {
        if (t.coeff == uniform_ && uniform_ != 0.0) {
            continue;
        }
        const double w = scale * (t.coeff - uniform_);
        neighbors_[fill[t.i]] = t.j;
        weights_[fill[t.i]++] = w;
        neighbors_[fill[t.j]] = t.i;
        weights_[fill[t.j]++] = w;
    }
    uniform_ *= scale;
}

FlipState::FlipState(const CouplingGraph& graph, Assignment start)
    : graph_(&graph), x_(std::move(start)), field_(graph.linear_) {
    if (x_.size() != graph.size()) {
        throw InvalidArgument("start assignment has the wrong length");
    }
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (!x_[i]) {
            continue;
        }
        ++ones_;
        for (std::size_t e = graph.offsets_[i]; e < graph.offsets_[i + 1]; ++e) {
            field_[graph.neighbors_[e]] += graph.weights_[e];
        }
    }
    energy_ = recompute_energy();
}

void FlipState::flip(std::size_t i) {
    energy_ += gain(i);
    const double sign = x_[i] ? -1.0 : 1.0;
    x_[i] ^= 1;
    ones_ = x_[i] ? ones_ + 1 : ones_ - 1;
    for (std::size_t e = graph_->offsets_[i]; e < graph_->offsets_[i + 1]; ++e) {
        field_[graph_->neighbors_[e]] += sign * graph_->weights_[e];
    }
}

double FlipState::recompute_energy() const {
    double e = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (!x_[i]) {
            continue;
        }
        e += graph_->linear_[i];
        for (std::size_t k = graph_->offsets_[i]; k < graph_->offsets_[i + 1]; ++k) {
            const std::size_t j = graph_->neighbors_[k];
            if (j > i && x_[j]) {
                e += graph_->weights_[k];
            }
        }
    }
    const auto m = static_cast<double>(ones_);
    return e + graph_->uniform_ * m * (m - 1.0) / 2.0;
}

namespace {

double gain_tolerance(const Qubo& q) {
    return 1e-12 * std::max(1.0, q.max_abs_coefficient());
}

Assignment ascend(const CouplingGraph& graph, Assignment start, double tolerance) {
    FlipState state(graph, std::move(start));
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i < graph.size(); ++i) {
            if (state.gain(i) > tolerance) {
                state.flip(i);
                improved = true;
            }
        }
    }
    return state.assignment();
}

Assignment top_by_linear(const Qubo& q, std::size_t count) {
    const std::size_t n = q.size();
    count = std::min(count, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto lin = q.linear();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lin[a] > lin[b]; });
    Assignment x(n, 0);
    for (std::size_t r = 0; r < count; ++r) {
        x[order[r]] = 1;
    }
    return x;
}

} // namespace

Assignment greedy_ascent(const Qubo& q, Assignment start) {
    const CouplingGraph graph(q);
    return ascend(graph, std::move(start), gain_tolerance(q));
}

Solution solve_exact(const Qubo& q) {
    const std::size_t n = q.size();
    if (n > kMaxExactVariables) {
        throw SolverLimit("exact solver enumerates 2^n assignments and is limited to n <= "
                          + std::to_string(kMaxExactVariables) + " variables (got n = " + std::to_string(n)
                          + "); use the sa solver instead");
    }
    Solution sol;
    sol.solver = SolverKind::Exact;
    sol.assignment.assign(n, 0);
    sol.objective = 0.0;
    if (n == 0) {
        return sol;
    }

    // Bit b of a mask is variable n-1-b, so numeric order is lexicographic order.
    const auto to_assignment = [n](std::uint32_t mask) {
        Assignment x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<std::uint8_t>((mask >> (n - 1 - i)) & 1U);
        }
        return x;
    };

    double scale_sum = 0.0;
    for (const Term& t : q.terms()) {
        scale_sum += std::abs(t.coeff);
    }
    // Bound on drift of the running Gray-code energy; candidates inside it are re-evaluated exactly.
    const double tolerance = 1e-9 * (1.0 + scale_sum);

    const CouplingGraph graph(q);
    FlipState state(graph, Assignment(n, 0));
    std::uint32_t mask = 0;
    std::uint32_t best_mask = 0;
    double best = 0.0; // all-zeros assignment, evaluated exactly

    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t step = 1; step < count; ++step) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(step));
        state.flip(n - 1 - bit);
        mask ^= std::uint32_t{1} << bit;
        if (state.energy() < best - tolerance) {
            continue;
        }
        const double exact = energy(q, to_assignment(mask));
        if (exact > best || (exact == best && mask < best_mask)) {
            best = exact;
            best_mask = mask;
        }
    }
    sol.assignment = to_assignment(best_mask);
    sol.objective = energy(q, sol.assignment);
    return sol;
}

Solution solve_sa(const Qubo& q, const SaConfig& config) {
    config.validate();
    const std::size_t n = q.size();
    if (n < 1) {
        throw InvalidArgument("simulated annealing needs at least one variable");
    }
    if (config.warm_start_count && *config.warm_start_count > n) {
        throw InvalidArgument("warm start count exceeds the number of variables");
    }
    const double max_abs = q.max_abs_coefficient();
    const double scale = max_abs > 0.0 ? 1.0 / max_abs : 1.0;
    const CouplingGraph scaled(q, scale);
    const CouplingGraph original(q);
    const double tolerance = gain_tolerance(q);

    const double ratio = config.beta_final / config.beta_initial;
    const double denom = config.sweeps > 1 ? static_cast<double>(config.sweeps - 1) : 1.0;

    Solution best;
    best.solver = SolverKind::Sa;
    best.seed = config.seed;
    best.sweeps = config.sweeps;
    best.restarts = config.restarts;
    bool have_best = false;

    for (std::size_t r = 0; r < config.restarts; ++r) {
        Rng rng(derive_seed(config.seed, r));
        Assignment start(n, 0);
        if (r == 0) {
            start = config.warm_start_count ? top_by_linear(q, *config.warm_start_count)
                                            : ascend(original, Assignment(n, 0), tolerance);
        } else {
            for (auto& v : start) {
                v = static_cast<std::uint8_t>(rng.next() >> 63);
            }
        }

        FlipState state(scaled, std::move(start));
        Assignment seen = state.assignment();
        double seen_energy = state.energy();
        for (std::size_t sweep = 0; sweep < config.sweeps; ++sweep) {
            const double beta = config.beta_initial * std::pow(ratio, static_cast<double>(sweep) / denom);
            for (std::size_t i = 0; i < n; ++i) {
                const double g = state.gain(i);
                if (g >= 0.0 || rng.uniform() < std::exp(beta * g)) {
                    state.flip(i);
                    if (state.energy() > seen_energy) {
                        seen_energy = state.energy();
                        seen = state.assignment();
                    }
                }
            }
        }

        Assignment polished = ascend(original, std::move(seen), tolerance);
        const double value = energy(q, polished);
        if (!have_best || value > best.objective) {
            best.objective = value;
            best.assignment = std::move(polished);
            have_best = true;
        }
    }
    return best;
}

} // namespace qad
