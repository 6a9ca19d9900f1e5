#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qad/qubo.hpp"

namespace qad {

enum class SolverKind { Exact, Sa };

std::string_view to_string(SolverKind kind);
// Accepts "exact" or "sa"; throws InvalidArgument otherwise.
SolverKind parse_solver_kind(std::string_view name);

struct Solution {
    Assignment assignment;
    double objective = 0.0; // energy(q, assignment), recomputed from scratch
    SolverKind solver = SolverKind::Exact;
    std::uint64_t seed = 0;
    std::size_t sweeps = 0;
    std::size_t restarts = 0;
};

struct SaConfig {
    std::size_t restarts = 16;
    std::size_t sweeps = 1000;
    // Geometric inverse-temperature schedule, applied to coefficients scaled by 1 / max|Q|.
    double beta_initial = 0.1;
    double beta_final = 10.0;
    std::uint64_t seed = 42;
    // When set, restart 0 starts from the top-k variables by linear coefficient
    // (the feasible point of a k-cardinality penalty). Otherwise it starts from
    // the greedy single-flip ascent from all zeros.
    std::optional<std::size_t> warm_start_count;

    void validate() const;
};

inline constexpr std::size_t kMaxExactVariables = 24;

/// Global maximizer by Gray-code enumeration of all 2^n assignments. Among
/// equal maximizers the lexicographically smallest assignment (index 0 most
/// significant) wins. Throws SolverLimit when n > kMaxExactVariables.
Solution solve_exact(const Qubo& q);

/// Single-bit-flip Metropolis annealing with restarts.
///
/// Each sweep visits the variables in index order; a flip with gain >= 0 is
/// always taken, otherwise with probability exp(beta * gain). Restart r draws
/// from its own stream derive_seed(seed, r), so the result does not depend on
/// the order restarts are executed in. The best assignment seen by each
/// restart is polished by greedy single-flip ascent; the best restart wins,
/// earlier restarts on ties.
Solution solve_sa(const Qubo& q, const SaConfig& config = {});

// First-improvement single-flip ascent: sweeps in index order until no flip
// has positive gain.
Assignment greedy_ascent(const Qubo& q, Assignment start);

/// Adjacency form of a Qubo for incremental search.
///
/// A dense QUBO (every pair present) whose couplings mostly share one value c
/// is split into c on all pairs plus a sparse residual, which is how a
/// cardinality penalty appears. Flips then cost O(residual degree).
class CouplingGraph {
public:
    explicit CouplingGraph(const Qubo& q, double scale = 1.0);

    std::size_t size() const { return linear_.size(); }
    double uniform_coupling() const { return uniform_; }
    std::size_t residual_edges() const { return neighbors_.size() / 2; }

private:
    friend class FlipState;

    std::vector<double> linear_;
    double uniform_ = 0.0;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> neighbors_;
    std::vector<double> weights_;
};

/// Assignment plus local fields, kept current under single flips.
class FlipState {
public:
    FlipState(const CouplingGraph& graph, Assignment start);

    // Energy change from flipping variable i.
    double gain(std::size_t i) const {
        const double h = field_[i] + graph_->uniform_ * static_cast<double>(ones_ - x_[i]);
        return x_[i] ? -h : h;
    }
    void flip(std::size_t i);

    double energy() const { return energy_; }
    const Assignment& assignment() const { return x_; }
    std::size_t ones() const { return ones_; }

    // Energy recomputed from the graph, ignoring the running total.
    double recompute_energy() const;

private:
    const CouplingGraph* graph_;
    Assignment x_;
    std::vector<double> field_; // linear + residual couplings to selected neighbours
    std::size_t ones_ = 0;
    double energy_ = 0.0;
};

} // namespace qad
