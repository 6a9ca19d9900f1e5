#include <doctest.h>

#include "qad/error.hpp"
#include "qad/solver.hpp"
#include "test_util.hpp"

using namespace qad;
using namespace qad::testing;

namespace {

Qubo diagonal123() {
    const std::vector<Term> t{{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 3.0}};
    return Qubo::from_terms(3, t);
}

Qubo random_qubo(std::size_t n, Rng& rng, double density = 0.5) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < n; ++i) {
        terms.push_back({i, i, 4.0 * rng.normal()});
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.uniform() < density) {
                terms.push_back({i, j, 4.0 * rng.normal()});
            }
        }
    }
    return Qubo::from_terms(n, terms);
}

Qubo penalized_anomaly(std::size_t n, std::size_t k, Rng& rng) {
    const auto inst = random_distances(n, rng);
    return apply_cardinality_penalty(build_anomaly_qubo(inst.d_lin, inst.d_quad, {rng.uniform(), k, {}, {}}), k);
}

} // namespace

TEST_CASE("solve_exact examples") {
    const Solution s = solve_exact(diagonal123());
    CHECK(s.assignment == Assignment{1, 1, 1});
    CHECK(s.objective == 6.0);
    CHECK(s.solver == SolverKind::Exact);
    CHECK(s.sweeps == 0);

    const Qubo base = diagonal123();
    const Qubo pen = apply_cardinality_penalty(base, 1, 100.0);
    const Solution p = solve_exact(pen);
    CHECK(p.assignment == Assignment{0, 0, 1});
    CHECK(energy(base, p.assignment) == 3.0);
    CHECK(p.objective == 103.0);

    const Solution z = solve_exact(Qubo(5));
    CHECK(z.assignment == Assignment(5, 0));
    CHECK(z.objective == 0.0);
}

TEST_CASE("solve_exact breaks ties lexicographically") {
    // x0 and x2 are interchangeable; (0, 0, 1) < (1, 0, 0) as binary strings.
    const std::vector<Term> t{{0, 0, 1.0}, {2, 2, 1.0}, {0, 2, -5.0}};
    CHECK(solve_exact(Qubo::from_terms(3, t)).assignment == Assignment{0, 0, 1});
}

TEST_CASE("solve_exact refuses more than 24 variables") {
    CHECK_NOTHROW(solve_exact(Qubo(kMaxExactVariables)));
    CHECK_THROWS_WITH_AS(solve_exact(Qubo(25)), doctest::Contains("n <= 24"), SolverLimit);
}

TEST_CASE("solve_exact agrees with an independent enumerator") {
    Rng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.below(12);
        const Qubo q = trial % 2 ? random_qubo(n, rng) : penalized_anomaly(std::max<std::size_t>(n, 2), 1, rng);
        const BruteForce bf = brute_force(q);
        const Solution s = solve_exact(q);
        CHECK(near(s.objective, bf.best, 1e-12));
        CHECK(s.objective == energy(q, s.assignment));
        Assignment smallest = bf.maximizers.front();
        for (const auto& x : bf.maximizers) {
            if (std::lexicographical_compare(x.begin(), x.end(), smallest.begin(), smallest.end())) {
                smallest = x;
            }
        }
        CHECK(s.assignment == smallest);
    }
}

TEST_CASE("SaConfig validation") {
    SaConfig c;
    CHECK_NOTHROW(c.validate());
    c.restarts = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.sweeps = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.beta_initial = 20.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.beta_initial = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    CHECK_THROWS_AS(solve_sa(Qubo(0)), InvalidArgument);
    CHECK(parse_solver_kind("exact") == SolverKind::Exact);
    CHECK(to_string(parse_solver_kind("sa")) == "sa");
    CHECK_THROWS_AS(parse_solver_kind("tabu"), InvalidArgument);
}

TEST_CASE("solve_sa is at least the greedy optimum from all zeros") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(12);
        const Qubo q = random_qubo(n, rng);
        const double greedy = energy(q, greedy_ascent(q, Assignment(n, 0)));
        SaConfig cfg;
        cfg.restarts = 1;
        cfg.sweeps = 5;
        cfg.seed = rng.next();
        CHECK(solve_sa(q, cfg).objective >= greedy);
    }
}

TEST_CASE("greedy_ascent ends in a single-flip local optimum") {
    Rng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.below(10);
        const Qubo q = random_qubo(n, rng);
        Assignment x = from_mask(static_cast<std::uint32_t>(rng.below(1U << n)), n);
        const double before = energy(q, x);
        x = greedy_ascent(q, x);
        const double e = energy(q, x);
        CHECK(e >= before);
        for (std::size_t i = 0; i < n; ++i) {
            Assignment y = x;
            y[i] ^= 1U;
            CHECK(energy(q, y) <= e + 1e-9);
        }
    }
}

TEST_CASE("solve_sa matches solve_exact on penalized anomaly QUBOs") {
    Rng rng(44);
    int matches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Qubo q = penalized_anomaly(10, 3, rng);
        SaConfig cfg;
        cfg.seed = rng.next();
        const Solution sa = solve_sa(q, cfg);
        const Solution ex = solve_exact(q);
        CHECK(sa.objective <= ex.objective);
        if (sa.objective == ex.objective) {
            ++matches;
        }
    }
    CHECK(matches >= 95);
}

TEST_CASE("solve_sa never exceeds solve_exact up to n = 20") {
    Rng rng(45);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t n = 14 + rng.below(7);
        const Qubo q = trial % 2 ? random_qubo(n, rng, 0.3) : penalized_anomaly(n, 1 + rng.below(4), rng);
        SaConfig cfg;
        cfg.restarts = 4;
        cfg.sweeps = 200;
        cfg.seed = rng.next();
        const Solution sa = solve_sa(q, cfg);
        CHECK(sa.objective <= solve_exact(q).objective);
        CHECK(sa.objective == energy(q, sa.assignment));
    }
}

TEST_CASE("solve_sa is deterministic and self-consistent") {
    Rng rng(46);
    const Qubo q = penalized_anomaly(30, 4, rng);
    SaConfig cfg;
    cfg.restarts = 5;
    cfg.sweeps = 300;
    cfg.seed = 9;
    const Solution a = solve_sa(q, cfg);
    const Solution b = solve_sa(q, cfg);
    CHECK(a.assignment == b.assignment);
    CHECK(a.objective == b.objective);
    CHECK(a.objective == energy(q, a.assignment));
    CHECK(a.solver == SolverKind::Sa);
    CHECK(a.seed == 9);
    CHECK(a.sweeps == 300);
    CHECK(a.restarts == 5);
}

TEST_CASE("solve_sa selects everything when k equals n") {
    Rng rng(47);
    const auto inst = random_distances(8, rng);
    const Qubo q = apply_cardinality_penalty(build_anomaly_qubo(inst.d_lin, inst.d_quad, {0.5, 8, {}, {}}), 8);
    CHECK(solve_sa(q).assignment == Assignment(8, 1));
    CHECK(solve_exact(q).assignment == Assignment(8, 1));
}

TEST_CASE("warm start from the top-k linear coefficients") {
    Rng rng(48);
    const Qubo q = penalized_anomaly(40, 3, rng);
    SaConfig cfg;
    cfg.warm_start_count = 3;
    cfg.restarts = 2;
    cfg.sweeps = 100;
    const Solution s = solve_sa(q, cfg);
    CHECK(ones(s.assignment) == 3);
    cfg.warm_start_count = 41;
    CHECK_THROWS_AS(solve_sa(q, cfg), InvalidArgument);
}

TEST_CASE("FlipState tracks energy under random flips") {
    Rng rng(49);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.below(30);
        const Qubo q = trial % 3 == 0 ? random_qubo(n, rng) : penalized_anomaly(n, 1 + rng.below(n - 1), rng);
        const CouplingGraph graph(q);
        Assignment start = from_mask(0, n);
        for (auto& v : start) {
            v = static_cast<std::uint8_t>(rng.below(2));
        }
        FlipState state(graph, start);
        CHECK(near(state.energy(), energy(q, start), 1e-9));
        for (int f = 0; f < 200; ++f) {
            const std::size_t i = rng.below(n);
            Assignment y = state.assignment();
            y[i] ^= 1U;
            const double expected_gain = energy(q, y) - energy(q, state.assignment());
            CHECK(near(state.gain(i), expected_gain, 1e-9));
            state.flip(i);
            CHECK(state.ones() == ones(state.assignment()));
        }
        CHECK(near(state.energy(), energy(q, state.assignment()), 1e-9));
        CHECK(near(state.energy(), state.recompute_energy(), 1e-9));
    }
}

TEST_CASE("CouplingGraph splits a penalty into uniform coupling plus residual") {
    Rng rng(50);
    const auto inst = random_distances(20, rng);
    const Qubo base = build_anomaly_qubo(inst.d_lin, inst.d_quad, {0.5, 2, {}, {}});
    const Qubo pen = apply_cardinality_penalty(base, 2, 10.0);
    const CouplingGraph g(pen);
    CHECK(g.uniform_coupling() == -20.0);
    CHECK(g.residual_edges() == base.quadratic().size());
    CHECK(CouplingGraph(base).uniform_coupling() == 0.0);
}
