#include "qad/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qad/error.hpp"

namespace qad {

using nlohmann::json;

json qubo_to_json(const Qubo& q) {
    json terms = json::array();
    for (const Term& t : q.terms()) {
        terms.push_back(json::array({t.i, t.j, t.coeff}));
    }
    return json{{"n", q.size()}, {"sense", "max"}, {"terms", std::move(terms)}};
}

Qubo qubo_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw DataError("QUBO document must be a JSON object");
    }
    if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
        throw DataError("QUBO field \"n\" must be a positive integer");
    }
    if (doc.contains("sense") && doc["sense"] != "max") {
        throw DataError("QUBO field \"sense\" must be \"max\"");
    }
    if (!doc.contains("terms") || !doc["terms"].is_array()) {
        throw DataError("QUBO field \"terms\" must be an array");
    }
    const auto n = doc["n"].get<std::size_t>();
    std::vector<Term> terms;
    const json& raw = doc["terms"];
    for (std::size_t t = 0; t < raw.size(); ++t) {
        const json& e = raw[t];
        const std::string where = "QUBO term " + std::to_string(t);
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer()
            || !e[2].is_number()) {
            throw DataError(where + ": expected [i, j, coeff] with integer indices");
        }
        const auto i = e[0].get<long long>();
        const auto j = e[1].get<long long>();
        const auto c = e[2].get<double>();
        if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n) {
            throw DataError(where + ": index (" + std::to_string(i) + ", " + std::to_string(j) + ") outside [0, "
                            + std::to_string(n) + ")");
        }
        if (i > j) {
            throw DataError(where + ": expected i <= j, got (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
        if (!std::isfinite(c)) {
            throw DataError(where + ": coefficient is not finite");
        }
        terms.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), c});
    }
    return Qubo::from_terms(n, terms);
}

void to_json(json& j, const Solution& s) {
    j = json{{"assignment", s.assignment}, {"objective", s.objective}, {"solver", to_string(s.solver)},
             {"seed", s.seed},             {"sweeps", s.sweeps},       {"restarts", s.restarts}};
}

void to_json(json& j, const SaConfig& c) {
    j = json{{"restarts", c.restarts},       {"sweeps", c.sweeps}, {"beta_initial", c.beta_initial},
             {"beta_final", c.beta_final},   {"seed", c.seed}};
    if (c.warm_start_count) {
        j["warm_start_count"] = *c.warm_start_count;
    }
}

void to_json(json& j, const DetectorConfig& c) {
    j = json{{"alpha", c.alpha},
             {"k", c.k},
             {"ridge", c.ridge},
             {"neighbor_limit", c.neighbor_limit.value_or(c.k)},
             {"solver", to_string(c.solver)},
             {"sa", c.sa},
             {"squared_distances", c.squared_distances}};
    if (c.penalty_weight) {
        j["penalty_weight"] = *c.penalty_weight;
    }
}

void to_json(json& j, const EvalReport& r) {
    j = json{{"auc", r.auc}, {"auc_kind", "binary"}, {"tp", r.tp},   {"fp", r.fp},
             {"tn", r.tn},   {"fn", r.fn},           {"tpr", r.tpr}, {"fpr", r.fpr}};
}

void to_json(json& j, const DetectionResult& r) {
    j = json{{"method", r.method}, {"flags", r.flags}, {"objective", r.objective}, {"k", r.k},
             {"feasible", r.feasible}};
    j["alpha"] = r.alpha ? json(*r.alpha) : json(nullptr);
    if (!r.scores.empty()) {
        j["scores"] = r.scores;
    }
    if (r.penalty_weight) {
        j["penalty_weight"] = *r.penalty_weight;
    }
    j["solution"] = r.solution ? json(*r.solution) : json(nullptr);
}

void to_json(json& j, const AlphaFit& f) {
    json table = json::array();
    for (const auto& [alpha, auc] : f.table) {
        table.push_back(json{{"alpha", alpha}, {"auc", auc}});
    }
    j = json{{"best_alpha", f.best_alpha}, {"best_auc", f.best_auc}, {"auc_kind", "binary"},
             {"table", std::move(table)}};
}

void to_json(json& j, const MethodRun& r) {
    j = json{{"method", r.method}, {"group", r.group},       {"seed", r.seed},
             {"eval", r.eval},     {"flagged", r.flagged},   {"wall_seconds", r.wall_seconds},
             {"parameters", r.parameters}};
    j["score_auc"] = r.score_auc ? json(*r.score_auc) : json(nullptr);
}

void to_json(json& j, const BenchmarkReport& r) {
    json summary = json::array();
    for (const SummaryRow& s : r.summary) {
        summary.push_back(json{{"group", s.group}, {"method", s.method}, {"mean_auc", s.mean_auc}, {"runs", s.runs}});
    }
    j = json{{"scenario", r.scenario}, {"seeds", r.seeds}, {"runs", r.runs}, {"summary", std::move(summary)}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw DataError("failed writing '" + path.string() + "'");
    }
}

} // namespace qad
