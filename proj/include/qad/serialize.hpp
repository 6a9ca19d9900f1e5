#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qad/bench.hpp"
#include "qad/detector.hpp"
#include "qad/eval.hpp"
#include "qad/qubo.hpp"
#include "qad/solver.hpp"

namespace qad {

// QUBO interchange: {"n": int, "sense": "max", "terms": [[i, j, coeff], ...]} with i <= j.
nlohmann::json qubo_to_json(const Qubo& q);

// Throws DataError naming the offending term index on malformed input.
Qubo qubo_from_json(const nlohmann::json& doc);

void to_json(nlohmann::json& j, const Solution& s);
void to_json(nlohmann::json& j, const SaConfig& c);
void to_json(nlohmann::json& j, const DetectorConfig& c);
void to_json(nlohmann::json& j, const EvalReport& r);
void to_json(nlohmann::json& j, const DetectionResult& r);
void to_json(nlohmann::json& j, const AlphaFit& f);
void to_json(nlohmann::json& j, const MethodRun& r);
void to_json(nlohmann::json& j, const BenchmarkReport& r);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace qad
