#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "collision.hpp"
#include "harness.hpp"
#include "lemma4.hpp"
#include "random_model.hpp"
#include "verifier.hpp"

namespace bhset {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

Json to_json(const SampledSet& set);
Json to_json(const BasisReport& report);
Json to_json(const PowerFit& fit);
Json to_json(const DecompositionAudit& audit);
Json to_json(const AuditSummary& summary);
Json to_json(const CollisionRecord& record);
Json to_json(const ExperimentConfig& config);
Json to_json(const SeedRecord& record);
Json to_json(const ExperimentReport& report);
Json to_json(const Lemma5Summary& summary);
Json to_json(const Lemma68Summary& summary);
Json to_json(const lemma4::RatioCurve& curve, bool with_points);

ExperimentConfig config_from_json(const Json& j);

/// Two-space indented JSON with sorted keys and a trailing newline.
std::string canonical_dump(const Json& j);
Json parse_json(const std::string& text);

/// Re-runs the experiment described by a report and returns the fresh
/// canonical text. Supports kinds "construction", "lemma5" and "lemma568".
std::string replay(const Json& report, unsigned threads = 0);

// One JSON object per line: {kind, d, e, elements, largest}.
void write_collisions_jsonl(std::ostream& out, const std::vector<CollisionRecord>& records);
// Header "n,R_2h_B,R_2h_A".
void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows);
// Header "M,lhs,rhs,ratio".
void write_ratio_csv(std::ostream& out, const lemma4::RatioCurve& curve);

}  // namespace bhset
