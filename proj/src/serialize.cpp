#include "serialize.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "error.hpp"

namespace bhset {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::Contract: return "contract";
    case ErrorCode::Io: return "io";
    case ErrorCode::Invariant: return "invariant";
    case ErrorCode::Divergent: return "divergent";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

namespace {

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json weights_json(const std::vector<std::uint32_t>& f) { return Json(f); }

}  // namespace

Json to_json(const SampledSet& set) {
  return {{"h", set.params.h()},
          {"N", set.params.window()},
          {"seed", set.params.seed()},
          {"elements", set.elements.vector()}};
}

Json to_json(const PowerFit& fit) {
  return {{"coefficient", optional_json(fit.coefficient)},
          {"exponent", optional_json(fit.exponent)},
          {"bins", fit.bins},
          {"residual_rms", fit.residual_rms}};
}

Json to_json(const BasisReport& r) {
  return {{"k", r.k},           {"lo", r.lo}, {"hi", r.hi}, {"last_zero", optional_json(r.last_zero)},
          {"coverage", r.coverage}, {"fit", to_json(r.fit)}};
}

Json to_json(const DecompositionAudit& a) {
  return {{"n", a.n}, {"lhs", a.lhs}, {"r1", a.r1}, {"r2", a.r2}, {"r3", a.r3}, {"holds", a.holds()}};
}

Json to_json(const AuditSummary& s) {
  return {{"max_n", s.max_n},   {"checked", s.checked}, {"violations", s.violations},
          {"first_violation", optional_json(s.first_violation)},
          {"max_lhs", s.max_lhs}, {"max_r1", s.max_r1}, {"max_r2", s.max_r2},
          {"max_r3", s.max_r3}};
}

Json to_json(const CollisionRecord& r) {
  return {{"kind", collision_kind_name(r.kind)},
          {"d", r.spec.d},
          {"e", r.spec.e},
          {"elements", r.elements},
          {"largest", r.largest}};
}

Json to_json(const ExperimentConfig& c) {
  Json tracked = Json::array();
  for (const auto& f : c.tracked) tracked.push_back(weights_json(f));
  return {{"h", c.h},
          {"N", c.N},
          {"seeds", c.seeds},
          {"basis_window", {c.basis_lo, c.basis_hi}},
          {"lemma5_lo", c.lemma5_lo},
          {"audit_max_n", c.audit_max_n},
          {"tracked", tracked}};
}

ExperimentConfig config_from_json(const Json& j) {
  try {
    ExperimentConfig c;
    c.h = j.at("h").get<int>();
    c.N = j.at("N").get<std::uint64_t>();
    c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("basis_window")) {
      const auto w = j.at("basis_window").get<std::vector<std::uint64_t>>();
      if (w.size() != 2) fail(ErrorCode::InvalidArgument, "basis_window must have two entries");
      c.basis_lo = w[0];
      c.basis_hi = w[1];
    }
    if (j.contains("lemma5_lo")) c.lemma5_lo = j.at("lemma5_lo").get<std::uint64_t>();
    if (j.contains("audit_max_n")) c.audit_max_n = j.at("audit_max_n").get<std::uint64_t>();
    if (j.contains("tracked")) c.tracked = j.at("tracked").get<std::vector<std::vector<std::uint32_t>>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("malformed config: ") + e.what());
  }
}

Json to_json(const SeedRecord& r) {
  Json weighted = Json::array();
  for (const auto& w : r.weighted)
    weighted.push_back({{"f", weights_json(w.f)}, {"max_count", w.max_count}, {"argmax", w.argmax}});
  return {{"seed", r.seed},
          {"size_B", r.size_B},
          {"size_C", r.size_C},
          {"size_A", r.size_A},
          {"collisions", {{"distinct_2h", r.collisions_distinct}, {"weighted", r.collisions_weighted}}},
          {"bh1", {{"holds", r.bhg.holds}, {"witness", optional_json(r.bhg.witness)},
                   {"window_limited", r.bhg.window_limited}}},
          {"basis_A", to_json(r.basis_A)},
          {"basis_B", to_json(r.basis_B)},
          {"lemma5", {{"min", r.lemma5_min}, {"argmin", r.lemma5_argmin}}},
          {"weighted_max", weighted},
          {"audit", to_json(r.audit)}};
}

Json to_json(const ExperimentReport& report) {
  Json records = Json::array();
  for (const auto& r : report.records) records.push_back(to_json(r));
  const auto& g = report.aggregate;
  return {{"schema_version", kSchemaVersion},
          {"kind", "construction"},
          {"config", to_json(report.config)},
          {"expected_size_B", report.expected_size_B},
          {"size_B_sd", report.size_B_sd},
          {"records", records},
          {"aggregate",
           {{"runs", g.runs},
            {"bh1_passes", g.bhg_passes},
            {"median_size_B", g.median_size_B},
            {"median_size_C", g.median_size_C},
            {"median_size_A", g.median_size_A},
            {"median_coverage_A", g.median_coverage_A},
            {"median_coverage_B", g.median_coverage_B},
            {"median_lemma5_min", g.median_lemma5_min},
            {"audit_violations", g.audit_violations},
            {"mean_fit_B", to_json(g.mean_fit_B)}}}};
}

Json to_json(const Lemma5Summary& s) {
  Json per_seed = Json::array();
  for (std::size_t i = 0; i < s.seeds.size(); ++i)
    per_seed.push_back({{"seed", s.seeds[i]}, {"min", s.minima[i]}, {"argmin", s.argmin[i]}});
  return {{"schema_version", kSchemaVersion},
          {"kind", "lemma5"},
          {"config", {{"h", s.h}, {"N", s.N}, {"n_lo", s.n_lo}, {"seeds", s.seeds}}},
          {"per_seed", per_seed},
          {"median", s.median},
          {"empirical_c", s.empirical_c()}};
}

Json to_json(const Lemma68Summary& s) {
  Json lemma6 = Json::array(), lemma8 = Json::array();
  for (const auto& f : s.lemma6_specs) lemma6.push_back(weights_json(f));
  for (const auto& spec : s.lemma8_specs) lemma8.push_back({{"d", spec.d}, {"e", spec.e}});
  Json windows = Json::array();
  for (const auto& w : s.per_window) {
    Json seeds = Json::array();
    for (std::size_t i = 0; i < s.seeds.size(); ++i)
      seeds.push_back({{"seed", s.seeds[i]},
                       {"lemma6_max", w.lemma6_max[i]},
                       {"lemma8_count", w.lemma8_count[i]},
                       {"lemma8_total", w.lemma8_total[i]}});
    windows.push_back({{"N", w.N},
                       {"per_seed", seeds},
                       {"lemma6_median", w.lemma6_median},
                       {"lemma8_median", w.lemma8_median},
                       {"lemma8_total_median", w.lemma8_total_median}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "lemma568"},
          {"config", {{"h", s.h}, {"windows", s.windows}, {"seeds", s.seeds}, {"lemma6_specs", lemma6},
                      {"lemma8_specs", lemma8}}},
          {"windows", windows}};
}

Json to_json(const lemma4::RatioCurve& curve, bool with_points) {
  const auto& p = curve.params;
  Json params = {{"part", lemma4::part_name(p.part)}};
  switch (p.part) {
    case lemma4::Part::I:
    case lemma4::Part::II:
      params["alpha"] = p.alpha;
      params["beta"] = p.beta;
      break;
    case lemma4::Part::III:
      params["l"] = p.l;
      params["h"] = p.h;
      break;
    case lemma4::Part::IV:
      params["s"] = p.s;
      params["t"] = p.t;
      params["h"] = p.h;
      break;
  }
  Json checks = Json::array();
  for (const auto& c : lemma4::stability(curve))
    checks.push_back({{"sign", c.sign},
                      {"ratio_at_anchor", c.ratio_at_anchor},
                      {"sup_beyond", c.sup_beyond},
                      {"argmax", c.argmax},
                      {"slope", c.slope},
                      {"bounded", c.bounded},
                      {"flat", c.flat}});
  Json j = {{"schema_version", kSchemaVersion},
            {"kind", "lemma4"},
            {"params", params},
            {"point_count", curve.points.size()},
            {"sup_ratio", curve.sup_ratio},
            {"argmax_M", curve.argmax_M},
            {"tail_error", curve.tail_error},
            {"limit_ratio", optional_json(curve.limit_ratio)},
            {"stability", checks}};
  if (with_points) {
    Json pts = Json::array();
    for (const auto& pt : curve.points) pts.push_back({pt.M, pt.lhs, pt.rhs, pt.ratio});
    j["points"] = pts;
  }
  return j;
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("invalid JSON: ") + e.what());
  }
}

std::string replay(const Json& report, unsigned threads) {
  try {
    if (report.value("schema_version", 0) != kSchemaVersion)
      fail(ErrorCode::InvalidArgument, "unsupported schema_version");
    const std::string kind = report.at("kind").get<std::string>();
    const Json& cfg = report.at("config");
    if (kind == "construction") {
      auto config = config_from_json(cfg);
      config.threads = threads;
      return canonical_dump(to_json(run_experiment(config)));
    }
    if (kind == "lemma5") {
      return canonical_dump(to_json(lemma5_check(cfg.at("h").get<int>(), cfg.at("N").get<std::uint64_t>(),
                                                 cfg.at("seeds").get<std::vector<std::uint64_t>>(),
                                                 cfg.at("n_lo").get<std::uint64_t>(), threads)));
    }
    if (kind == "lemma568") {
      std::vector<WeightSpec> specs;
      for (const auto& s : cfg.at("lemma8_specs"))
        specs.push_back({s.at("d").get<std::vector<std::uint32_t>>(), s.at("e").get<std::vector<std::uint32_t>>()});
      return canonical_dump(to_json(lemma6_8_check(
          cfg.at("h").get<int>(), cfg.at("windows").get<std::vector<std::uint64_t>>(),
          cfg.at("seeds").get<std::vector<std::uint64_t>>(),
          cfg.at("lemma6_specs").get<std::vector<std::vector<std::uint32_t>>>(), specs, threads)));
    }
    fail(ErrorCode::InvalidArgument, "report kind '" + kind + "' cannot be replayed");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("malformed report: ") + e.what());
  }
}

void write_collisions_jsonl(std::ostream& out, const std::vector<CollisionRecord>& records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
  if (!out) fail(ErrorCode::Io, "failed to write collision records");
}

void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows) {
  out << "n,R_2h_B,R_2h_A\n";
  for (const auto& r : rows) out << r.n << ',' << r.count_B << ',' << r.count_A << '\n';
  if (!out) fail(ErrorCode::Io, "failed to write series");
}

void write_ratio_csv(std::ostream& out, const lemma4::RatioCurve& curve) {
  out << "M,lhs,rhs,ratio\n" << std::setprecision(17);
  for (const auto& p : curve.points) out << p.M << ',' << p.lhs << ',' << p.rhs << ',' << p.ratio << '\n';
  if (!out) fail(ErrorCode::Io, "failed to write ratio curve");
}

}  // namespace bhset
