#include "bhset/bhset.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "collision.hpp"
#include "error.hpp"
#include "harness.hpp"
#include "lemma4.hpp"
#include "random_model.hpp"
#include "repr_engine.hpp"
#include "serialize.hpp"
#include "verifier.hpp"

struct bhs_set {
  bhset::IntSet value;
};

struct bhs_table {
  bhset::ReprTable value;
};

namespace {

thread_local std::string last_error;

bhs_status status_of(bhset::ErrorCode code) {
  return static_cast<bhs_status>(static_cast<int>(code));
}

template <typename F>
bhs_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return BHS_OK;
  } catch (const bhset::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BHS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BHS_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) bhset::fail(bhset::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void store(char** out, const std::string& s) {
  need(out, "output");
  *out = dup_string(s);
}

bhs_table* wrap(bhset::ReprTable t) { return new bhs_table{std::move(t)}; }

std::ofstream open_out(const char* path, bool binary = false) {
  need(path, "path");
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) bhset::fail(bhset::ErrorCode::Io, std::string("cannot open ") + path);
  return f;
}

}  // namespace

extern "C" {

const char* bhs_last_error(void) { return last_error.c_str(); }

const char* bhs_status_name(bhs_status status) {
  if (status == BHS_OK) return "ok";
  return bhset::error_code_name(static_cast<bhset::ErrorCode>(status));
}

const char* bhs_version(void) { return "0.1.0"; }

void bhs_string_free(char* text) { std::free(text); }

bhs_status bhs_inclusion_probability(uint64_t n, int h, double* out) {
  return guard([&] {
    need(out, "out");
    *out = bhset::inclusion_probability(n, h);
  });
}

bhs_status bhs_expected_count(int h, uint64_t lo, uint64_t hi, double* out) {
  return guard([&] {
    need(out, "out");
    bhset::validate_order(h);
    *out = bhset::expected_count(h, lo, hi);
  });
}

bhs_status bhs_sample(int h, uint64_t n_max, uint64_t seed, bhs_set** out) {
  return guard([&] {
    need(out, "out");
    *out = new bhs_set{bhset::sample_set(bhset::ModelParams(h, n_max, seed)).elements};
  });
}

bhs_status bhs_set_from_array(const uint64_t* values, size_t count, bhs_set** out) {
  return guard([&] {
    need(out, "out");
    if (count > 0) need(values, "values");
    std::vector<bhset::Element> v(values, values + count);
    *out = new bhs_set{bhset::IntSet::from_unsorted(std::move(v))};
  });
}

size_t bhs_set_size(const bhs_set* set) { return set ? set->value.size() : 0; }

size_t bhs_set_elements(const bhs_set* set, uint64_t* values, size_t capacity) {
  if (!set || !values) return 0;
  const size_t n = std::min(capacity, set->value.size());
  for (size_t i = 0; i < n; ++i) values[i] = set->value[i];
  return n;
}

void bhs_set_free(bhs_set* set) { delete set; }

bhs_status bhs_set_to_json(const bhs_set* set, int h, uint64_t n_max, uint64_t seed, char** json) {
  return guard([&] {
    need(set, "set");
    const bhset::SampledSet s{bhset::ModelParams(h, n_max, seed), set->value};
    store(json, bhset::canonical_dump(bhset::to_json(s)));
  });
}

bhs_status bhs_repr_multiset(const bhs_set* a, int h, uint64_t max_n, bhs_table** out) {
  return guard([&] {
    need(a, "set");
    need(out, "out");
    *out = wrap(bhset::repr_multiset(a->value, h, max_n));
  });
}

bhs_status bhs_repr_strict(const bhs_set* a, int k, uint64_t max_n, bhs_table** out) {
  return guard([&] {
    need(a, "set");
    need(out, "out");
    *out = wrap(bhset::repr_strict(a->value, k, max_n));
  });
}

bhs_status bhs_repr_weighted(const bhs_set* d, const uint32_t* weights, size_t count, uint64_t max_m,
                             bhs_table** out) {
  return guard([&] {
    need(d, "set");
    need(weights, "weights");
    need(out, "out");
    *out = wrap(bhset::repr_weighted(d->value, std::span<const std::uint32_t>(weights, count), max_m));
  });
}

uint64_t bhs_table_max_n(const bhs_table* table) { return table ? table->value.max_n() : 0; }

const uint64_t* bhs_table_counts(const bhs_table* table) { return table ? table->value.counts().data() : nullptr; }

bhs_status bhs_table_write_csv(const bhs_table* table, const char* path) {
  return guard([&] {
    need(table, "table");
    auto f = open_out(path);
    bhset::write_csv(f, table->value);
  });
}

bhs_status bhs_table_write_binary(const bhs_table* table, const char* path) {
  return guard([&] {
    need(table, "table");
    auto f = open_out(path, true);
    bhset::write_binary(f, table->value);
  });
}

bhs_status bhs_table_read_binary(const char* path, bhs_table** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    std::ifstream f(path, std::ios::binary);
    if (!f) bhset::fail(bhset::ErrorCode::Io, std::string("cannot open ") + path);
    *out = wrap(bhset::read_binary(f));
  });
}

void bhs_table_free(bhs_table* table) { delete table; }

bhs_status bhs_deletion_set(const bhs_set* b, int h, bhs_set** out) {
  return guard([&] {
    need(b, "set");
    need(out, "out");
    *out = new bhs_set{bhset::deletion_set(b->value, h)};
  });
}

bhs_status bhs_construct_a(const bhs_set* b, int h, bhs_set** out) {
  return guard([&] {
    need(b, "set");
    need(out, "out");
    *out = new bhs_set{bhset::construct_A(b->value, h)};
  });
}

bhs_status bhs_collisions_jsonl(const bhs_set* b, int h, char** jsonl) {
  return guard([&] {
    need(b, "set");
    std::ostringstream os;
    bhset::write_collisions_jsonl(os, bhset::enumerate_collisions(b->value, h));
    store(jsonl, os.str());
  });
}

bhs_status bhs_is_bhg(const bhs_set* a, int h, uint64_t g, uint64_t max_n, int* holds, uint64_t* witness,
                      int* window_limited) {
  return guard([&] {
    need(a, "set");
    need(holds, "holds");
    const auto r = bhset::is_bhg(a->value, h, g, max_n);
    *holds = r.holds ? 1 : 0;
    if (witness) *witness = r.witness.value_or(0);
    if (window_limited) *window_limited = r.window_limited ? 1 : 0;
  });
}

bhs_status bhs_basis_window(const bhs_set* a, int k, uint64_t lo, uint64_t hi, char** json) {
  return guard([&] {
    need(a, "set");
    store(json, bhset::canonical_dump(bhset::to_json(bhset::basis_window(a->value, k, lo, hi))));
  });
}

bhs_status bhs_audit(const bhs_set* b, int h, uint64_t max_n, int brute_force, char** json) {
  return guard([&] {
    need(b, "set");
    const auto records = bhset::enumerate_collisions(b->value, h);
    const auto audits = brute_force ? bhset::decomposition_audit_all(b->value, records, h, max_n)
                                    : bhset::decomposition_audit_tables(b->value, records, h, max_n);
    bhset::Json j = bhset::to_json(bhset::summarize(audits));
    j["route"] = brute_force ? "brute_force" : "tables";
    j["deleted"] = bhset::deletion_set(records).vector();
    store(json, bhset::canonical_dump(j));
  });
}

bhs_status bhs_run_experiment(const char* config_json, unsigned threads, char** report_json) {
  return guard([&] {
    need(config_json, "config");
    auto config = bhset::config_from_json(bhset::parse_json(config_json));
    config.threads = threads;
    store(report_json, bhset::canonical_dump(bhset::to_json(bhset::run_experiment(config))));
  });
}

bhs_status bhs_series_csv(int h, uint64_t n_max, uint64_t seed, uint64_t lo, uint64_t hi, const char* path) {
  return guard([&] {
    const auto rows = bhset::construction_series(h, n_max, seed, lo, hi);
    auto f = open_out(path);
    bhset::write_series_csv(f, rows);
  });
}

bhs_status bhs_lemma5(int h, uint64_t n_max, const uint64_t* seeds, size_t seed_count, uint64_t n_lo,
                      unsigned threads, char** report_json) {
  return guard([&] {
    if (seed_count > 0) need(seeds, "seeds");
    std::vector<std::uint64_t> s(seeds, seeds + seed_count);
    store(report_json, bhset::canonical_dump(bhset::to_json(bhset::lemma5_check(h, n_max, s, n_lo, threads))));
  });
}

bhs_status bhs_lemma568(int h, const uint64_t* windows, size_t window_count, const uint64_t* seeds,
                        size_t seed_count, const char* specs_json, unsigned threads, char** report_json) {
  return guard([&] {
    if (window_count > 0) need(windows, "windows");
    if (seed_count > 0) need(seeds, "seeds");
    std::vector<std::vector<std::uint32_t>> lemma6;
    std::vector<bhset::WeightSpec> lemma8;
    if (specs_json && *specs_json) {
      const auto j = bhset::parse_json(specs_json);
      try {
        if (j.contains("lemma6")) lemma6 = j.at("lemma6").get<std::vector<std::vector<std::uint32_t>>>();
        if (j.contains("lemma8"))
          for (const auto& s : j.at("lemma8"))
            lemma8.push_back({s.at("d").get<std::vector<std::uint32_t>>(), s.at("e").get<std::vector<std::uint32_t>>()});
      } catch (const nlohmann::json::exception& e) {
        bhset::fail(bhset::ErrorCode::InvalidArgument, std::string("malformed specs: ") + e.what());
      }
    }
    const auto summary = bhset::lemma6_8_check(h, std::vector<std::uint64_t>(windows, windows + window_count),
                                               std::vector<std::uint64_t>(seeds, seeds + seed_count), lemma6,
                                               lemma8, threads);
    store(report_json, bhset::canonical_dump(bhset::to_json(summary)));
  });
}

bhs_status bhs_lemma4(const char* part, double alpha, double beta, int l, int s, int t, int h, int64_t m_lo,
                      int64_t m_hi, double tail_eps, int with_points, const char* csv_path, char** report_json) {
  namespace l4 = bhset::lemma4;
  return guard([&] {
    need(part, "part");
    l4::RatioCurve curve;
    switch (l4::parse_part(part)) {
      case l4::Part::I: curve = l4::part_i(alpha, beta, m_hi); break;
      case l4::Part::II: curve = l4::part_ii(alpha, beta, m_lo, m_hi, tail_eps); break;
      case l4::Part::III: curve = l4::part_iii(l, h, m_hi); break;
      case l4::Part::IV: curve = l4::part_iv(s, t, h, m_lo, m_hi, tail_eps); break;
    }
    if (csv_path) {
      auto f = open_out(csv_path);
      bhset::write_ratio_csv(f, curve);
    }
    store(report_json, bhset::canonical_dump(bhset::to_json(curve, with_points != 0)));
  });
}

bhs_status bhs_replay(const char* report_json, unsigned threads, char** fresh_json, int* identical) {
  return guard([&] {
    need(report_json, "report");
    need(identical, "identical");
    const std::string fresh = bhset::replay(bhset::parse_json(report_json), threads);
    *identical = fresh == report_json ? 1 : 0;
    store(fresh_json, fresh);
  });
}

}  // extern "C"
