#include <doctest.h>

#include <bhset/bhset.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

TEST_CASE("status codes and errors") {
  double p = 0;
  CHECK(bhs_inclusion_probability(128, 2, &p) == BHS_OK);
  CHECK(p == doctest::Approx(0.03125).epsilon(1e-15));
  CHECK(bhs_inclusion_probability(0, 2, &p) == BHS_ERR_DOMAIN);
  CHECK(std::strlen(bhs_last_error()) > 0);
  CHECK(std::string(bhs_status_name(BHS_ERR_DOMAIN)) == "domain");
  bhs_set* s = nullptr;
  CHECK(bhs_sample(1, 10, 0, &s) == BHS_ERR_INVALID_ARGUMENT);
  CHECK(s == nullptr);
  CHECK(bhs_inclusion_probability(3, 2, nullptr) == BHS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("sets and tables") {
  const uint64_t values[] = {3, 1, 2, 2};
  bhs_set* a = nullptr;
  REQUIRE(bhs_set_from_array(values, 4, &a) == BHS_OK);
  CHECK(bhs_set_size(a) == 3);
  bhs_table* t = nullptr;
  REQUIRE(bhs_repr_multiset(a, 2, 6, &t) == BHS_OK);
  CHECK(bhs_table_max_n(t) == 6);
  CHECK(bhs_table_counts(t)[4] == 2);
  bhs_table_free(t);

  int holds = 1;
  uint64_t witness = 0;
  REQUIRE(bhs_is_bhg(a, 2, 1, 6, &holds, &witness, nullptr) == BHS_OK);
  CHECK(holds == 0);
  CHECK(witness == 4);

  bhs_set* c = nullptr;
  REQUIRE(bhs_deletion_set(a, 2, &c) == BHS_OK);
  std::vector<uint64_t> got(bhs_set_size(c));
  bhs_set_elements(c, got.data(), got.size());
  CHECK(got == std::vector<uint64_t>{3});
  bhs_set_free(c);

  char* lines = nullptr;
  REQUIRE(bhs_collisions_jsonl(a, 2, &lines) == BHS_OK);
  CHECK(std::string(lines).find("\"largest\":3") != std::string::npos);
  bhs_string_free(lines);
  bhs_set_free(a);
}

TEST_CASE("experiment round trip") {
  char* report = nullptr;
  REQUIRE(bhs_run_experiment("{\"h\": 2, \"N\": 2000, \"seeds\": [1, 2]}", 1, &report) == BHS_OK);
  char* fresh = nullptr;
  int identical = 0;
  REQUIRE(bhs_replay(report, 1, &fresh, &identical) == BHS_OK);
  CHECK(identical == 1);
  bhs_string_free(fresh);
  bhs_string_free(report);
  CHECK(bhs_run_experiment("{\"h\": 2}", 1, &report) == BHS_ERR_INVALID_ARGUMENT);
  CHECK(bhs_run_experiment("not json", 1, &report) == BHS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("lemma 4 through the C API") {
  char* out = nullptr;
  REQUIRE(bhs_lemma4("iii", 0, 0, 2, 0, 0, 2, 0, 100, 1e-6, 1, nullptr, &out) == BHS_OK);
  CHECK(std::string(out).find("\"part\": \"iii\"") != std::string::npos);
  bhs_string_free(out);
  CHECK(bhs_lemma4("iv", 0, 0, 0, 1, 4, 2, -10, 10, 1e-6, 0, nullptr, &out) == BHS_ERR_DIVERGENT);
  CHECK(bhs_lemma4("v", 0, 0, 0, 1, 4, 2, -10, 10, 1e-6, 0, nullptr, &out) == BHS_ERR_INVALID_ARGUMENT);
}
