/* bhset: random B_h[1]-set construction and verification. */
#ifndef BHSET_BHSET_H
#define BHSET_BHSET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef BHSET_BUILDING_LIBRARY
#    define BHS_API __declspec(dllexport)
#  else
#    define BHS_API __declspec(dllimport)
#  endif
#else
#  define BHS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bhs_status {
  BHS_OK = 0,
  BHS_ERR_INVALID_ARGUMENT = 1,
  BHS_ERR_DOMAIN = 2,
  BHS_ERR_OVERFLOW = 3,
  BHS_ERR_CONTRACT = 4,
  BHS_ERR_IO = 5,
  BHS_ERR_INVARIANT = 6,
  BHS_ERR_DIVERGENT = 7,
  BHS_ERR_INTERNAL = 8
} bhs_status;

typedef struct bhs_set bhs_set;
typedef struct bhs_table bhs_table;

/* Message of the last failing call on this thread; never NULL. */
BHS_API const char* bhs_last_error(void);
BHS_API const char* bhs_status_name(bhs_status status);
BHS_API const char* bhs_version(void);

/* Strings returned through char** are owned by the caller. */
BHS_API void bhs_string_free(char* text);

/* ---- random model ---- */
BHS_API bhs_status bhs_inclusion_probability(uint64_t n, int h, double* out);
BHS_API bhs_status bhs_expected_count(int h, uint64_t lo, uint64_t hi, double* out);
BHS_API bhs_status bhs_sample(int h, uint64_t n_max, uint64_t seed, bhs_set** out);

/* ---- sets ---- */
BHS_API bhs_status bhs_set_from_array(const uint64_t* values, size_t count, bhs_set** out);
BHS_API size_t bhs_set_size(const bhs_set* set);
/* Copies min(capacity, size) ascending elements into values. */
BHS_API size_t bhs_set_elements(const bhs_set* set, uint64_t* values, size_t capacity);
BHS_API void bhs_set_free(bhs_set* set);
BHS_API bhs_status bhs_set_to_json(const bhs_set* set, int h, uint64_t n_max, uint64_t seed, char** json);

/* ---- representation tables ---- */
BHS_API bhs_status bhs_repr_multiset(const bhs_set* a, int h, uint64_t max_n, bhs_table** out);
BHS_API bhs_status bhs_repr_strict(const bhs_set* a, int k, uint64_t max_n, bhs_table** out);
BHS_API bhs_status bhs_repr_weighted(const bhs_set* d, const uint32_t* weights, size_t count, uint64_t max_m,
                                     bhs_table** out);
BHS_API uint64_t bhs_table_max_n(const bhs_table* table);
BHS_API const uint64_t* bhs_table_counts(const bhs_table* table);
BHS_API bhs_status bhs_table_write_csv(const bhs_table* table, const char* path);
BHS_API bhs_status bhs_table_write_binary(const bhs_table* table, const char* path);
BHS_API bhs_status bhs_table_read_binary(const char* path, bhs_table** out);
BHS_API void bhs_table_free(bhs_table* table);

/* ---- deletion set ---- */
BHS_API bhs_status bhs_deletion_set(const bhs_set* b, int h, bhs_set** out);
BHS_API bhs_status bhs_construct_a(const bhs_set* b, int h, bhs_set** out);
/* One JSON object per line: {kind, d, e, elements, largest}. */
BHS_API bhs_status bhs_collisions_jsonl(const bhs_set* b, int h, char** jsonl);

/* ---- verification ---- */
/* witness is 0 when the set passes; window_limited may be NULL. */
BHS_API bhs_status bhs_is_bhg(const bhs_set* a, int h, uint64_t g, uint64_t max_n, int* holds, uint64_t* witness,
                              int* window_limited);
BHS_API bhs_status bhs_basis_window(const bhs_set* a, int k, uint64_t lo, uint64_t hi, char** json);
BHS_API bhs_status bhs_audit(const bhs_set* b, int h, uint64_t max_n, int brute_force, char** json);

/* ---- experiments (JSON in, JSON out) ---- */
/* config: {"h", "N", "seeds", optional "basis_window", "lemma5_lo",
   "audit_max_n", "tracked"}. */
BHS_API bhs_status bhs_run_experiment(const char* config_json, unsigned threads, char** report_json);
BHS_API bhs_status bhs_series_csv(int h, uint64_t n_max, uint64_t seed, uint64_t lo, uint64_t hi, const char* path);
BHS_API bhs_status bhs_lemma5(int h, uint64_t n_max, const uint64_t* seeds, size_t seed_count, uint64_t n_lo,
                              unsigned threads, char** report_json);
/* specs_json: {"lemma6": [[f...]...], "lemma8": [{"d": [...], "e": [...]}...]};
   NULL or empty lists select the generated families. */
BHS_API bhs_status bhs_lemma568(int h, const uint64_t* windows, size_t window_count, const uint64_t* seeds,
                                size_t seed_count, const char* specs_json, unsigned threads, char** report_json);
/* part: "i", "ii", "iii" or "iv". Unused parameters are ignored.
   csv_path may be NULL; otherwise the curve is also written there. */
BHS_API bhs_status bhs_lemma4(const char* part, double alpha, double beta, int l, int s, int t, int h, int64_t m_lo,
                              int64_t m_hi, double tail_eps, int with_points, const char* csv_path,
                              char** report_json);
/* Re-runs a report and stores the fresh canonical text; *identical tells
   whether it matches the input byte for byte. */
BHS_API bhs_status bhs_replay(const char* report_json, unsigned threads, char** fresh_json, int* identical);

#ifdef __cplusplus
}
#endif

#endif
