#ifndef ONTORESHAPE_H
#define ONTORESHAPE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum OrStatus {
  OR_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  OR_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  OR_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed input text.
   */
  OR_STATUS_PARSE = 3,
  /**
   * Well-formed input that is inconsistent or unusable.
   */
  OR_STATUS_VALIDATION = 4,
  /**
   * The file system failed.
   */
  OR_STATUS_IO = 5,
  /**
   * The library panicked; the call had no effect.
   */
  OR_STATUS_PANIC = 6,
} OrStatus;

typedef struct OrDataset OrDataset;

typedef struct OrGraph OrGraph;

typedef struct OrMappings OrMappings;

typedef struct OrOntology OrOntology;

typedef struct OrSchema OrSchema;

typedef struct OrUserInfo OrUserInfo;

/**
 * Metrics of a generated graph. Time is not measured here and is always 0.
 */
typedef struct OrMetrics {
  double data_coverage;
  double time_cost_ms;
  uint64_t storage_bytes;
  uint64_t class_count;
  uint64_t object_prop_count;
  uint64_t data_prop_count;
  uint64_t entity_count;
  uint64_t dummy_count;
  uint64_t root_to_leaf_depth;
  uint64_t global_depth;
} OrMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a success.
 * Valid until the next call on the same thread.
 */
const char *or_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *or_version(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void or_string_free(char *s);

/**
 * Parses an ontology in OSF form.
 *
 * # Safety
 * `osf` must be a NUL-terminated string; `out` must be writable.
 */
enum OrStatus or_ontology_parse(const char *osf, struct OrOntology **out);

/**
 * # Safety
 * `p` must be null or a live handle from this library.
 */
void or_ontology_free(struct OrOntology *p);

/**
 * Parses a mapping set in `kind,table,attribute,class` CSV form.
 *
 * # Safety
 * `csv` must be a NUL-terminated string; `out` must be writable.
 */
enum OrStatus or_mappings_parse(const char *csv, struct OrMappings **out);

/**
 * # Safety
 * `p` must be null or a live handle from this library.
 */
void or_mappings_free(struct OrMappings *p);

/**
 * Parses user information JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum OrStatus or_userinfo_parse(const char *json, struct OrUserInfo **out);

/**
 * # Safety
 * `p` must be null or a live handle from this library.
 */
void or_userinfo_free(struct OrUserInfo *p);

/**
 * Loads every `<table>.csv` in `dir`.
 *
 * # Safety
 * `dir` and `main_table` must be NUL-terminated strings; `out` must be writable.
 */
enum OrStatus or_dataset_load(const char *dir, const char *main_table, struct OrDataset **out);

/**
 * # Safety
 * `p` must be null or a live handle from this library.
 */
void or_dataset_free(struct OrDataset *p);

/**
 * Derives the reshaped KG schema.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum OrStatus or_reshape(const struct OrOntology *onto,
                         const struct OrDataset *data,
                         const struct OrMappings *mappings,
                         const struct OrUserInfo *user,
                         bool include_unmapped,
                         struct OrSchema **out);

/**
 * Derives the baseline schema: mapped classes plus their ontology connectors.
 *
 * # Safety
 * Handles must be live; `main_class` must be a NUL-terminated string; `out`
 * must be writable.
 */
enum OrStatus or_baseline(const struct OrOntology *onto,
                          const struct OrDataset *data,
                          const struct OrMappings *mappings,
                          const char *main_class,
                          bool include_unmapped,
                          struct OrSchema **out);

/**
 * Parses a schema in the text form written by [`or_schema_serialize`].
 *
 * # Safety
 * `s` must be a NUL-terminated string; `out` must be writable.
 */
enum OrStatus or_schema_parse(const char *s, struct OrSchema **out);

/**
 * # Safety
 * `schema` must be live; `out` must be writable. Free the result with
 * [`or_string_free`].
 */
enum OrStatus or_schema_serialize(const struct OrSchema *schema, char **out);

/**
 * # Safety
 * `p` must be null or a live handle from this library.
 */
void or_schema_free(struct OrSchema *p);

/**
 * Materializes `schema` over `data`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum OrStatus or_generate_kg(const struct OrSchema *schema,
                             const struct OrDataset *data,
                             const struct OrMappings *mappings,
                             struct OrGraph **out);

/**
 * Serializes a graph as N-Triples. A null `base_iri` selects the default.
 *
 * # Safety
 * `graph` must be live; `base_iri` null or NUL-terminated; `out` writable.
 * Free the result with [`or_string_free`].
 */
enum OrStatus or_graph_to_ntriples(const struct OrGraph *graph, const char *base_iri, char **out);

/**
 * # Safety
 * `p` must be null or a live handle from this library.
 */
void or_graph_free(struct OrGraph *p);

/**
 * Evaluates a graph; storage is the size of its default N-Triples form.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum OrStatus or_metrics(const struct OrGraph *graph,
                         const struct OrSchema *schema,
                         const struct OrDataset *data,
                         struct OrMetrics *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ONTORESHAPE_H */
