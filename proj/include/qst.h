#ifndef QST_H
#define QST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QST_API __declspec(dllexport)
#else
#define QST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    QST_OK = 0,
    QST_VALIDATION_ERROR = 1,
    QST_RESOURCE_ERROR = 2,
    QST_INTERNAL_ERROR = 3
} qst_status;

typedef enum {
    QST_ROUTE_MATRIX = 0,
    QST_ROUTE_PATHS = 1,
    QST_ROUTE_CLOSED_FORM = 2,
    QST_ROUTE_INSERTION = 3
} qst_route;

typedef enum {
    QST_WALKS_COMPLETE = 0,
    QST_WALKS_COMPLETE_SELF_LOOPED = 1,
    QST_WALKS_UNIFORM = 2
} qst_walk_kind;

typedef struct qst_quiver qst_quiver;
typedef struct qst_networks qst_networks;
typedef struct qst_rep qst_rep;

/* Message of the last failed call on this thread; empty after success. */
QST_API const char* qst_last_error(void);
QST_API const char* qst_version(void);
/* Releases strings returned through char** out parameters. */
QST_API void qst_string_free(char* s);

QST_API qst_status qst_quiver_from_spec(const char* spec, qst_quiver** out);
QST_API qst_status qst_quiver_from_json(const char* text, qst_quiver** out);
QST_API qst_status qst_quiver_to_json(const qst_quiver* q, char** out);
QST_API qst_status qst_quiver_augment(const qst_quiver* q, qst_quiver** out);
QST_API qst_status qst_quiver_add_self_loops(const qst_quiver* q, qst_quiver** out);
QST_API int qst_quiver_vertex_count(const qst_quiver* q);
QST_API int qst_quiver_edge_count(const qst_quiver* q);
/* base < 0 counts loops at every vertex. A negative limit selects the default loop-length budget. */
QST_API qst_status qst_quiver_count_loops(const qst_quiver* q, int k, int base, int limit, uint64_t* out);
QST_API void qst_quiver_free(qst_quiver* q);

QST_API qst_status qst_networks_enumerate(const qst_quiver* q, int N, int full_matrix_only, size_t max_networks,
                                          qst_networks** out);
/* Exact number of networks without materializing them, as a decimal string. */
QST_API qst_status qst_networks_count(const qst_quiver* q, int N, int full_matrix_only, char** out);
QST_API qst_status qst_networks_from_json(const char* text, qst_networks** out);
QST_API size_t qst_networks_size(const qst_networks* nets);
/* {"quiver", "N", "count", "bound", "within_bound", "networks":[{network, rep_space, within_bound, gauge_group}...]} */
QST_API qst_status qst_networks_to_json(const qst_quiver* q, const qst_networks* nets, int N, char** out);
QST_API void qst_networks_free(qst_networks* nets);

QST_API qst_status qst_rep_random(const qst_quiver* q, const qst_networks* nets, size_t index, uint64_t seed,
                                  qst_rep** out);
QST_API qst_status qst_rep_from_json(const char* text, qst_rep** out);
QST_API qst_status qst_rep_to_json(const qst_rep* rep, char** out);
QST_API qst_status qst_rep_gauge_random(const qst_rep* rep, uint64_t seed, qst_rep** out);
QST_API int qst_rep_dimension(const qst_rep* rep);
QST_API void qst_rep_free(qst_rep* rep);

QST_API qst_status qst_trace_power(const qst_rep* rep, int k, qst_route route, int limit, double* out);
/* f given as "f0 + f1*x + ... + fK*x^K", evaluated on D / scale. */
QST_API qst_status qst_spectral_action(const qst_rep* rep, const char* f, double scale, qst_route route, int limit,
                                       double* out);
QST_API qst_status qst_closed_form_json(const qst_rep* rep, int k, char** out);
QST_API qst_status qst_spectral_action_closed_form_json(const qst_rep* rep, const char* f, double a, char** out);
/* Writes up to cap eigenvalues of D in ascending order; n receives the dimension. */
QST_API qst_status qst_dirac_spectrum(const qst_rep* rep, double* values, size_t cap, size_t* n);
QST_API qst_status qst_d6_json(const qst_rep* rep, char** out);
QST_API qst_status qst_verify_json(const qst_rep* rep, uint64_t seed, int max_k, char** out);

/* Exact integers are returned as decimal strings. */
QST_API qst_status qst_coordination(int d, int k, char** out);
QST_API qst_status qst_coordination_bfs(int d, int m, int kmax, long long* values);
QST_API qst_status qst_loop_count_lattice(int d, int k, char** out);
QST_API qst_status qst_closed_walks(qst_walk_kind kind, int n, int lambda, int nu, int l, char** out);
QST_API qst_status qst_closed_walk_bounds_json(const qst_quiver* q, int l, char** out);
QST_API qst_status qst_d6_census_json(int d, char** out);

QST_API qst_status qst_mc_partition_json(const qst_quiver* q, int N, const char* f, double scale, size_t samples,
                                         uint64_t seed, int threads, int full_matrix_only, char** out);
/* loop: edge ids of the augmented quiver. */
QST_API qst_status qst_mc_wilson_json(const qst_quiver* q, int N, const int* loop, size_t length, const char* f,
                                      double scale, int weighted, size_t samples, uint64_t seed, int threads,
                                      int full_matrix_only, char** out);
QST_API qst_status qst_curvature_json(int d, int m, int N, double a, uint64_t seed, char** out);

#ifdef __cplusplus
}
#endif

#endif
