#ifndef RLP_RLP_H
#define RLP_RLP_H

#include <stddef.h>
#include <stdint.h>

#if defined(RLP_BUILDING_LIBRARY)
#define RLP_API __attribute__((visibility("default")))
#else
#define RLP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure rlp_last_error() holds a
 * message for the calling thread. Output paths of NULL or "-" mean stdout. */
typedef enum rlp_status {
  RLP_OK = 0,
  RLP_ERR_DOMAIN = 1,          /* argument outside the documented domain */
  RLP_ERR_INVARIANT = 2,       /* internal consistency check failed */
  RLP_ERR_NOT_REACHED = 3,     /* level never exceeded within the horizon */
  RLP_ERR_BUDGET = 4,          /* per-draw simulation budget exhausted */
  RLP_ERR_DEGENERATE = 5,      /* importance weights collapsed */
  RLP_ERR_TRUNCATION = 6,      /* truncation box captures too little mass */
  RLP_ERR_TRUNCATED_SHIFT = 7, /* window too shallow for the level shift */
  RLP_ERR_IO = 8,
  RLP_ERR_NULL = 9,            /* required pointer argument was NULL */
  RLP_ERR_INTERNAL = 10
} rlp_status;

RLP_API const char* rlp_version(void);
RLP_API const char* rlp_status_string(rlp_status s);
RLP_API const char* rlp_last_error(void);

/* exp(-pi/sqrt(3)) */
RLP_API double rlp_critical_elasticity(void);

/* Step law of the log-velocity walk. */
RLP_API rlp_status rlp_step_density(double c, double w, double* out);
RLP_API rlp_status rlp_step_cdf(double c, double w, double* out);
RLP_API rlp_status rlp_step_quantile(double c, double p, double* out);

/* n normalized arches as CSV "duration,log_step". */
RLP_API rlp_status rlp_arch_write_csv(uint64_t seed, double c, uint64_t n, const char* path);

/* Bounce skeleton ---------------------------------------------------------- */

typedef struct rlp_skeleton rlp_skeleton;

typedef enum rlp_verdict {
  RLP_CONVERGENT = 0,
  RLP_DIVERGENT = 1,
  RLP_INCONCLUSIVE = 2
} rlp_verdict;

typedef struct rlp_accumulation {
  uint64_t n;
  double log_zeta_n;
  double tail_ratio; /* (zeta_N - zeta_{N/2}) / zeta_{N/2} */
  double log_growth; /* log(zeta_N / zeta_{N/10}) */
  rlp_verdict verdict;
} rlp_accumulation;

/* n arches from a bounce with outgoing speed u0. */
RLP_API rlp_status rlp_skeleton_new(uint64_t seed, double c, double u0, uint64_t n,
                                    rlp_skeleton** out);
RLP_API void rlp_skeleton_free(rlp_skeleton* sk);
RLP_API rlp_status rlp_skeleton_size(const rlp_skeleton* sk, uint64_t* out);
/* Needs at least 101 bounces. */
RLP_API rlp_status rlp_skeleton_accumulation(const rlp_skeleton* sk, rlp_accumulation* out);
/* CSV "n,zeta_n,S_n". */
RLP_API rlp_status rlp_skeleton_write_csv(const rlp_skeleton* sk, const char* path);
RLP_API const char* rlp_verdict_string(rlp_verdict v);

/* Euler oracle --------------------------------------------------------------- */

typedef struct rlp_sde_path rlp_sde_path;

typedef struct rlp_sde_options {
  double x0;
  double u0;
  double dt;
  double t_max;
  uint64_t max_bounces; /* 0: no limit */
  int record_path;      /* keep (t, X, V) at every step */
} rlp_sde_options;

RLP_API rlp_sde_options rlp_sde_default_options(void);
RLP_API rlp_status rlp_sde_new(uint64_t seed, double c, const rlp_sde_options* opt,
                               rlp_sde_path** out);
RLP_API void rlp_sde_free(rlp_sde_path* p);
RLP_API rlp_status rlp_sde_bounce_count(const rlp_sde_path* p, uint64_t* out);
/* 1 when integration stopped because the state starved at (0, 0). */
RLP_API rlp_status rlp_sde_accumulated(const rlp_sde_path* p, int* out);
/* CSV "t,v_in,v_out". */
RLP_API rlp_status rlp_sde_write_bounces(const rlp_sde_path* p, const char* path);
/* CSV "t,X,V"; needs record_path. */
RLP_API rlp_status rlp_sde_write_path(const rlp_sde_path* p, const char* path);

/* Renewal quantities ------------------------------------------------------------ */

typedef struct rlp_renewal_options {
  uint64_t ladder_pool;  /* first ladder heights behind m; needs c >= c_crit */
  uint64_t m_samples;    /* draws from m written to the report */
  uint64_t h_paths;      /* descending ladder paths behind h; needs c <= c_crit */
  double h_xmax;
  double h_step;
  uint64_t check_size;   /* sample size of the identity checks */
} rlp_renewal_options;

RLP_API rlp_renewal_options rlp_renewal_default_options(void);
/* JSON with the h table (when c <= c_crit), an m sample (when c >= c_crit)
 * and identity checks for the regime. */
RLP_API rlp_status rlp_renewal_write_json(uint64_t seed, double c, const rlp_renewal_options* opt,
                                          const char* path);

/* Entrance law ------------------------------------------------------------------ */

typedef enum rlp_entrance_mode { RLP_ENTRANCE_BACKWARD = 0, RLP_ENTRANCE_FORWARD_ONLY = 1 } rlp_entrance_mode;

/* n entrance samples at speed v, CSV "v,Y,tau_v,tau_tail_bound". Windows
 * have back depth K and N forward arches. Needs c >= c_crit. */
RLP_API rlp_status rlp_entrance_write_csv(uint64_t seed, double c, double v, uint64_t n,
                                          uint64_t K, uint64_t N, rlp_entrance_mode mode,
                                          const char* path);

/* Acceptance suite ---------------------------------------------------------------- */

typedef struct rlp_report rlp_report;

typedef struct rlp_verify_options {
  uint64_t seed;
  double c;         /* supercritical coefficient of the two-regime checks */
  int quick;        /* N / 10, tolerances x 2 */
  unsigned threads; /* 0: hardware concurrency */
  const int* only;  /* check ids to run, or NULL for all */
  size_t only_count;
} rlp_verify_options;

typedef struct rlp_check_info {
  int id;
  const char* anchor;
  const char* comparison; /* "<=" or ">=" */
  double statistic;
  double threshold;
  int pass;
  const char* error; /* empty unless the check could not run */
} rlp_check_info;

RLP_API rlp_verify_options rlp_verify_default_options(void);
RLP_API rlp_status rlp_verify_run(const rlp_verify_options* opt, rlp_report** out);
RLP_API void rlp_report_free(rlp_report* r);
/* Report JSON owned by the report. */
RLP_API const char* rlp_report_json(const rlp_report* r);
RLP_API size_t rlp_report_check_count(const rlp_report* r);
/* Strings in out live as long as the report. */
RLP_API rlp_status rlp_report_check(const rlp_report* r, size_t i, rlp_check_info* out);
RLP_API int rlp_report_all_pass(const rlp_report* r);
RLP_API rlp_status rlp_report_write(const rlp_report* r, const char* path);

#ifdef __cplusplus
}
#endif

#endif
