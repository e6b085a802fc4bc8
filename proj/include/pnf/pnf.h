#ifndef PNF_H
#define PNF_H

/* C interface to the production and network formation library. Objects are
 * opaque handles released with their _free function. Every call returns a
 * pnf_status; on failure pnf_last_error() describes the problem for the
 * calling thread. Strings returned through char** are owned by the caller
 * and released with pnf_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PNF_BUILDING)
#    define PNF_API __declspec(dllexport)
#  else
#    define PNF_API __declspec(dllimport)
#  endif
#else
#  define PNF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pnf_status {
  PNF_OK = 0,
  PNF_ERR_CONFIG = 1,
  PNF_ERR_PROFILE = 2,
  PNF_ERR_TOPOLOGY = 3,
  PNF_ERR_PARSE = 4,
  PNF_ERR_NO_ROOT = 5,
  PNF_ERR_NUMERIC = 6,
  PNF_ERR_SOLVER = 7,
  PNF_ERR_CONVERGENCE = 8,
  PNF_ERR_ARGUMENT = 9,
  PNF_ERR_INTERNAL = 10
} pnf_status;

typedef struct pnf_config pnf_config;
typedef struct pnf_profile pnf_profile;
typedef struct pnf_report pnf_report;

PNF_API const char* pnf_version(void);
PNF_API const char* pnf_status_name(pnf_status status);
/* Message of the last failed call on this thread; "" if none. */
PNF_API const char* pnf_last_error(void);
PNF_API void pnf_string_free(char* s);

/* ---- configuration ---- */
PNF_API pnf_status pnf_config_create(int n, double rho, double c, double gamma,
                                     double benefit_scale, pnf_config** out);
PNF_API pnf_status pnf_config_from_json(const char* text, pnf_config** out);
PNF_API pnf_status pnf_config_to_json(const pnf_config* config, char** out);
PNF_API pnf_status pnf_config_set_gamma(pnf_config* config, double gamma);
PNF_API pnf_status pnf_config_set_n(pnf_config* config, int n);
PNF_API pnf_status pnf_config_set_appendix_exponent(pnf_config* config, int enabled);
PNF_API void pnf_config_free(pnf_config* config);

/* ---- profiles ---- */
PNF_API pnf_status pnf_profile_from_json(const char* text, pnf_profile** out);
/* Topology text as in "star", "ring:2", "regular:4", "two_ring:10:1:9",
 * "random:0.3:7"; productions are the fixed point of the first-order
 * conditions on that graph. */
PNF_API pnf_status pnf_profile_from_topology(const pnf_config* config, const char* topology,
                                             pnf_profile** out);
PNF_API pnf_status pnf_profile_to_json(const pnf_profile* profile, char** out);
PNF_API pnf_status pnf_profile_size(const pnf_profile* profile, size_t* out);
PNF_API void pnf_profile_free(pnf_profile* profile);

/* ---- scalar quantities ---- */
PNF_API pnf_status pnf_max_production(const pnf_config* config, double* out);
PNF_API pnf_status pnf_symmetric_production(const pnf_config* config, int d, double* x_s,
                                            double* X_s);
PNF_API pnf_status pnf_gamma_region(const pnf_config* config, int d, double* gamma_lo,
                                    double* gamma_hi);
PNF_API pnf_status pnf_utility(const pnf_config* config, const pnf_profile* profile, size_t user,
                               double* out);
PNF_API pnf_status pnf_social_welfare(const pnf_config* config, const pnf_profile* profile,
                                      double* out);
PNF_API pnf_status pnf_welfare_gap(const pnf_config* config, const pnf_profile* profile,
                                   double* w_profile, double* w_opt, double* gap);

/* ---- equilibrium ---- */
PNF_API pnf_status pnf_verify(const pnf_config* config, const pnf_profile* profile,
                              pnf_report** out);
PNF_API pnf_status pnf_verify_priced(const pnf_config* config, const pnf_profile* profile,
                                     double p, double t, pnf_report** out);
/* Verifies the realized social optimum under its price p_opt and transfer t. */
PNF_API pnf_status pnf_verify_priced_optimum(const pnf_config* config, double t,
                                             pnf_report** out);
PNF_API int pnf_report_is_equilibrium(const pnf_report* report);
PNF_API size_t pnf_report_witness_count(const pnf_report* report);
/* Report JSON; includes the structural audit when the report came from
 * pnf_verify. */
PNF_API pnf_status pnf_report_to_json(const pnf_report* report, char** out);
PNF_API void pnf_report_free(pnf_report* report);

/* One seeded search run. *found is 1 when a strict equilibrium was reached;
 * *out then holds a JSON object with the profile, report and audit. */
PNF_API pnf_status pnf_search(const pnf_config* config, uint64_t seed, int max_sweeps,
                              int* found, char** out);

/* ---- tables (JSON) ---- */
PNF_API pnf_status pnf_gamma_table_json(const pnf_config* config, char** out);
PNF_API pnf_status pnf_social_optimum_json(const pnf_config* config, char** out);
PNF_API pnf_status pnf_pricing_sweep_json(const pnf_config* config, const double* gammas,
                                          size_t count, char** out);
PNF_API pnf_status pnf_scaling_json(const pnf_config* config, const int* n_list, size_t count,
                                    int seeds_per_n, int max_sweeps, int threads, char** out);

#ifdef __cplusplus
}
#endif

#endif /* PNF_H */
