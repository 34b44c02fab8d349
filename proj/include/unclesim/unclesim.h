/* unclesim — Monte Carlo simulator of selfish mining on proof-of-work chains
 * with uncle rewards. C interface of the shared library: plain structs in,
 * opaque report handles out, status codes for every fallible call. */
#ifndef UNCLESIM_H
#define UNCLESIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum usim_status {
    USIM_OK = 0,
    USIM_ERR_INVALID_ARGUMENT = 1,
    USIM_ERR_NOT_CONVERGED = 2,
    USIM_ERR_IO = 3,
    USIM_ERR_INTERNAL = 4
} usim_status;

typedef enum usim_mode { USIM_MODE_ETHEREUM = 0, USIM_MODE_BITCOIN = 1 } usim_mode;

typedef enum usim_uncle_strategy {
    USIM_UNCLES_ALL = 0,
    USIM_UNCLES_OWN = 1,
    USIM_UNCLES_NONE = 2
} usim_uncle_strategy;

typedef enum usim_chain_rule {
    USIM_RULE_LONGEST = 0,
    USIM_RULE_WEIGHTED = 1
} usim_chain_rule;

typedef struct usim_params {
    double alpha;                 /* selfish mining power fraction */
    double delta;                 /* honest stale block ratio */
    usim_mode mode;               /* bitcoin mode forces delta=0, no uncles */
    usim_uncle_strategy selfish_uncle_strategy;
    double honest_inclusion_prob; /* per uncle slot and step, default 0.33 */
    uint64_t min_blocks;          /* events per walk, default 131072 */
    uint32_t walks;               /* walks per batch, default 100 */
    uint64_t seed;                /* master seed */
    usim_chain_rule rule;         /* chain selection for tips and evaluation */
    double t1, t2;                /* sigma acceptance thresholds */
    double t1_alpha_lo, t1_alpha_hi; /* alpha range where t1 applies */
    uint32_t max_doublings;       /* walk-length doublings before giving up */
    int32_t jobs;                 /* worker threads; <=0 means all cores */
    int32_t honest_baseline;      /* nonzero: tagged all-honest counterfactual */
} usim_params;

/* Fills the defaults described above (alpha=delta=0, ethereum, all, 0.33,
 * 2^17 blocks, 100 walks, seed 0, longest, t1=0.001 on [0.15,0.30], t2=0.01,
 * 6 doublings, all cores). */
void usim_params_init(usim_params* params);

typedef struct usim_report usim_report; /* opaque aggregate of one batch */

/* Runs one batch with adaptive walk-length doubling. On success the caller
 * owns *out and must release it with usim_report_free. Returns
 * USIM_ERR_NOT_CONVERGED when the sigma threshold was still exceeded after
 * max_doublings; *out is still produced in that case. */
usim_status usim_run_batch(const usim_params* params, usim_report** out);
void usim_report_free(usim_report* report);

typedef enum usim_metric {
    USIM_METRIC_RRR = 0,
    USIM_METRIC_ARR_SELFISH = 1,
    USIM_METRIC_ARR_HONEST = 2,
    USIM_METRIC_RBR = 3,
    USIM_METRIC_RNS = 4,
    USIM_METRIC_AVG_UNCLE_REWARD = 5,
    USIM_METRIC_AVG_UNCLE_DISTANCE = 6,
    USIM_METRIC_OBSERVED_GAMMA = 7
} usim_metric;

usim_status usim_report_mean(const usim_report* report, usim_metric metric, double* out);
/* Sample standard deviation across walks; 0 for the pooled metrics
 * (uncle reward/distance, gamma). */
usim_status usim_report_std(const usim_report* report, usim_metric metric, double* out);
uint64_t usim_report_blocks_per_walk(const usim_report* report);
uint32_t usim_report_doublings(const usim_report* report);
int usim_report_converged(const usim_report* report);

/* Writes the batch CSV (header plus one row per report, input order). */
usim_status usim_export_csv(const usim_report* const* reports, size_t count,
                            const char* path);
/* Same schema plus a trailing `rule` column. */
usim_status usim_export_csv_with_rule(const usim_report* const* reports,
                                      const char* const* rule_labels, size_t count,
                                      const char* path);

typedef struct usim_break_even_result {
    double alpha_star;
    double sigma_alpha;
    int found;
    uint32_t points_evaluated;
} usim_break_even_result;

/* Smallest alpha where selfish ARR reaches the honest-counterfactual ARR,
 * searched on the [alpha_lo, alpha_hi] grid with the given step. */
usim_status usim_find_break_even(const usim_params* params, double alpha_lo,
                                 double alpha_hi, double step,
                                 usim_break_even_result* out);

typedef struct usim_weighted_compare_result {
    double rrr_longest, rrr_weighted;
    double arr_selfish_longest, arr_selfish_weighted;
    double one_sided_win_frequency;
} usim_weighted_compare_result;

/* Paired-seed comparison of longest-chain vs weighted-uncle selection.
 * Both per-rule reports are returned when the out pointers are non-NULL. */
usim_status usim_weighted_compare(const usim_params* params,
                                  usim_weighted_compare_result* out,
                                  usim_report** longest_report,
                                  usim_report** weighted_report);

/* Closed-form selfish relative revenue in the reference longest-chain model
 * (no stales, no uncles) at network split gamma. */
double usim_reference_selfish_revenue(double alpha, double gamma);

const char* usim_status_str(usim_status status);
const char* usim_version(void);

#ifdef __cplusplus
}
#endif

#endif /* UNCLESIM_H */
