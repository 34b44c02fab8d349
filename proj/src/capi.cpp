#include "unclesim/unclesim.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "experiment.hpp"
#include "weighted.hpp"

using namespace unclesim;

struct usim_report {
    AggregateReport agg;
};

namespace {

BatchConfig to_config(const usim_params& p) {
    BatchConfig c;
    c.params.alpha = p.alpha;
    c.params.delta = p.delta;
    c.params.mode = p.mode == USIM_MODE_BITCOIN ? SimMode::Bitcoin : SimMode::Ethereum;
    switch (p.selfish_uncle_strategy) {
        case USIM_UNCLES_ALL: c.params.selfish_uncle_policy = UnclePolicy::All; break;
        case USIM_UNCLES_OWN: c.params.selfish_uncle_policy = UnclePolicy::OwnOnly; break;
        default: c.params.selfish_uncle_policy = UnclePolicy::None; break;
    }
    c.params.honest_inclusion_probability = p.honest_inclusion_prob;
    c.params.min_blocks = p.min_blocks;
    c.params.seed = p.seed;
    c.params.rule = p.rule == USIM_RULE_WEIGHTED ? ChainSelectionRule::WeightedUncles
                                                 : ChainSelectionRule::LongestChain;
    c.params.honest_baseline = p.honest_baseline != 0;
    c.n_walks = p.walks;
    c.t1 = p.t1;
    c.t2 = p.t2;
    c.t1_alpha_lo = p.t1_alpha_lo;
    c.t1_alpha_hi = p.t1_alpha_hi;
    c.max_doublings = p.max_doublings;
    c.jobs = p.jobs;
    return c;
}

template <typename Fn>
usim_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument&) {
        return USIM_ERR_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        return USIM_ERR_INTERNAL;
    } catch (const std::runtime_error&) {
        return USIM_ERR_IO;
    } catch (...) {
        return USIM_ERR_INTERNAL;
    }
}

}  // namespace

extern "C" {

void usim_params_init(usim_params* params) {
    if (!params) return;
    params->alpha = 0.0;
    params->delta = 0.0;
    params->mode = USIM_MODE_ETHEREUM;
    params->selfish_uncle_strategy = USIM_UNCLES_ALL;
    params->honest_inclusion_prob = 0.33;
    params->min_blocks = uint64_t{1} << 17;
    params->walks = 100;
    params->seed = 0;
    params->rule = USIM_RULE_LONGEST;
    params->t1 = 0.001;
    params->t2 = 0.01;
    params->t1_alpha_lo = 0.15;
    params->t1_alpha_hi = 0.30;
    params->max_doublings = 6;
    params->jobs = 0;
    params->honest_baseline = 0;
}

usim_status usim_run_batch(const usim_params* params, usim_report** out) {
    if (!params || !out) return USIM_ERR_INVALID_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        AggregateReport agg = run_batch_adaptive(to_config(*params));
        *out = new usim_report{std::move(agg)};
        return agg.converged ? USIM_OK : USIM_ERR_NOT_CONVERGED;
    });
}

void usim_report_free(usim_report* report) { delete report; }

usim_status usim_report_mean(const usim_report* report, usim_metric metric,
                             double* out) {
    if (!report || !out) return USIM_ERR_INVALID_ARGUMENT;
    const AggregateReport& a = report->agg;
    switch (metric) {
        case USIM_METRIC_RRR: *out = a.rrr.mean; return USIM_OK;
        case USIM_METRIC_ARR_SELFISH: *out = a.arr_selfish.mean; return USIM_OK;
        case USIM_METRIC_ARR_HONEST: *out = a.arr_honest.mean; return USIM_OK;
        case USIM_METRIC_RBR: *out = a.rbr.mean; return USIM_OK;
        case USIM_METRIC_RNS: *out = a.rns.mean; return USIM_OK;
        case USIM_METRIC_AVG_UNCLE_REWARD: *out = a.avg_uncle_reward; return USIM_OK;
        case USIM_METRIC_AVG_UNCLE_DISTANCE: *out = a.avg_uncle_distance; return USIM_OK;
        case USIM_METRIC_OBSERVED_GAMMA: *out = a.observed_gamma; return USIM_OK;
    }
    return USIM_ERR_INVALID_ARGUMENT;
}

usim_status usim_report_std(const usim_report* report, usim_metric metric, double* out) {
    if (!report || !out) return USIM_ERR_INVALID_ARGUMENT;
    const AggregateReport& a = report->agg;
    switch (metric) {
        case USIM_METRIC_RRR: *out = a.rrr.stddev; return USIM_OK;
        case USIM_METRIC_ARR_SELFISH: *out = a.arr_selfish.stddev; return USIM_OK;
        case USIM_METRIC_ARR_HONEST: *out = a.arr_honest.stddev; return USIM_OK;
        case USIM_METRIC_RBR: *out = a.rbr.stddev; return USIM_OK;
        case USIM_METRIC_RNS: *out = a.rns.stddev; return USIM_OK;
        case USIM_METRIC_AVG_UNCLE_REWARD:
        case USIM_METRIC_AVG_UNCLE_DISTANCE:
        case USIM_METRIC_OBSERVED_GAMMA: *out = 0.0; return USIM_OK;
    }
    return USIM_ERR_INVALID_ARGUMENT;
}

uint64_t usim_report_blocks_per_walk(const usim_report* report) {
    return report ? report->agg.blocks_per_walk : 0;
}

uint32_t usim_report_doublings(const usim_report* report) {
    return report ? report->agg.doublings : 0;
}

int usim_report_converged(const usim_report* report) {
    return report && report->agg.converged ? 1 : 0;
}

namespace {

usim_status export_helper(const usim_report* const* reports,
                          const char* const* rule_labels, size_t count,
                          const char* path) {
    if (!reports || !path || count == 0) return USIM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::vector<AggregateReport> aggs;
        aggs.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            if (!reports[i]) throw std::invalid_argument("null report");
            aggs.push_back(reports[i]->agg);
        }
        if (!rule_labels) {
            export_csv(aggs, path);
        } else {
            std::vector<std::string> labels;
            labels.reserve(count);
            for (size_t i = 0; i < count; ++i) {
                if (!rule_labels[i]) throw std::invalid_argument("null rule label");
                labels.emplace_back(rule_labels[i]);
            }
            export_csv(aggs, path, &labels);
        }
        return USIM_OK;
    });
}

}  // namespace

usim_status usim_export_csv(const usim_report* const* reports, size_t count,
                            const char* path) {
    return export_helper(reports, nullptr, count, path);
}

usim_status usim_export_csv_with_rule(const usim_report* const* reports,
                                      const char* const* rule_labels, size_t count,
                                      const char* path) {
    if (!rule_labels) return USIM_ERR_INVALID_ARGUMENT;
    return export_helper(reports, rule_labels, count, path);
}

usim_status usim_find_break_even(const usim_params* params, double alpha_lo,
                                 double alpha_hi, double step,
                                 usim_break_even_result* out) {
    if (!params || !out) return USIM_ERR_INVALID_ARGUMENT;
    if (!(step > 0.0) || !(alpha_hi > alpha_lo)) return USIM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const BreakEvenResult r =
            find_break_even(to_config(*params), alpha_lo, alpha_hi, step);
        out->alpha_star = r.alpha_star;
        out->sigma_alpha = r.sigma_alpha;
        out->found = r.found ? 1 : 0;
        out->points_evaluated = r.points_evaluated;
        return USIM_OK;
    });
}

usim_status usim_weighted_compare(const usim_params* params,
                                  usim_weighted_compare_result* out,
                                  usim_report** longest_report,
                                  usim_report** weighted_report) {
    if (!params || !out) return USIM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        WeightedScenarioReport rep = run_weighted_scenario(to_config(*params));
        out->rrr_longest = rep.longest.rrr.mean;
        out->rrr_weighted = rep.weighted.rrr.mean;
        out->arr_selfish_longest = rep.longest.arr_selfish.mean;
        out->arr_selfish_weighted = rep.weighted.arr_selfish.mean;
        out->one_sided_win_frequency = rep.one_sided_win_frequency;
        if (longest_report) *longest_report = new usim_report{std::move(rep.longest)};
        if (weighted_report) *weighted_report = new usim_report{std::move(rep.weighted)};
        return USIM_OK;
    });
}

double usim_reference_selfish_revenue(double alpha, double gamma) {
    const double a = alpha, g = gamma;
    const double num =
        a * (1.0 - a) * (1.0 - a) * (4.0 * a + g * (1.0 - 2.0 * a)) - a * a * a;
    const double den = 1.0 - a * (1.0 + (2.0 - a) * a);
    return num / den;
}

const char* usim_status_str(usim_status status) {
    switch (status) {
        case USIM_OK: return "ok";
        case USIM_ERR_INVALID_ARGUMENT: return "invalid argument";
        case USIM_ERR_NOT_CONVERGED: return "sigma threshold not reached";
        case USIM_ERR_IO: return "i/o error";
        case USIM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* usim_version(void) { return "1.0.0"; }

}  // extern "C"
