#include "metrics.hpp"

namespace unclesim {

MetricsReport compute_metrics(const WalkStats& stats) {
    const double counted =
        static_cast<double>(stats.regular_total() + stats.uncle_total());
    if (counted == 0.0) throw EmptyWalkError();

    MetricsReport m;
    const double rev_s = stats.rewards.selfish.total();
    const double rev_h = stats.rewards.honest.total();

    m.arr_selfish = rev_s / counted;
    m.arr_honest = rev_h / counted;

    const auto composite = [counted](double rev, std::uint64_t own_blocks) {
        if (own_blocks == 0) return 0.0;
        const double n = static_cast<double>(own_blocks);
        return (n / counted) * (rev / n);
    };
    m.arr_selfish_composite =
        composite(rev_s, stats.selfish.regular + stats.selfish.uncle);
    m.arr_honest_composite =
        composite(rev_h, stats.honest.regular + stats.honest.uncle);

    const double rev_total = rev_s + rev_h;
    m.rrr = rev_total > 0.0 ? rev_s / rev_total : 0.0;
    m.rrr_vs_honest = rev_h > 0.0 ? rev_s / rev_h : 0.0;

    m.rbr = stats.regular_total() > 0
                ? static_cast<double>(stats.selfish.regular) /
                      static_cast<double>(stats.regular_total())
                : 0.0;

    const double published_total =
        counted + static_cast<double>(stats.stale_published);
    m.rns = static_cast<double>(stats.regular_total()) / published_total;

    std::uint64_t n_uncles = 0;
    double reward_sum = 0.0;
    std::uint64_t distance_sum = 0;
    for (int d = 1; d <= kMaxUncleDistance; ++d) {
        const std::uint64_t c = stats.uncle_distance_histogram[d];
        n_uncles += c;
        reward_sum += static_cast<double>(c) * uncle_reward(d);
        distance_sum += c * static_cast<std::uint64_t>(d);
    }
    if (n_uncles > 0) {
        m.avg_uncle_reward = reward_sum / static_cast<double>(n_uncles);
        m.avg_uncle_distance =
            static_cast<double>(distance_sum) / static_cast<double>(n_uncles);
    }
    m.observed_gamma =
        stats.tie_events > 0 ? stats.tie_gamma_sum / static_cast<double>(stats.tie_events)
                             : 0.0;
    return m;
}

}  // namespace unclesim
