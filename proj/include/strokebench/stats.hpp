// SPDX-License-Identifier: Apache-2.0
//
// Nonparametric significance testing and robustness profiling: two-sided
// Wilcoxon signed-rank test (exact up to n = 20 via the full sign-assignment
// distribution, tie-corrected normal approximation with continuity correction
// beyond), Bonferroni correction, paired effect sizes, and per-image
// robustness statistics.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace strokebench {

struct PairedSample {
    std::vector<std::string> labels; // image identifiers, parallel to a/b
    std::vector<double> a;
    std::vector<double> b;

    void validate() const {
        if (a.size() != b.size())
            throw std::invalid_argument("PairedSample: score vectors differ in length");
        if (!labels.empty() && labels.size() != a.size())
            throw std::invalid_argument("PairedSample: labels length mismatch");
        if (a.empty()) throw std::invalid_argument("PairedSample: empty sample");
    }
};

struct WilcoxonResult {
    double w_statistic = 0.0; // min(W+, W-)
    int n_effective = 0;      // pairs left after discarding zero differences
    double p_value = 1.0;     // two-sided, in (0, 1]
    bool exact = false;       // true whenever n_effective <= 20
    bool degenerate = false;  // every difference was zero
    bool significant = false; // filled by the caller once alpha is known
};

inline constexpr int kWilcoxonExactLimit = 20;

namespace detail {

// Average ranks of |d| (ascending); ranks are multiples of 0.5.
inline std::vector<double> average_ranks(const std::vector<double>& abs_d) {
    const std::size_t n = abs_d.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return abs_d[x] < abs_d[y]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]]) ++j;
        double avg = 0.5 * static_cast<double>(i + j) + 1.0; // (i+1 + j+1)/2
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

// Exact two-sided p-value over all 2^n sign assignments: the distribution of
// W+ is built as the polynomial product of (1 + x^{2r_i}) over doubled ranks,
// which enumerates every assignment. p = P(min(W+, W-) <= w_obs).
inline double exact_signed_rank_p(const std::vector<double>& ranks, double w_obs) {
    std::int64_t total2 = 0;
    std::vector<std::int64_t> r2(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        r2[i] = static_cast<std::int64_t>(std::llround(2.0 * ranks[i]));
        total2 += r2[i];
    }
    std::vector<double> counts(static_cast<std::size_t>(total2) + 1, 0.0);
    counts[0] = 1.0;
    std::int64_t reach = 0;
    for (std::int64_t r : r2) {
        reach += r;
        for (std::int64_t s = reach; s >= r; --s) counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - r)];
    }
    const double w2 = 2.0 * w_obs + 1e-9;
    double hits = 0.0, all = 0.0;
    for (std::int64_t s = 0; s <= total2; ++s) {
        double c = counts[static_cast<std::size_t>(s)];
        all += c;
        double m = static_cast<double>(std::min(s, total2 - s));
        if (m <= w2) hits += c;
    }
    return hits / all;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace detail

// Two-sided Wilcoxon signed-rank test on paired scores. Zero differences are
// discarded (classical treatment); ties in |d| receive average ranks.
inline WilcoxonResult wilcoxon_signed_rank(const PairedSample& sample) {
    sample.validate();

    std::vector<double> d;
    d.reserve(sample.a.size());
    for (std::size_t i = 0; i < sample.a.size(); ++i) {
        double diff = sample.a[i] - sample.b[i];
        if (diff != 0.0) d.push_back(diff);
    }

    WilcoxonResult res;
    if (d.empty()) {
        res.degenerate = true;
        res.exact = true;
        res.p_value = 1.0;
        return res;
    }
    res.n_effective = static_cast<int>(d.size());

    std::vector<double> abs_d(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) abs_d[i] = std::fabs(d[i]);
    std::vector<double> ranks = detail::average_ranks(abs_d);

    double w_plus = 0.0, w_minus = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        (d[i] > 0 ? w_plus : w_minus) += ranks[i];
    res.w_statistic = std::min(w_plus, w_minus);

    const int n = res.n_effective;
    if (n <= kWilcoxonExactLimit) {
        res.exact = true;
        res.p_value = detail::exact_signed_rank_p(ranks, res.w_statistic);
    } else {
        res.exact = false;
        // tie-corrected variance; groups of equal |d|
        std::vector<double> sorted_abs = abs_d;
        std::sort(sorted_abs.begin(), sorted_abs.end());
        double tie_term = 0.0;
        std::size_t i = 0;
        while (i < sorted_abs.size()) {
            std::size_t j = i;
            while (j + 1 < sorted_abs.size() && sorted_abs[j + 1] == sorted_abs[i]) ++j;
            double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
        double mu = n * (n + 1) / 4.0;
        double var = n * (n + 1) * (2.0 * n + 1) / 24.0 - tie_term / 48.0;
        if (var <= 0.0) {
            res.p_value = 1.0;
        } else {
            double z = (res.w_statistic - mu + 0.5) / std::sqrt(var);
            res.p_value = std::min(1.0, 2.0 * detail::normal_cdf(z));
        }
    }
    res.p_value = std::min(1.0, std::max(res.p_value, std::numeric_limits<double>::min()));
    return res;
}

struct BonferroniResult {
    double alpha_corr = 0.0;
    bool significant = false;
};

// alpha_corr = alpha/m; significance requires p strictly below it.
inline BonferroniResult bonferroni(double p, int m = 10, double alpha = 0.05) {
    if (m < 1) throw std::invalid_argument("bonferroni: m must be >= 1");
    BonferroniResult r;
    r.alpha_corr = alpha / m;
    r.significant = p < r.alpha_corr;
    return r;
}

struct EffectSize {
    double mean_delta = 0.0;
    double std_delta = 0.0; // sample standard deviation (n-1 denominator)
    double median_delta = 0.0;
};

inline double median_of_sorted(const std::vector<double>& s) {
    const std::size_t n = s.size();
    if (n % 2 == 1) return s[n / 2];
    return 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

inline EffectSize effect_size(const PairedSample& sample) {
    sample.validate();
    std::vector<double> d(sample.a.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = sample.a[i] - sample.b[i];

    EffectSize e;
    double sum = 0.0;
    for (double v : d) sum += v;
    e.mean_delta = sum / static_cast<double>(d.size());
    if (d.size() > 1) {
        double ss = 0.0;
        for (double v : d) ss += (v - e.mean_delta) * (v - e.mean_delta);
        e.std_delta = std::sqrt(ss / static_cast<double>(d.size() - 1));
    }
    std::sort(d.begin(), d.end());
    e.median_delta = median_of_sorted(d);
    return e;
}

// Quantile by linear interpolation on order statistics at position q*(n-1).
inline double quantile_linear(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty input");
    if (sorted.size() == 1) return sorted[0];
    double pos = q * static_cast<double>(sorted.size() - 1);
    double lo = std::floor(pos);
    std::size_t i = static_cast<std::size_t>(lo);
    if (i + 1 >= sorted.size()) return sorted.back();
    double frac = pos - lo;
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

struct RobustnessProfile {
    double mean = 0.0;
    double median = 0.0;
    double iqr = 0.0;
    double min = 0.0;
    double max = 0.0;
    int wins = 0; // images where the method strictly exceeds the reference
    int n = 0;
};

inline RobustnessProfile robustness_profile(const std::vector<double>& scores,
                                            const std::vector<double>& reference) {
    if (scores.empty()) throw std::invalid_argument("robustness_profile: empty scores");
    if (scores.size() != reference.size())
        throw std::invalid_argument("robustness_profile: length mismatch");

    RobustnessProfile r;
    r.n = static_cast<int>(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] > reference[i]) ++r.wins; // strict

    std::vector<double> s = scores;
    std::sort(s.begin(), s.end());
    double sum = 0.0;
    for (double v : s) sum += v;
    r.mean = sum / static_cast<double>(s.size());
    r.median = quantile_linear(s, 0.5);
    r.iqr = quantile_linear(s, 0.75) - quantile_linear(s, 0.25);
    r.min = s.front();
    r.max = s.back();
    return r;
}

inline double core_thin_gap(const std::vector<double>& core_scores,
                            const std::vector<double>& thin_scores) {
    if (core_scores.empty() || thin_scores.empty())
        throw std::invalid_argument("core_thin_gap: empty subset");
    double cm = 0.0, tm = 0.0;
    for (double v : core_scores) cm += v;
    for (double v : thin_scores) tm += v;
    return cm / static_cast<double>(core_scores.size()) -
           tm / static_cast<double>(thin_scores.size());
}

} // namespace strokebench
