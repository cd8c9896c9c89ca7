// SPDX-License-Identifier: Apache-2.0
//
// Numeric reference implementations of the five training objectives, with
// values and analytic gradients with respect to the predicted probabilities.
// Reduction is the mean over pixels throughout, so values are
// resolution-independent. Probabilities are clamped to [1e-7, 1 - 1e-7]
// before any logarithm.

#pragma once

#include "strokebench/image.hpp"

#include <cmath>
#include <vector>

namespace strokebench {

struct ProbMap {
    int width = 0;
    int height = 0;
    std::vector<double> data; // per-pixel stroke probability in [0, 1]

    ProbMap() = default;
    ProbMap(int w, int h)
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0) {
        detail::check_dims(w, h, 1, data.size());
    }
    ProbMap(int w, int h, std::vector<double> d) : width(w), height(h), data(std::move(d)) {
        detail::check_dims(w, h, 1, data.size());
        for (double v : data)
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("ProbMap values must lie in [0, 1]");
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

struct LossParams {
    double focal_alpha = 0.25;
    double focal_gamma = 2.0;
    double dice_eps = 1.0;
    double tversky_alpha = 0.3;
    double tversky_beta = 0.7;
    double tversky_eps = 1.0;
    double combo_dice_weight = 0.6;
    double combo_focal_weight = 0.4;
    // Eq-literal focal applies alpha to both classes; this switches to the
    // alpha_t convention that weights only the positive class.
    bool focal_alpha_positive_only = false;

    void validate() const {
        if (focal_alpha < 0 || focal_gamma < 0 || dice_eps < 0 || tversky_alpha < 0 ||
            tversky_beta < 0 || tversky_eps < 0 || combo_dice_weight < 0 || combo_focal_weight < 0)
            throw std::invalid_argument("loss parameters must be nonnegative");
        if (std::fabs(combo_dice_weight + combo_focal_weight - 1.0) > 1e-12)
            throw std::invalid_argument("combination weights must sum to 1");
    }
};

struct LossResult {
    double value = 0.0;
    std::vector<double> gradient; // d value / d p_i, same layout as the ProbMap
};

inline constexpr double kProbClamp = 1e-7;

namespace detail {

inline void require_loss_dims(const ProbMap& p, const BinaryMask& g, const char* what) {
    if (p.width != g.width || p.height != g.height)
        throw std::invalid_argument(std::string(what) + ": probability map and mask dimensions differ");
    if (p.pixel_count() == 0)
        throw std::invalid_argument(std::string(what) + ": empty input");
}

inline double clamp_prob(double p) {
    return std::min(std::max(p, kProbClamp), 1.0 - kProbClamp);
}

} // namespace detail

inline LossResult ce_loss(const ProbMap& p, const BinaryMask& g) {
    detail::require_loss_dims(p, g, "ce_loss");
    const double n = static_cast<double>(p.pixel_count());
    LossResult out;
    out.gradient.assign(p.data.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        double pi = detail::clamp_prob(p.data[i]);
        if (g.data[i]) {
            acc += -std::log(pi);
            out.gradient[i] = -1.0 / (pi * n);
        } else {
            acc += -std::log(1.0 - pi);
            out.gradient[i] = 1.0 / ((1.0 - pi) * n);
        }
    }
    out.value = acc / n;
    return out;
}

// mean of -alpha * (1 - p_t)^gamma * log(p_t), alpha applied to both classes
// as printed unless params select the alpha_t convention.
inline LossResult focal_loss(const ProbMap& p, const BinaryMask& g, const LossParams& params = {}) {
    detail::require_loss_dims(p, g, "focal_loss");
    const double n = static_cast<double>(p.pixel_count());
    const double gamma = params.focal_gamma;
    LossResult out;
    out.gradient.assign(p.data.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        double pi = detail::clamp_prob(p.data[i]);
        bool positive = g.data[i] != 0;
        double alpha = params.focal_alpha_positive_only
                           ? (positive ? params.focal_alpha : 1.0 - params.focal_alpha)
                           : params.focal_alpha;
        double pt = positive ? pi : 1.0 - pi;
        double one_minus = 1.0 - pt;
        double pow_g = std::pow(one_minus, gamma);
        acc += -alpha * pow_g * std::log(pt);
        // d/dp_t of -alpha (1-p_t)^g log p_t, chained through dp_t/dp = +-1
        double pow_gm1 = gamma > 0.0 ? std::pow(one_minus, gamma - 1.0) : 0.0;
        double dpt = -alpha * (pow_g / pt - gamma * pow_gm1 * std::log(pt));
        out.gradient[i] = (positive ? dpt : -dpt) / n;
    }
    out.value = acc / n;
    return out;
}

// 1 - (2*sum(p*g) + eps) / (sum(p) + sum(g) + eps)
inline LossResult dice_loss(const ProbMap& p, const BinaryMask& g, const LossParams& params = {}) {
    detail::require_loss_dims(p, g, "dice_loss");
    const double eps = params.dice_eps;
    double inter = 0.0, sum_p = 0.0, sum_g = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        inter += p.data[i] * g.data[i];
        sum_p += p.data[i];
        sum_g += g.data[i];
    }
    double num = 2.0 * inter + eps;
    double den = sum_p + sum_g + eps;
    LossResult out;
    out.value = 1.0 - num / den;
    out.gradient.assign(p.data.size(), 0.0);
    for (std::size_t i = 0; i < p.data.size(); ++i)
        out.gradient[i] = -(2.0 * g.data[i] * den - num) / (den * den);
    return out;
}

// 1 - (sum(p*g) + eps) / (sum(p*g) + a*sum(p*(1-g)) + b*sum((1-p)*g) + eps)
inline LossResult tversky_loss(const ProbMap& p, const BinaryMask& g, const LossParams& params = {}) {
    detail::require_loss_dims(p, g, "tversky_loss");
    const double a = params.tversky_alpha, b = params.tversky_beta, eps = params.tversky_eps;
    double inter = 0.0, fp = 0.0, fn = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        double pi = p.data[i], gi = g.data[i];
        inter += pi * gi;
        fp += pi * (1.0 - gi);
        fn += (1.0 - pi) * gi;
    }
    double num = inter + eps;
    double den = inter + a * fp + b * fn + eps;
    LossResult out;
    out.value = 1.0 - num / den;
    out.gradient.assign(p.data.size(), 0.0);
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        double gi = g.data[i];
        double dnum = gi;
        double dden = gi + a * (1.0 - gi) - b * gi;
        out.gradient[i] = -(dnum * den - num * dden) / (den * den);
    }
    return out;
}

// 0.6 * dice + 0.4 * focal; values and gradients combine linearly.
inline LossResult dice_focal_loss(const ProbMap& p, const BinaryMask& g,
                                  const LossParams& params = {}) {
    params.validate();
    LossResult dice = dice_loss(p, g, params);
    LossResult focal = focal_loss(p, g, params);
    LossResult out;
    out.value = params.combo_dice_weight * dice.value + params.combo_focal_weight * focal.value;
    out.gradient.resize(dice.gradient.size());
    for (std::size_t i = 0; i < out.gradient.size(); ++i)
        out.gradient[i] = params.combo_dice_weight * dice.gradient[i] +
                          params.combo_focal_weight * focal.gradient[i];
    return out;
}

} // namespace strokebench
