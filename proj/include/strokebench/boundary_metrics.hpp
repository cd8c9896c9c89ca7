// SPDX-License-Identifier: Apache-2.0
//
// Boundary F1 with a resolution-scaled Chebyshev tolerance and Boundary IoU
// restricted to a band of width 2% of the image diagonal.
//
// Contours come from the 3x3 morphological gradient. BF1 matching uses set
// semantics: a contour pixel counts as matched if any contour pixel of the
// other mask lies within Chebyshev distance tau, implemented as box dilation.

#pragma once

#include "strokebench/image.hpp"
#include "strokebench/morphology.hpp"
#include "strokebench/region_metrics.hpp"

#include <cmath>

namespace strokebench {

// tau = max(1, round(2 * max(H, W) / 1536)), round half away from zero.
// Anchors: 1024x768 -> 1, 3712x2784 -> 5.
inline int tolerance(int height, int width) {
    if (height <= 0 || width <= 0)
        throw std::invalid_argument("tolerance: dimensions must be positive");
    int tau = round_half_away(2.0 * std::max(height, width) / 1536.0);
    return std::max(1, tau);
}

inline double boundary_band_width(int height, int width) {
    return 0.02 * std::sqrt(static_cast<double>(height) * height +
                            static_cast<double>(width) * width);
}

struct BoundaryF1 {
    double precision = 0.0;
    double recall = 0.0;
    double bf1 = 0.0;
};

inline BoundaryF1 boundary_f1(const BinaryMask& pred, const BinaryMask& gt, int tau) {
    require_same_dims(pred, gt, "boundary_f1");
    if (tau < 1) throw std::invalid_argument("boundary_f1: tau must be >= 1");

    BinaryMask pred_contour = morph_gradient(pred);
    BinaryMask gt_contour = morph_gradient(gt);
    std::size_t n_pred = pred_contour.foreground_count();
    std::size_t n_gt = gt_contour.foreground_count();
    if (n_pred == 0 && n_gt == 0) return {1.0, 1.0, 1.0};
    if (n_pred == 0 || n_gt == 0) return {0.0, 0.0, 0.0};

    StructuringElement box = StructuringElement::square(2 * tau + 1);
    BinaryMask gt_reach = dilate(gt_contour, box);
    BinaryMask pred_reach = dilate(pred_contour, box);

    std::size_t matched_pred = 0, matched_gt = 0;
    for (std::size_t i = 0; i < pred_contour.data.size(); ++i) {
        matched_pred += pred_contour.data[i] & gt_reach.data[i];
        matched_gt += gt_contour.data[i] & pred_reach.data[i];
    }
    double precision = static_cast<double>(matched_pred) / static_cast<double>(n_pred);
    double recall = static_cast<double>(matched_gt) / static_cast<double>(n_gt);
    double bf1 = (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    return {precision, recall, bf1};
}

struct BoundaryIouResult {
    double b_iou = 0.0;
    double band_width = 0.0;
};

// Default definition: per-mask inner bands. For each mask M the band is
// M_d = {x in M : dist(x, complement(M)) <= d}; the score is
// |pred_d & gt_d| / |pred_d | gt_d|, and 1.0 when the union is empty.
inline BoundaryIouResult boundary_iou(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_dims(pred, gt, "boundary_iou");
    double d = boundary_band_width(gt.height, gt.width);
    BinaryMask pred_band = inner_band(pred, d);
    BinaryMask gt_band = inner_band(gt, d);

    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < pred_band.data.size(); ++i) {
        inter += pred_band.data[i] & gt_band.data[i];
        uni += pred_band.data[i] | gt_band.data[i];
    }
    if (uni == 0) return {1.0, d};
    return {static_cast<double>(inter) / static_cast<double>(uni), d};
}

// Variant with the band computed from ground truth only: predicted pixels
// outside the gt band G_d are ignored entirely, so the score reduces to
// |pred & G_d| / |G_d|. Kept for protocol parity with the single-band
// description; reports name which variant produced a score.
inline double boundary_iou_gt_band(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_dims(pred, gt, "boundary_iou_gt_band");
    double d = boundary_band_width(gt.height, gt.width);
    BinaryMask gt_band = inner_band(gt, d);

    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < gt_band.data.size(); ++i) {
        std::uint8_t in_band_pred = pred.data[i] & gt_band.data[i];
        inter += in_band_pred & gt_band.data[i];
        uni += in_band_pred | gt_band.data[i];
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// One record of every boundary quantity for a pred/gt pair.
struct BoundaryScores {
    double precision = 0.0;
    double recall = 0.0;
    double bf1 = 0.0;
    int tau = 1;
    double b_iou = 0.0;
    double band_width = 0.0;
};

} // namespace strokebench
