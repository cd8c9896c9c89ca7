// SPDX-License-Identifier: Apache-2.0
//
// Pixel-level confusion counts and the region metrics F1 = 2TP/(2TP+FP+FN)
// and IoU = TP/(TP+FP+FN).

#pragma once

#include "strokebench/image.hpp"

#include <cstdint>

namespace strokebench {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
};

inline ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_dims(pred, gt, "confusion");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        bool p = pred.data[i] != 0, g = gt.data[i] != 0;
        if (p && g) ++c.tp;
        else if (p) ++c.fp;
        else if (g) ++c.fn;
        else ++c.tn;
    }
    return c;
}

struct RegionScores {
    double f1 = 0.0;
    double iou = 0.0;
};

// Empty-vs-empty scores 1 by convention; empty gt against a nonempty
// prediction scores 0 through the FP term.
inline RegionScores region_scores(const ConfusionCounts& c) {
    std::uint64_t denom = c.tp + c.fp + c.fn;
    if (denom == 0) return {1.0, 1.0};
    double f1 = 2.0 * static_cast<double>(c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
    double iou = static_cast<double>(c.tp) / static_cast<double>(denom);
    return {f1, iou};
}

} // namespace strokebench
