// SPDX-License-Identifier: Apache-2.0
//
// Evaluation protocol: dataset manifest, core/thin split, stroke
// characterization (coverage and width from the skeleton + distance
// transform), per-pair metric records, and assembly of the full report
// tables: per-method mean/std, core/thin breakdown, robustness profile
// against a reference method, and the pairwise significance matrix.

#pragma once

#include "strokebench/boundary_metrics.hpp"
#include "strokebench/image.hpp"
#include "strokebench/morphology.hpp"
#include "strokebench/region_metrics.hpp"
#include "strokebench/stats.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace strokebench {

struct SplitSpec {
    std::vector<int> core_ids;
    std::vector<int> thin_ids;

    // The fixed test partition: 7 core images and 5 thin-stroke images.
    static SplitSpec test_default() {
        return {{3, 13, 14, 15, 16, 17, 28}, {22, 24, 27, 33, 36}};
    }

    void validate() const {
        std::set<int> core(core_ids.begin(), core_ids.end());
        for (int id : thin_ids)
            if (core.count(id))
                throw std::invalid_argument("split: core and thin id lists must be disjoint");
    }
    bool is_core(int id) const {
        return std::find(core_ids.begin(), core_ids.end(), id) != core_ids.end();
    }
    bool is_thin(int id) const {
        return std::find(thin_ids.begin(), thin_ids.end(), id) != thin_ids.end();
    }
};

struct StrokeStats {
    double coverage = 0.0;
    double mean_width = 0.0;
    double std_width = 0.0; // population std over skeleton pixels
    bool width_defined = false;
    std::size_t skeleton_pixels = 0;
};

inline double stroke_coverage(const BinaryMask& mask) {
    if (mask.pixel_count() == 0) throw std::invalid_argument("stroke_coverage: empty dimensions");
    return mask.foreground_fraction();
}

// Local stroke width at each skeleton pixel is 2*dist(complement)-1; an
// axis-aligned bar of odd width w measures exactly w at interior pixels.
inline StrokeStats stroke_width(const BinaryMask& mask) {
    StrokeStats s;
    s.coverage = stroke_coverage(mask);
    if (mask.empty_mask()) return s; // width undefined, flagged by default state

    BinaryMask skeleton = skeletonize(mask);
    DistanceField dist = edt(complement(mask));
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!skeleton.at(x, y)) continue;
            double w = 2.0 * dist.at(x, y) - 1.0;
            sum += w;
            sum_sq += w * w;
            ++count;
        }
    }
    if (count == 0) return s;
    s.width_defined = true;
    s.skeleton_pixels = count;
    s.mean_width = sum / static_cast<double>(count);
    s.std_width = std::sqrt(std::max(0.0, sum_sq / static_cast<double>(count) -
                                              s.mean_width * s.mean_width));
    return s;
}

enum class BandVariant { BothBands, GtOnly };

inline const char* to_string(BandVariant v) {
    return v == BandVariant::BothBands ? "both" : "gt-only";
}

struct EvalOptions {
    BandVariant band = BandVariant::BothBands;
    int tau_override = 0; // 0 = derive from gt resolution
};

struct MetricRecord {
    std::string image_id;
    std::string method;
    std::optional<int> seed;
    double f1 = 0.0;
    double iou = 0.0;
    double bf1 = 0.0;
    double b_iou = 0.0;
    std::uint64_t tp = 0, fp = 0, fn = 0;
    int eval_width = 0, eval_height = 0;
    int tau = 1;
    double band_width = 0.0;
};

// Evaluates one prediction against ground truth at the gt resolution; the
// prediction is rescaled nearest-neighbor first when dimensions differ.
inline MetricRecord evaluate_pair(const BinaryMask& pred, const BinaryMask& gt,
                                  const EvalOptions& opts = {}, std::string image_id = {},
                                  std::string method = {}, std::optional<int> seed = {}) {
    BinaryMask resized;
    const BinaryMask* p = &pred;
    if (pred.width != gt.width || pred.height != gt.height) {
        resized = resize_nearest(pred, gt.width, gt.height);
        p = &resized;
    }

    MetricRecord rec;
    rec.image_id = std::move(image_id);
    rec.method = std::move(method);
    rec.seed = seed;
    rec.eval_width = gt.width;
    rec.eval_height = gt.height;

    ConfusionCounts c = confusion(*p, gt);
    RegionScores region = region_scores(c);
    rec.f1 = region.f1;
    rec.iou = region.iou;
    rec.tp = c.tp;
    rec.fp = c.fp;
    rec.fn = c.fn;

    rec.tau = opts.tau_override > 0 ? opts.tau_override : tolerance(gt.height, gt.width);
    rec.bf1 = boundary_f1(*p, gt, rec.tau).bf1;

    if (opts.band == BandVariant::BothBands) {
        BoundaryIouResult bi = boundary_iou(*p, gt);
        rec.b_iou = bi.b_iou;
        rec.band_width = bi.band_width;
    } else {
        rec.b_iou = boundary_iou_gt_band(*p, gt);
        rec.band_width = boundary_band_width(gt.height, gt.width);
    }
    return rec;
}

// TP green, FN red, FP blue, TN white.
inline RgbImage error_overlay(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_dims(pred, gt, "error_overlay");
    RgbImage out(pred.width, pred.height);
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        bool p = pred.data[i] != 0, g = gt.data[i] != 0;
        std::uint8_t* px = out.data.data() + 3 * i;
        if (p && g) { px[0] = 0; px[1] = 255; px[2] = 0; }
        else if (!p && g) { px[0] = 255; px[1] = 0; px[2] = 0; }
        else if (p && !g) { px[0] = 0; px[1] = 0; px[2] = 255; }
        else { px[0] = 255; px[1] = 255; px[2] = 255; }
    }
    return out;
}

struct RunManifest {
    std::string dataset_root;
    SplitSpec split = SplitSpec::test_default();
    std::vector<std::string> methods;
    std::vector<int> seeds = {42, 123, 7};
    GrayWeights gray_weights;
    BandVariant band = BandVariant::BothBands;
    int tau_override = 0;
    std::string metric = "f1";        // metric the statistics run on
    std::string reference_method;     // robustness baseline; first method if empty
};

// Parses the numeric id from identifiers like "image_17"; -1 when absent.
inline int parse_image_numeric_id(const std::string& image_id) {
    std::size_t i = image_id.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(image_id[i - 1]))) --i;
    if (i == image_id.size()) return -1;
    try {
        return std::stoi(image_id.substr(i));
    } catch (const std::exception&) {
        return -1;
    }
}

struct MissingCell {
    std::string method;
    std::string image_id;
    std::optional<int> seed;
};

class IncompleteGridError : public std::runtime_error {
public:
    IncompleteGridError(std::string msg, std::vector<MissingCell> cells)
        : std::runtime_error(std::move(msg)), cells_(std::move(cells)) {}
    const std::vector<MissingCell>& cells() const { return cells_; }

private:
    std::vector<MissingCell> cells_;
};

struct MethodSummary {
    std::string method;
    int n_images = 0;
    // seed-averaged per image first, then mean +- sample std across images
    double f1_mean = 0, f1_std = 0;
    double iou_mean = 0, iou_std = 0;
    double bf1_mean = 0, bf1_std = 0;
    double b_iou_mean = 0, b_iou_std = 0;
};

struct CoreThinRow {
    std::string method;
    double core_mean = 0.0;
    double thin_mean = 0.0;
    double gap = 0.0;
    int core_n = 0;
    int thin_n = 0;
};

struct RobustnessRow {
    std::string method;
    RobustnessProfile profile;
};

struct PairwiseRow {
    std::string method_a;
    std::string method_b;
    double w_statistic = 0.0;
    int n_effective = 0;
    double p_value = 1.0;
    bool exact = false;
    bool significant = false;
    double mean_delta = 0.0;
    double std_delta = 0.0;
    double median_delta = 0.0;
};

struct ReportTables {
    std::vector<MethodSummary> per_method;
    std::vector<CoreThinRow> core_thin;
    std::vector<RobustnessRow> robustness;
    std::vector<PairwiseRow> pairwise;
    std::string metric;
    std::string reference_method;
    int m_comparisons = 0;
    double alpha_corr = 0.0;
};

namespace detail {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

inline MeanStd mean_sample_std(const std::vector<double>& v) {
    MeanStd r;
    if (v.empty()) return r;
    double sum = 0.0;
    for (double x : v) sum += x;
    r.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - r.mean) * (x - r.mean);
        r.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return r;
}

inline double record_metric(const MetricRecord& r, const std::string& metric) {
    if (metric == "f1") return r.f1;
    if (metric == "iou") return r.iou;
    if (metric == "bf1") return r.bf1;
    if (metric == "b_iou" || metric == "biou") return r.b_iou;
    throw std::invalid_argument("unknown metric: " + metric);
}

inline std::string normalize_metric(const std::string& metric) {
    if (metric == "biou") return "b_iou";
    if (metric != "f1" && metric != "iou" && metric != "bf1" && metric != "b_iou")
        throw std::invalid_argument("unknown metric: " + metric);
    return metric;
}

} // namespace detail

// Seed-averaged per-image scores for every method, with completeness checks.
// The seed dimension is per method: methods whose records carry no seed
// (deterministic baselines) contribute one record per image.
inline std::map<std::string, std::map<std::string, double>> seed_averaged_scores(
    const std::vector<MetricRecord>& records, const std::string& metric,
    const std::vector<int>& expected_seeds) {
    // method -> image -> seed -> score
    std::map<std::string, std::map<std::string, std::map<std::optional<int>, double>>> grid;
    std::map<std::string, bool> method_seeded;
    for (const auto& r : records) {
        auto& cell = grid[r.method][r.image_id];
        if (cell.count(r.seed))
            throw std::invalid_argument("duplicate record for method=" + r.method +
                                        " image=" + r.image_id);
        cell[r.seed] = detail::record_metric(r, metric);
        if (r.seed.has_value()) method_seeded[r.method] = true;
    }
    if (grid.empty()) throw std::invalid_argument("no records");

    // image sets must agree across methods
    std::set<std::string> images;
    for (const auto& [img, cell] : grid.begin()->second) images.insert(img);
    std::vector<MissingCell> missing;
    for (const auto& [method, by_image] : grid) {
        for (const auto& img : images)
            if (!by_image.count(img)) missing.push_back({method, img, std::nullopt});
        // images present here but absent from the first method's set
        for (const auto& [img, cell] : by_image)
            if (!images.count(img)) missing.push_back({grid.begin()->first, img, std::nullopt});
    }
    // seed completeness per method
    for (const auto& [method, by_image] : grid) {
        bool seeded = method_seeded.count(method) > 0;
        for (const auto& [img, cell] : by_image) {
            if (!seeded) continue;
            for (int s : expected_seeds)
                if (!cell.count(s)) missing.push_back({method, img, s});
        }
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "incomplete record grid; missing cells:";
        for (const auto& c : missing) {
            msg << " (" << c.method << ", " << c.image_id;
            if (c.seed) msg << ", seed " << *c.seed;
            msg << ")";
        }
        throw IncompleteGridError(msg.str(), std::move(missing));
    }

    std::map<std::string, std::map<std::string, double>> out;
    for (const auto& [method, by_image] : grid) {
        for (const auto& [img, cell] : by_image) {
            double sum = 0.0;
            for (const auto& [seed, score] : cell) sum += score;
            out[method][img] = sum / static_cast<double>(cell.size());
        }
    }
    return out;
}

inline ReportTables aggregate(const std::vector<MetricRecord>& records,
                              const RunManifest& manifest) {
    manifest.split.validate();
    if (manifest.seeds.empty()) throw std::invalid_argument("manifest: seeds must be nonempty");

    ReportTables tables;
    tables.metric = detail::normalize_metric(manifest.metric);

    // Per-method summaries cover all four metrics; statistics below run on
    // the manifest's selected metric.
    static const char* kMetrics[] = {"f1", "iou", "bf1", "b_iou"};
    std::map<std::string, std::map<std::string, std::map<std::string, double>>> per_metric;
    for (const char* m : kMetrics)
        per_metric[m] = seed_averaged_scores(records, m, manifest.seeds);

    const auto& selected = per_metric[tables.metric];
    std::vector<std::string> methods;
    for (const auto& [method, _] : selected) methods.push_back(method);

    std::vector<std::string> images;
    for (const auto& [img, _] : selected.begin()->second) images.push_back(img);

    for (const auto& method : methods) {
        MethodSummary s;
        s.method = method;
        s.n_images = static_cast<int>(images.size());
        auto collect = [&](const char* metric) {
            std::vector<double> v;
            for (const auto& img : images) v.push_back(per_metric[metric].at(method).at(img));
            return detail::mean_sample_std(v);
        };
        auto f1 = collect("f1"), iou = collect("iou"), bf1 = collect("bf1"), biou = collect("b_iou");
        s.f1_mean = f1.mean; s.f1_std = f1.std;
        s.iou_mean = iou.mean; s.iou_std = iou.std;
        s.bf1_mean = bf1.mean; s.bf1_std = bf1.std;
        s.b_iou_mean = biou.mean; s.b_iou_std = biou.std;
        tables.per_method.push_back(s);
    }

    // Core/thin equity on the selected metric.
    for (const auto& method : methods) {
        CoreThinRow row;
        row.method = method;
        std::vector<double> core, thin;
        for (const auto& img : images) {
            int id = parse_image_numeric_id(img);
            if (id < 0) continue;
            double score = selected.at(method).at(img);
            if (manifest.split.is_core(id)) core.push_back(score);
            else if (manifest.split.is_thin(id)) thin.push_back(score);
        }
        row.core_n = static_cast<int>(core.size());
        row.thin_n = static_cast<int>(thin.size());
        if (!core.empty() && !thin.empty()) {
            row.gap = core_thin_gap(core, thin);
            double cs = 0, ts = 0;
            for (double v : core) cs += v;
            for (double v : thin) ts += v;
            row.core_mean = cs / static_cast<double>(core.size());
            row.thin_mean = ts / static_cast<double>(thin.size());
        }
        tables.core_thin.push_back(row);
    }

    // Robustness against the reference method.
    tables.reference_method = manifest.reference_method.empty() && !methods.empty()
                                  ? methods.front()
                                  : manifest.reference_method;
    if (!tables.reference_method.empty() && selected.count(tables.reference_method)) {
        std::vector<double> ref;
        for (const auto& img : images) ref.push_back(selected.at(tables.reference_method).at(img));
        for (const auto& method : methods) {
            std::vector<double> scores;
            for (const auto& img : images) scores.push_back(selected.at(method).at(img));
            tables.robustness.push_back({method, robustness_profile(scores, ref)});
        }
    }

    // Pairwise Wilcoxon matrix with Bonferroni over all method pairs.
    tables.m_comparisons = static_cast<int>(methods.size() * (methods.size() - 1) / 2);
    if (tables.m_comparisons > 0) {
        tables.alpha_corr = 0.05 / tables.m_comparisons;
        for (std::size_t i = 0; i < methods.size(); ++i) {
            for (std::size_t j = i + 1; j < methods.size(); ++j) {
                PairedSample s;
                s.labels = images;
                for (const auto& img : images) {
                    s.a.push_back(selected.at(methods[i]).at(img));
                    s.b.push_back(selected.at(methods[j]).at(img));
                }
                WilcoxonResult w = wilcoxon_signed_rank(s);
                BonferroniResult bf = bonferroni(w.p_value, tables.m_comparisons);
                EffectSize e = effect_size(s);
                PairwiseRow row;
                row.method_a = methods[i];
                row.method_b = methods[j];
                row.w_statistic = w.w_statistic;
                row.n_effective = w.n_effective;
                row.p_value = w.p_value;
                row.exact = w.exact;
                row.significant = bf.significant;
                row.mean_delta = e.mean_delta;
                row.std_delta = e.std_delta;
                row.median_delta = e.median_delta;
                tables.pairwise.push_back(row);
            }
        }
    }
    return tables;
}

} // namespace strokebench
