// SPDX-License-Identifier: Apache-2.0
//
// strokebench: boundary-aware evaluation of binary stroke masks.
//
// Subcommands: evaluate, baseline, compare, report, characterize, augment,
// loss-check. Exit codes: 0 success, 1 usage error, 2 data error. All
// floating output uses 3 decimals in text tables and 6 in JSON. Progress
// goes to stderr; results go to files or stdout only.

#include "strokebench/strokebench.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace strokebench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_raster_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

std::vector<fs::path> list_rasters(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && is_raster_file(entry.path())) out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::string strip_mask_suffix(std::string stem) {
    const std::string suffix = "_mask";
    if (stem.size() > suffix.size() && stem.ends_with(suffix))
        stem.resize(stem.size() - suffix.size());
    return stem;
}

struct MaskPair {
    std::string stem;
    fs::path pred;
    fs::path gt;
};

// Pairs files between two directories by stem; gt filenames may carry a
// _mask suffix. Any file left unpaired on either side is an error.
std::vector<MaskPair> pair_directories(const fs::path& pred_dir, const fs::path& gt_dir) {
    std::map<std::string, fs::path> preds;
    for (const auto& p : list_rasters(pred_dir)) {
        std::string stem = strip_mask_suffix(p.stem().string());
        if (!preds.emplace(stem, p).second)
            throw DataError("duplicate prediction stem: " + stem);
    }
    std::map<std::string, fs::path> gts;
    for (const auto& p : list_rasters(gt_dir)) {
        std::string stem = strip_mask_suffix(p.stem().string());
        if (!gts.emplace(stem, p).second) throw DataError("duplicate ground-truth stem: " + stem);
    }
    if (gts.empty()) throw DataError("no ground-truth rasters in " + gt_dir.string());
    if (preds.empty()) throw DataError("no prediction rasters in " + pred_dir.string());

    std::vector<std::string> unpaired;
    std::vector<MaskPair> pairs;
    for (const auto& [stem, gt_path] : gts) {
        auto it = preds.find(stem);
        if (it == preds.end()) {
            unpaired.push_back(stem + " (no prediction)");
            continue;
        }
        pairs.push_back({stem, it->second, gt_path});
    }
    for (const auto& [stem, pred_path] : preds)
        if (!gts.count(stem)) unpaired.push_back(stem + " (no ground truth)");

    if (!unpaired.empty()) {
        std::string msg = "unpaired files:";
        for (const auto& u : unpaired) msg += "\n  " + u;
        throw DataError(msg);
    }
    return pairs;
}

GrayWeights weights_from_flag(const std::vector<double>& v) {
    if (v.empty()) return {};
    return {v[0], v[1], v[2]};
}

std::string read_text_file(const fs::path& path) {
    std::vector<std::uint8_t> bytes = read_binary_file(path);
    return std::string(bytes.begin(), bytes.end());
}

SplitSpec load_split(const std::string& path) {
    if (path.empty()) return SplitSpec::test_default();
    nlohmann::json j = nlohmann::json::parse(read_text_file(path));
    SplitSpec s;
    for (const auto& v : j.at("core")) s.core_ids.push_back(v.get<int>());
    for (const auto& v : j.at("thin")) s.thin_ids.push_back(v.get<int>());
    s.validate();
    return s;
}

void write_text_file(const fs::path& path, const std::string& text) {
    write_binary_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::string pred_dir, gt_dir, out_path;
    std::string method = "pred";
    int seed = INT_MIN; // INT_MIN = unset
    std::string band = "both";
    int tau = 0;
    int threads = 0;
    std::vector<double> gray;
};

int run_evaluate(const EvaluateArgs& args) {
    auto pairs = pair_directories(args.pred_dir, args.gt_dir);

    EvalOptions opts;
    opts.band = args.band == "gt-only" ? BandVariant::GtOnly : BandVariant::BothBands;
    opts.tau_override = args.tau;
    GrayWeights weights = weights_from_flag(args.gray);

    std::vector<MetricRecord> records(pairs.size());
    parallel_for_index(pairs.size(), resolve_thread_count(args.threads), [&](std::size_t i) {
        const MaskPair& pair = pairs[i];
        BinaryMask pred = load_mask(pair.pred, weights);
        BinaryMask gt = load_mask(pair.gt, weights);
        std::optional<int> seed;
        if (args.seed != INT_MIN) seed = args.seed;
        records[i] = evaluate_pair(pred, gt, opts, pair.stem, args.method, seed);
    });

    RunManifest manifest;
    manifest.dataset_root = args.gt_dir;
    manifest.methods = {args.method};
    if (args.seed != INT_MIN) manifest.seeds = {args.seed};
    manifest.band = opts.band;
    manifest.tau_override = args.tau;
    manifest.gray_weights = weights;

    write_text_file(args.out_path, write_records_json(manifest, records));
    std::cerr << "evaluated " << records.size() << " pairs -> " << args.out_path << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct BaselineArgs {
    std::string images_dir, gt_dir, out_path, masks_out;
    std::string method;
    bool overlays = false;
    int threads = 0;
    std::string band = "both";
    std::vector<double> gray;
    SauvolaParams sauvola;
    AdaptiveParams adaptive;
};

int run_baseline(const BaselineArgs& args) {
    if (args.method == "sauvola") args.sauvola.validate();
    if (args.method == "adaptive") args.adaptive.validate();

    auto pairs = pair_directories(args.images_dir, args.gt_dir);
    GrayWeights weights = weights_from_flag(args.gray);
    EvalOptions opts;
    opts.band = args.band == "gt-only" ? BandVariant::GtOnly : BandVariant::BothBands;

    if (!args.masks_out.empty()) fs::create_directories(args.masks_out);

    std::vector<MetricRecord> records(pairs.size());
    parallel_for_index(pairs.size(), resolve_thread_count(args.threads), [&](std::size_t i) {
        const MaskPair& pair = pairs[i];
        GrayImage gray = load_gray(pair.pred, weights); // pred dir holds the photos
        BinaryMask mask;
        if (args.method == "otsu") mask = otsu(gray).mask;
        else if (args.method == "adaptive") mask = adaptive_gaussian(gray, args.adaptive);
        else mask = sauvola(gray, args.sauvola);

        BinaryMask gt = load_mask(pair.gt, weights);
        records[i] = evaluate_pair(mask, gt, opts, pair.stem, args.method, std::nullopt);

        if (!args.masks_out.empty()) {
            save_png(fs::path(args.masks_out) / (pair.stem + "_" + args.method + ".png"), mask);
            if (args.overlays && mask.width == gt.width && mask.height == gt.height)
                save_png(fs::path(args.masks_out) / (pair.stem + "_" + args.method + "_overlay.png"),
                         error_overlay(mask, gt));
        }
    });

    RunManifest manifest;
    manifest.dataset_root = args.gt_dir;
    manifest.methods = {args.method};
    manifest.band = opts.band;
    manifest.gray_weights = weights;

    write_text_file(args.out_path, write_records_json(manifest, records));

    double mean_f1 = 0.0;
    for (const auto& r : records) mean_f1 += r.f1;
    if (!records.empty()) mean_f1 /= static_cast<double>(records.size());
    std::fprintf(stderr, "%s: %zu images, mean F1 %.3f -> %s\n", args.method.c_str(),
                 records.size(), mean_f1, args.out_path.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
    std::string file_a, file_b, out_path;
    std::string metric = "f1";
    int comparisons = 10;
};

int run_compare(const CompareArgs& args) {
    RecordsFile a = parse_records_json(read_text_file(args.file_a));
    RecordsFile b = parse_records_json(read_text_file(args.file_b));

    auto seed_average = [&](const RecordsFile& f,
                            const std::string& which) -> std::map<std::string, double> {
        std::set<std::string> methods;
        for (const auto& r : f.records) methods.insert(r.method);
        if (methods.size() != 1)
            throw DataError(which + ": expected records for exactly one method, found " +
                            std::to_string(methods.size()));
        std::map<std::string, std::pair<double, int>> acc;
        for (const auto& r : f.records) {
            double v = detail::record_metric(r, detail::normalize_metric(args.metric));
            auto& [sum, n] = acc[r.image_id];
            sum += v;
            ++n;
        }
        std::map<std::string, double> out;
        for (const auto& [img, sn] : acc) out[img] = sn.first / sn.second;
        return out;
    };

    auto sa = seed_average(a, args.file_a);
    auto sb = seed_average(b, args.file_b);

    std::vector<std::string> missing;
    for (const auto& [img, _] : sa)
        if (!sb.count(img)) missing.push_back(img + " (only in " + args.file_a + ")");
    for (const auto& [img, _] : sb)
        if (!sa.count(img)) missing.push_back(img + " (only in " + args.file_b + ")");
    if (!missing.empty()) {
        std::string msg = "image sets differ:";
        for (const auto& m : missing) msg += "\n  " + m;
        throw DataError(msg);
    }

    PairedSample sample;
    for (const auto& [img, va] : sa) {
        sample.labels.push_back(img);
        sample.a.push_back(va);
        sample.b.push_back(sb.at(img));
    }

    WilcoxonResult w = wilcoxon_signed_rank(sample);
    BonferroniResult bf = bonferroni(w.p_value, args.comparisons);
    w.significant = bf.significant;
    EffectSize e = effect_size(sample);

    std::string method_a = a.records.front().method, method_b = b.records.front().method;
    std::printf("compare %s vs %s on %s (n=%zu images)\n", method_a.c_str(), method_b.c_str(),
                args.metric.c_str(), sample.a.size());
    std::printf("  W = %.3f  (n_eff = %d, %s)\n", w.w_statistic, w.n_effective,
                w.exact ? "exact" : "normal approx");
    std::printf("  p = %.6f  %s at alpha_corr = %.6f (m = %d)\n", w.p_value,
                w.significant ? "SIGNIFICANT" : "n.s.", bf.alpha_corr, args.comparisons);
    if (w.degenerate) std::printf("  note: all per-image differences are zero\n");
    std::printf("  delta = %.3f +- %.3f (median %.3f)\n", e.mean_delta, e.std_delta,
                e.median_delta);

    if (!args.out_path.empty()) {
        jsonio::Writer jw;
        jw.begin_object();
        jw.key("a"); jw.value(method_a);
        jw.key("b"); jw.value(method_b);
        jw.key("metric"); jw.value(detail::normalize_metric(args.metric));
        jw.key("n"); jw.value(static_cast<int>(sample.a.size()));
        jw.key("w"); jw.value(w.w_statistic);
        jw.key("n_effective"); jw.value(w.n_effective);
        jw.key("p"); jw.value(w.p_value);
        jw.key("exact"); jw.value(w.exact);
        jw.key("degenerate"); jw.value(w.degenerate);
        jw.key("alpha_corr"); jw.value(bf.alpha_corr);
        jw.key("m_comparisons"); jw.value(args.comparisons);
        jw.key("significant"); jw.value(w.significant);
        jw.key("mean_delta"); jw.value(e.mean_delta);
        jw.key("std_delta"); jw.value(e.std_delta);
        jw.key("median_delta"); jw.value(e.median_delta);
        jw.end();
        write_text_file(args.out_path, jw.str() + "\n");
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
    std::vector<std::string> record_files;
    std::string out_path, split_path;
    std::string metric = "f1";
    std::string reference;
};

int run_report(const ReportArgs& args) {
    std::vector<MetricRecord> records;
    std::set<std::string> methods;
    std::set<int> seeds;
    for (const auto& file : args.record_files) {
        RecordsFile f = parse_records_json(read_text_file(file));
        for (auto& r : f.records) {
            methods.insert(r.method);
            if (r.seed) seeds.insert(*r.seed);
            records.push_back(std::move(r));
        }
    }
    if (records.empty()) throw DataError("no records in inputs");

    RunManifest manifest;
    manifest.methods.assign(methods.begin(), methods.end());
    if (!seeds.empty()) manifest.seeds.assign(seeds.begin(), seeds.end());
    manifest.split = load_split(args.split_path);
    manifest.metric = args.metric;
    manifest.reference_method = args.reference;

    ReportTables tables = aggregate(records, manifest);
    std::string text = render_text_tables(tables);
    std::fputs(text.c_str(), stdout);
    if (!args.out_path.empty()) {
        write_text_file(args.out_path, write_report_json(manifest, records, tables));
        std::cerr << "report -> " << args.out_path << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct CharacterizeArgs {
    std::string masks_dir, out_path, split_path;
    int threads = 0;
    std::vector<double> gray;
};

int run_characterize(const CharacterizeArgs& args) {
    auto files = list_rasters(args.masks_dir);
    if (files.empty()) throw DataError("no mask rasters in " + args.masks_dir);
    SplitSpec split = load_split(args.split_path);
    GrayWeights weights = weights_from_flag(args.gray);

    struct Row {
        std::string stem;
        StrokeStats stats;
    };
    std::vector<Row> rows(files.size());
    parallel_for_index(files.size(), resolve_thread_count(args.threads), [&](std::size_t i) {
        BinaryMask mask = load_mask(files[i], weights);
        rows[i] = {strip_mask_suffix(files[i].stem().string()), stroke_width(mask)};
    });

    std::printf("%-20s %10s %12s %12s\n", "mask", "coverage", "mean width", "std width");
    double cov_sum = 0.0;
    std::vector<double> core_widths, thin_widths, all_widths;
    for (const auto& row : rows) {
        cov_sum += row.stats.coverage;
        if (row.stats.width_defined) {
            std::printf("%-20s %9.4f%% %12.2f %12.2f\n", row.stem.c_str(),
                        row.stats.coverage * 100.0, row.stats.mean_width, row.stats.std_width);
            all_widths.push_back(row.stats.mean_width);
            int id = parse_image_numeric_id(row.stem);
            if (id >= 0 && split.is_core(id)) core_widths.push_back(row.stats.mean_width);
            if (id >= 0 && split.is_thin(id)) thin_widths.push_back(row.stats.mean_width);
        } else {
            std::printf("%-20s %9.4f%% %12s %12s\n", row.stem.c_str(),
                        row.stats.coverage * 100.0, "undefined", "-");
        }
    }
    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    std::printf("\nimages: %zu   mean coverage: %.4f%%\n", rows.size(),
                100.0 * cov_sum / static_cast<double>(rows.size()));
    if (!all_widths.empty()) std::printf("mean stroke width (all): %.2f px\n", mean_of(all_widths));
    if (!core_widths.empty())
        std::printf("mean stroke width (core subset, n=%zu): %.2f px\n", core_widths.size(),
                    mean_of(core_widths));
    if (!thin_widths.empty())
        std::printf("mean stroke width (thin subset, n=%zu): %.2f px\n", thin_widths.size(),
                    mean_of(thin_widths));

    if (!args.out_path.empty()) {
        jsonio::Writer jw;
        jw.begin_object();
        jw.key("images");
        jw.begin_array();
        for (const auto& row : rows) {
            jw.begin_object();
            jw.key("id"); jw.value(row.stem);
            jw.key("coverage"); jw.value(row.stats.coverage);
            jw.key("width_defined"); jw.value(row.stats.width_defined);
            jw.key("mean_width"); jw.value(row.stats.mean_width);
            jw.key("std_width"); jw.value(row.stats.std_width);
            jw.end();
        }
        jw.end();
        jw.key("mean_coverage"); jw.value(cov_sum / static_cast<double>(rows.size()));
        jw.key("mean_width_all"); jw.value(mean_of(all_widths));
        jw.key("mean_width_core"); jw.value(mean_of(core_widths));
        jw.key("mean_width_thin"); jw.value(mean_of(thin_widths));
        jw.end();
        write_text_file(args.out_path, jw.str() + "\n");
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct AugmentArgs {
    std::string images_dir, out_dir;
    std::string single_image, single_mask;
    int single_id = -1;
    int count = 10;
    std::uint64_t master_seed = 42;
    int threads = 0;
};

void write_variant(const fs::path& out_dir, const std::string& stem, int k,
                   const AugmentVariant& v) {
    std::string base = stem + "_aug" + std::to_string(k);
    save_png(out_dir / (base + ".png"), v.image);
    save_png(out_dir / (base + "_mask.png"), v.mask);

    jsonio::Writer jw;
    jw.begin_object();
    jw.key("profile"); jw.value(std::string(to_string(v.profile.kind)));
    jw.key("seed"); jw.value(static_cast<std::uint64_t>(v.profile.rng_seed));
    jw.key("params");
    jw.begin_object();
    for (const auto& [name, value] : v.profile.params) {
        jw.key(name);
        jw.value(value);
    }
    jw.end();
    jw.end();
    write_text_file(out_dir / (base + ".json"), jw.str() + "\n");
}

int run_augment(const AugmentArgs& args) {
    fs::create_directories(args.out_dir);

    struct Job {
        std::string stem;
        int id;
        fs::path image, mask;
    };
    std::vector<Job> jobs;
    if (!args.single_image.empty()) {
        if (args.single_mask.empty()) throw DataError("--mask is required with --image");
        int id = args.single_id >= 0
                     ? args.single_id
                     : parse_image_numeric_id(fs::path(args.single_image).stem().string());
        if (id < 0) throw DataError("cannot infer image id; pass --id");
        jobs.push_back({fs::path(args.single_image).stem().string(), id, args.single_image,
                        args.single_mask});
    } else {
        if (args.images_dir.empty()) throw DataError("pass --images DIR or --image/--mask");
        for (const auto& p : list_rasters(args.images_dir)) {
            std::string stem = p.stem().string();
            if (stem.ends_with("_mask") || stem.find("_aug") != std::string::npos) continue;
            fs::path mask = p.parent_path() / (stem + "_mask.png");
            if (!fs::exists(mask)) throw DataError("no mask for " + p.string());
            int id = parse_image_numeric_id(stem);
            if (id < 0) throw DataError("cannot parse numeric id from " + stem);
            jobs.push_back({stem, id, p, mask});
        }
        if (jobs.empty()) throw DataError("no image/mask pairs in " + args.images_dir);
    }

    // parallel across variants; determinism comes from derived seeds
    struct Unit {
        std::size_t job;
        int variant;
    };
    std::vector<Unit> units;
    for (std::size_t j = 0; j < jobs.size(); ++j)
        for (int k = 0; k < args.count; ++k) units.push_back({j, k});

    std::vector<std::pair<RgbImage, BinaryMask>> sources(jobs.size());
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        DecodedImage img = load_image(jobs[j].image);
        RgbImage rgb;
        if (std::holds_alternative<RgbImage>(img)) {
            rgb = std::get<RgbImage>(img);
        } else {
            const GrayImage& g = std::get<GrayImage>(img);
            rgb = RgbImage(g.width, g.height);
            for (std::size_t i = 0; i < g.data.size(); ++i) {
                rgb.data[3 * i] = rgb.data[3 * i + 1] = rgb.data[3 * i + 2] = g.data[i];
            }
        }
        sources[j] = {std::move(rgb), load_mask(jobs[j].mask)};
    }

    parallel_for_index(units.size(), resolve_thread_count(args.threads), [&](std::size_t u) {
        const Unit& unit = units[u];
        const Job& job = jobs[unit.job];
        std::uint64_t seed = derive_seed(args.master_seed, static_cast<std::uint64_t>(job.id),
                                         static_cast<std::uint64_t>(unit.variant));
        AugmentVariant v = make_offline_variant(sources[unit.job].first, sources[unit.job].second,
                                                job.id, seed);
        write_variant(args.out_dir, job.stem, unit.variant, v);
    });

    std::cerr << "wrote " << units.size() << " variants for " << jobs.size() << " images -> "
              << args.out_dir << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct LossCheckArgs {
    int trials = 100;
    int size = 8;
    std::uint64_t seed = 7;
    double tolerance = 1e-5;
    bool focal_alpha_positive_only = false;
};

int run_loss_check(const LossCheckArgs& args) {
    LossParams params;
    params.focal_alpha_positive_only = args.focal_alpha_positive_only;

    struct Named {
        const char* name;
        std::function<LossResult(const ProbMap&, const BinaryMask&)> fn;
    };
    const Named losses[] = {
        {"ce", [&](const ProbMap& p, const BinaryMask& g) { return ce_loss(p, g); }},
        {"focal", [&](const ProbMap& p, const BinaryMask& g) { return focal_loss(p, g, params); }},
        {"dice", [&](const ProbMap& p, const BinaryMask& g) { return dice_loss(p, g, params); }},
        {"dice_focal",
         [&](const ProbMap& p, const BinaryMask& g) { return dice_focal_loss(p, g, params); }},
        {"tversky",
         [&](const ProbMap& p, const BinaryMask& g) { return tversky_loss(p, g, params); }},
    };

    Pcg32 rng(args.seed);
    const double h = 1e-4;
    std::map<std::string, double> worst;
    for (int trial = 0; trial < args.trials; ++trial) {
        ProbMap p(args.size, args.size);
        for (auto& v : p.data) v = rng.uniform(0.05, 0.95);
        BinaryMask g(args.size, args.size);
        for (auto& v : g.data) v = rng.bernoulli(0.4) ? 1 : 0;

        for (const auto& loss : losses) {
            LossResult res = loss.fn(p, g);
            ProbMap work = p;
            for (std::size_t i = 0; i < p.data.size(); ++i) {
                double orig = work.data[i];
                work.data[i] = orig + h;
                double up = loss.fn(work, g).value;
                work.data[i] = orig - h;
                double down = loss.fn(work, g).value;
                work.data[i] = orig;
                double fd = (up - down) / (2.0 * h);
                worst[loss.name] = std::max(worst[loss.name], std::fabs(res.gradient[i] - fd));
            }
        }
    }

    bool ok = true;
    std::printf("gradient check: %d trials on %dx%d maps, h = %g, tolerance = %g\n", args.trials,
                args.size, args.size, h, args.tolerance);
    for (const auto& [name, dev] : worst) {
        bool pass = dev <= args.tolerance;
        ok = ok && pass;
        std::printf("  %-10s max |analytic - fd| = %.3e  %s\n", name.c_str(), dev,
                    pass ? "ok" : "FAIL");
    }

    // fixed hand values from the loss definitions
    ProbMap half(1, 1, {0.5});
    BinaryMask pos(1, 1, {1});
    double ce = ce_loss(half, pos).value;
    double focal = focal_loss(half, pos, params).value;
    std::printf("  ce(p=0.5, g=1)    = %.6f (ln 2 = %.6f)\n", ce, std::log(2.0));
    if (!args.focal_alpha_positive_only)
        std::printf("  focal(p=0.5, g=1) = %.6f (0.25*0.25*ln 2 = %.6f)\n", focal,
                    0.0625 * std::log(2.0));
    return ok ? kExitOk : kExitData;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary-aware evaluation for binary stroke segmentation"};
    app.require_subcommand(1);

    EvaluateArgs ev;
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "score a directory of predicted masks against ground truth");
    evaluate->add_option("--pred", ev.pred_dir, "directory of predicted masks")->required();
    evaluate->add_option("--gt", ev.gt_dir, "directory of ground-truth masks")->required();
    evaluate->add_option("--out", ev.out_path, "output records JSON")->required();
    evaluate->add_option("--method", ev.method, "method name stored in records");
    evaluate->add_option("--seed", ev.seed, "seed tag stored in records");
    evaluate->add_option("--band", ev.band, "B-IoU band variant: both (default) or gt-only")
        ->check(CLI::IsMember({"both", "gt-only"}));
    evaluate->add_option("--tau", ev.tau,
                         "override BF1 tolerance in pixels (default: max(1, round(2*max(H,W)/1536)))");
    evaluate->add_option("--threads", ev.threads, "worker threads (default: STROKEBENCH_THREADS or hardware)");
    evaluate->add_option("--gray-weights", ev.gray, "grayscale weights r g b (default BT.601 0.299 0.587 0.114)")
        ->expected(3);

    BaselineArgs bl;
    CLI::App* baseline = app.add_subcommand(
        "baseline", "run a classical binarizer (otsu | adaptive | sauvola) and score it");
    baseline->add_option("--images", bl.images_dir, "directory of input photos")->required();
    baseline->add_option("--gt", bl.gt_dir, "directory of ground-truth masks")->required();
    baseline->add_option("--method", bl.method, "otsu | adaptive | sauvola")
        ->required()
        ->check(CLI::IsMember({"otsu", "adaptive", "sauvola"}));
    baseline->add_option("--out", bl.out_path, "output records JSON")->required();
    baseline->add_option("--masks-out", bl.masks_out, "directory for predicted masks");
    baseline->add_flag("--overlays", bl.overlays, "also write TP/FN/FP error overlays");
    baseline->add_option("--window", bl.sauvola.window, "sauvola window (odd, default 51)");
    baseline->add_option("--k", bl.sauvola.k, "sauvola k (default 0.2)");
    baseline->add_option("--r", bl.sauvola.r, "sauvola dynamic range R (default 128)");
    baseline->add_option("--block", bl.adaptive.block, "adaptive block size (odd, default 51)");
    baseline->add_option("--c", bl.adaptive.c, "adaptive offset C (default 15)");
    baseline->add_option("--band", bl.band, "B-IoU band variant")
        ->check(CLI::IsMember({"both", "gt-only"}));
    baseline->add_option("--threads", bl.threads, "worker threads");
    baseline->add_option("--gray-weights", bl.gray, "grayscale weights r g b")->expected(3);

    CompareArgs cp;
    CLI::App* compare = app.add_subcommand(
        "compare", "paired Wilcoxon signed-rank test between two record files");
    compare->add_option("a", cp.file_a, "records JSON for method A")->required();
    compare->add_option("b", cp.file_b, "records JSON for method B")->required();
    compare->add_option("--metric", cp.metric, "f1 | iou | bf1 | b_iou (default f1)");
    compare->add_option("--comparisons", cp.comparisons,
                        "Bonferroni family size m; alpha_corr = 0.05/m (default 10)");
    compare->add_option("--out", cp.out_path, "optional comparison JSON");

    ReportArgs rp;
    CLI::App* report = app.add_subcommand("report", "full evaluation report from record files");
    report->add_option("--records", rp.record_files, "one or more records JSON files")
        ->required()
        ->expected(-1);
    report->add_option("--out", rp.out_path, "output report JSON");
    report->add_option("--split", rp.split_path,
                       "core/thin split JSON {\"core\": [...], \"thin\": [...]} "
                       "(default: ids 3,13-17,28 / 22,24,27,33,36)");
    report->add_option("--metric", rp.metric, "metric for statistics (default f1)");
    report->add_option("--reference", rp.reference, "reference method for robustness wins");

    CharacterizeArgs ch;
    CLI::App* characterize =
        app.add_subcommand("characterize", "stroke coverage and width statistics for masks");
    characterize->add_option("--masks", ch.masks_dir, "directory of ground-truth masks")
        ->required();
    characterize->add_option("--out", ch.out_path, "optional JSON output");
    characterize->add_option("--split", ch.split_path, "core/thin split JSON");
    characterize->add_option("--threads", ch.threads, "worker threads");
    characterize->add_option("--gray-weights", ch.gray, "grayscale weights r g b")->expected(3);

    AugmentArgs au;
    CLI::App* augment = app.add_subcommand(
        "augment", "generate seeded offline augmentation variants (weak 70% / strong 30%)");
    augment->add_option("--images", au.images_dir,
                        "directory with image_<id>.png + image_<id>_mask.png pairs");
    augment->add_option("--image", au.single_image, "single input image");
    augment->add_option("--mask", au.single_mask, "mask for --image");
    augment->add_option("--id", au.single_id, "numeric image id for --image");
    augment->add_option("--out", au.out_dir, "output directory")->required();
    augment->add_option("--count", au.count, "variants per image (default 10)");
    augment->add_option("--master-seed", au.master_seed, "master seed (default 42)");
    augment->add_option("--threads", au.threads, "worker threads");

    LossCheckArgs lc;
    CLI::App* loss_check = app.add_subcommand(
        "loss-check", "verify analytic loss gradients against finite differences");
    loss_check->add_option("--trials", lc.trials, "random maps per loss (default 100)");
    loss_check->add_option("--size", lc.size, "map side length (default 8)");
    loss_check->add_option("--seed", lc.seed, "rng seed (default 7)");
    loss_check->add_option("--tolerance", lc.tolerance, "max |analytic - fd| (default 1e-5)");
    loss_check->add_flag("--focal-alpha-positive-only", lc.focal_alpha_positive_only,
                         "use the alpha_t focal convention instead of the uniform alpha");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (evaluate->parsed()) return run_evaluate(ev);
        if (baseline->parsed()) return run_baseline(bl);
        if (compare->parsed()) return run_compare(cp);
        if (report->parsed()) return run_report(rp);
        if (characterize->parsed()) return run_characterize(ch);
        if (augment->parsed()) return run_augment(au);
        if (loss_check->parsed()) return run_loss_check(lc);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
