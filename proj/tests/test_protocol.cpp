// SPDX-License-Identifier: Apache-2.0

#include "strokebench/protocol.hpp"
#include "strokebench/report_io.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace strokebench;

namespace {
BinaryMask bar(int w, int h, int y0, int rows) {
    BinaryMask m(w, h);
    for (int y = y0; y < y0 + rows; ++y)
        for (int x = 0; x < w; ++x) m.set(x, y, true);
    return m;
}

// Mask with exactly tp pixels kept from gt, fn dropped, fp added outside.
BinaryMask derived_pred(const BinaryMask& gt, std::size_t keep, std::size_t add_fp) {
    BinaryMask pred(gt.width, gt.height);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < gt.data.size() && kept < keep; ++i)
        if (gt.data[i]) {
            pred.data[i] = 1;
            ++kept;
        }
    std::size_t added = 0;
    for (std::size_t i = 0; i < gt.data.size() && added < add_fp; ++i)
        if (!gt.data[i]) {
            pred.data[i] = 1;
            ++added;
        }
    return pred;
}
} // namespace

TEST_CASE("stroke coverage") {
    BinaryMask m(10, 10);
    CHECK(stroke_coverage(m) == 0.0);
    m.set(0, 0, true);
    m.set(5, 5, true);
    CHECK(stroke_coverage(m) == Catch::Approx(0.02));
}

TEST_CASE("stroke width of synthetic bars") {
    // wide bar with guard border: interior EDT to background is 3 at the
    // center row, so the local width reads 2*3-1 = 5
    BinaryMask five = bar(64, 11, 3, 5);
    StrokeStats s = stroke_width(five);
    REQUIRE(s.width_defined);
    CHECK(s.mean_width == Catch::Approx(5.0).margin(0.35)); // endpoints retract slightly
    CHECK(s.std_width < 1.0);

    BinaryMask one = bar(32, 7, 3, 1);
    StrokeStats s1 = stroke_width(one);
    REQUIRE(s1.width_defined);
    CHECK(s1.mean_width == Catch::Approx(1.0).margin(1e-12));
    CHECK(s1.std_width == Catch::Approx(0.0).margin(1e-12));

    BinaryMask empty(8, 8);
    CHECK_FALSE(stroke_width(empty).width_defined);
}

TEST_CASE("evaluate_pair on identical masks") {
    std::mt19937 rng(81);
    BinaryMask gt = oracles::random_blob_mask(rng, 40, 30, 3);
    MetricRecord r = evaluate_pair(gt, gt, {}, "image_1", "self");
    CHECK(r.f1 == 1.0);
    CHECK(r.iou == 1.0);
    CHECK(r.bf1 == 1.0);
    CHECK(r.b_iou == 1.0);
    CHECK(r.tau == tolerance(30, 40));
    CHECK(r.eval_width == 40);
    CHECK(r.eval_height == 30);
}

TEST_CASE("evaluate_pair upscales the prediction to gt resolution") {
    BinaryMask gt(64, 48);
    for (int y = 10; y < 20; ++y)
        for (int x = 8; x < 40; ++x) gt.set(x, y, true);
    BinaryMask pred_small = resize_nearest(gt, 32, 24);
    MetricRecord r = evaluate_pair(pred_small, gt, {}, "image_2", "low-res");
    CHECK(r.eval_width == 64);
    CHECK(r.eval_height == 48);
    CHECK(r.tau == tolerance(48, 64));
    CHECK(r.f1 > 0.8); // round-trip of an axis-aligned block loses little

    BinaryMask empty(64, 48);
    MetricRecord re = evaluate_pair(empty, gt, {}, "image_3", "empty");
    CHECK(re.f1 == 0.0);
    CHECK(re.iou == 0.0);
    CHECK(re.bf1 == 0.0);
    CHECK(re.b_iou == 0.0);
}

TEST_CASE("error overlay colors match confusion classes") {
    std::mt19937 rng(83);
    BinaryMask pred = oracles::random_mask(rng, 20, 15, 0.3);
    BinaryMask gt = oracles::random_mask(rng, 20, 15, 0.3);
    RgbImage overlay = error_overlay(pred, gt);
    ConfusionCounts c = confusion(pred, gt);

    std::uint64_t green = 0, red = 0, blue = 0, white = 0;
    for (std::size_t i = 0; i < overlay.data.size(); i += 3) {
        const std::uint8_t* px = overlay.data.data() + i;
        if (px[0] == 0 && px[1] == 255 && px[2] == 0) ++green;
        else if (px[0] == 255 && px[1] == 0 && px[2] == 0) ++red;
        else if (px[0] == 0 && px[1] == 0 && px[2] == 255) ++blue;
        else if (px[0] == 255 && px[1] == 255 && px[2] == 255) ++white;
    }
    CHECK(green == c.tp);
    CHECK(red == c.fn);
    CHECK(blue == c.fp);
    CHECK(white == c.tn);

    RgbImage self = error_overlay(gt, gt);
    for (std::size_t i = 0; i < self.data.size(); i += 3)
        CHECK((self.data[i + 1] == 255)); // only green or white
}

TEST_CASE("aggregate produces consistent single-method tables") {
    BinaryMask gt = bar(32, 32, 10, 6);
    std::vector<MetricRecord> records;
    RunManifest manifest;
    manifest.methods = {"self"};
    manifest.seeds = {42};
    for (int img = 0; img < 3; ++img)
        records.push_back(
            evaluate_pair(gt, gt, {}, "image_" + std::to_string(img), "self", 42));

    ReportTables t = aggregate(records, manifest);
    REQUIRE(t.per_method.size() == 1);
    CHECK(t.per_method[0].f1_mean == 1.0);
    CHECK(t.per_method[0].f1_std == 0.0);
    CHECK(t.pairwise.empty());
    REQUIRE(t.robustness.size() == 1);
    CHECK(t.robustness[0].profile.wins == 0); // strict wins against itself
}

TEST_CASE("aggregate seed-averages before testing") {
    // two methods, 12 images, constant +0.2 f1 delta
    BinaryMask gt(40, 40);
    for (int y = 5; y < 18; ++y)
        for (int x = 0; x < 10; ++x) gt.set(x, y, true); // 130 foreground px

    std::vector<MetricRecord> records;
    RunManifest manifest;
    manifest.methods = {"good", "bad"};
    manifest.seeds = {42};
    for (int img = 0; img < 12; ++img) {
        std::string id = "image_" + std::to_string(img);
        // good: tp=70, fn=60, fp=0  -> f1 = 140/200 = 0.7
        records.push_back(evaluate_pair(derived_pred(gt, 70, 0), gt, {}, id, "good", 42));
        // bad: tp=50, fn=80, fp=20 -> f1 = 100/200 = 0.5
        records.push_back(evaluate_pair(derived_pred(gt, 50, 20), gt, {}, id, "bad", 42));
    }

    ReportTables t = aggregate(records, manifest);
    REQUIRE(t.pairwise.size() == 1);
    CHECK(t.pairwise[0].p_value == Catch::Approx(2.0 / 4096.0).margin(1e-15));
    CHECK(t.m_comparisons == 1);
    CHECK(t.alpha_corr == Catch::Approx(0.05));
    CHECK(t.pairwise[0].significant);
    CHECK(std::fabs(t.pairwise[0].mean_delta) == Catch::Approx(0.2).margin(1e-12));
    CHECK(std::fabs(t.pairwise[0].median_delta) == Catch::Approx(0.2).margin(1e-12));
}

TEST_CASE("aggregate rejects an incomplete grid with explicit cells") {
    BinaryMask gt = bar(16, 16, 4, 4);
    std::vector<MetricRecord> records;
    RunManifest manifest;
    manifest.methods = {"m"};
    manifest.seeds = {42, 123};
    records.push_back(evaluate_pair(gt, gt, {}, "image_0", "m", 42));
    records.push_back(evaluate_pair(gt, gt, {}, "image_0", "m", 123));
    records.push_back(evaluate_pair(gt, gt, {}, "image_1", "m", 42)); // seed 123 missing

    try {
        aggregate(records, manifest);
        FAIL("incomplete grid must throw");
    } catch (const IncompleteGridError& e) {
        REQUIRE(e.cells().size() == 1);
        CHECK(e.cells()[0].method == "m");
        CHECK(e.cells()[0].image_id == "image_1");
        REQUIRE(e.cells()[0].seed.has_value());
        CHECK(*e.cells()[0].seed == 123);
    }
}

TEST_CASE("aggregate core/thin split uses numeric ids") {
    BinaryMask gt = bar(24, 24, 8, 4);
    std::vector<MetricRecord> records;
    RunManifest manifest;
    manifest.methods = {"m"};
    manifest.seeds = {1};
    // core ids 3, 13; thin ids 22, 24 from the default split
    for (int id : {3, 13, 22, 24}) {
        BinaryMask pred = manifest.split.is_core(id) ? gt : derived_pred(gt, 60, 0);
        records.push_back(
            evaluate_pair(pred, gt, {}, "image_" + std::to_string(id), "m", 1));
    }
    ReportTables t = aggregate(records, manifest);
    REQUIRE(t.core_thin.size() == 1);
    CHECK(t.core_thin[0].core_n == 2);
    CHECK(t.core_thin[0].thin_n == 2);
    CHECK(t.core_thin[0].core_mean == 1.0);
    CHECK(t.core_thin[0].gap > 0.0);
}

TEST_CASE("records json round-trips through the writer and parser") {
    BinaryMask gt = bar(20, 20, 5, 3);
    RunManifest manifest;
    manifest.methods = {"m"};
    manifest.seeds = {42};
    std::vector<MetricRecord> records = {
        evaluate_pair(gt, gt, {}, "image_5", "m", 42),
        evaluate_pair(derived_pred(gt, 30, 5), gt, {}, "image_6", "m", 42),
    };
    std::string text = write_records_json(manifest, records);
    RecordsFile parsed = parse_records_json(text);
    REQUIRE(parsed.records.size() == 2);
    CHECK(parsed.records[0].image_id == "image_5");
    CHECK(parsed.records[0].f1 == 1.0);
    CHECK(parsed.records[0].seed.has_value());
    CHECK(parsed.manifest.methods == std::vector<std::string>{"m"});
    CHECK(parsed.manifest.seeds == std::vector<int>{42});

    // six decimal places, deterministic bytes
    CHECK(text.find("\"f1\":1.000000") != std::string::npos);
    CHECK(text == write_records_json(manifest, records));
}

TEST_CASE("report json carries all four table groups") {
    BinaryMask gt = bar(24, 24, 6, 5);
    RunManifest manifest;
    manifest.methods = {"a", "b"};
    manifest.seeds = {1};
    std::vector<MetricRecord> records;
    for (int img = 0; img < 3; ++img) {
        std::string id = "image_" + std::to_string(img);
        records.push_back(evaluate_pair(gt, gt, {}, id, "a", 1));
        records.push_back(evaluate_pair(derived_pred(gt, 40, 0), gt, {}, id, "b", 1));
    }
    ReportTables tables = aggregate(records, manifest);
    std::string json = write_report_json(manifest, records, tables);
    nlohmann::json j = nlohmann::json::parse(json);
    CHECK(j["tables"]["per_method"].size() == 2);
    CHECK(j["tables"]["pairwise"].size() == 1);
    CHECK(j["tables"]["robustness"].size() == 2);
    CHECK(j["tables"]["core_thin"].size() == 2);
    CHECK(j["tables"]["pairwise"][0].contains("median_delta"));

    std::string text = render_text_tables(tables);
    CHECK(text.find("Per-method metrics") != std::string::npos);
    CHECK(text.find("Pairwise Wilcoxon") != std::string::npos);
}

TEST_CASE("numeric id parsing") {
    CHECK(parse_image_numeric_id("image_17") == 17);
    CHECK(parse_image_numeric_id("7") == 7);
    CHECK(parse_image_numeric_id("board") == -1);
}

TEST_CASE("default split matches the published id lists") {
    SplitSpec s = SplitSpec::test_default();
    CHECK(s.core_ids == std::vector<int>{3, 13, 14, 15, 16, 17, 28});
    CHECK(s.thin_ids == std::vector<int>{22, 24, 27, 33, 36});
    s.validate();

    SplitSpec bad{{1, 2}, {2, 3}};
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}
