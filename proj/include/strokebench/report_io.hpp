// SPDX-License-Identifier: Apache-2.0
//
// Serialization of metric records and report tables. Output JSON is written
// by a small deterministic emitter (keys in fixed order, floating values at
// exactly 6 decimal places) so byte-identical reruns are guaranteed; input
// JSON is parsed with nlohmann::json.

#pragma once

#include "strokebench/protocol.hpp"

#include <json.hpp>

#include <climits>
#include <cstdio>
#include <sstream>

namespace strokebench {

namespace jsonio {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

// Minimal deterministic JSON emitter; values are appended pre-formatted.
class Writer {
public:
    void begin_object() { sep(); out_ += '{'; stack_.push_back('}'); fresh_ = true; }
    void begin_array() { sep(); out_ += '['; stack_.push_back(']'); fresh_ = true; }
    void end() {
        out_ += stack_.back();
        stack_.pop_back();
        fresh_ = false;
    }
    void key(const std::string& k) {
        sep();
        out_ += escape(k);
        out_ += ':';
        fresh_ = true; // suppress the comma before the value
    }
    void value_raw(const std::string& v) { sep(); out_ += v; }
    void value(const std::string& v) { value_raw(escape(v)); }
    void value(double v) { value_raw(fixed6(v)); }
    void value(std::int64_t v) { value_raw(std::to_string(v)); }
    void value(std::uint64_t v) { value_raw(std::to_string(v)); }
    void value(int v) { value_raw(std::to_string(v)); }
    void value(bool v) { value_raw(v ? "true" : "false"); }
    void value_null() { value_raw("null"); }

    const std::string& str() const { return out_; }

private:
    void sep() {
        if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[' &&
            out_.back() != ':')
            out_ += ',';
        fresh_ = false;
    }
    std::string out_;
    std::vector<char> stack_;
    bool fresh_ = true;
};

inline void write_record(Writer& w, const MetricRecord& r) {
    w.begin_object();
    w.key("image_id"); w.value(r.image_id);
    w.key("method"); w.value(r.method);
    w.key("seed");
    if (r.seed) w.value(*r.seed); else w.value_null();
    w.key("f1"); w.value(r.f1);
    w.key("iou"); w.value(r.iou);
    w.key("bf1"); w.value(r.bf1);
    w.key("b_iou"); w.value(r.b_iou);
    w.key("tp"); w.value(static_cast<std::uint64_t>(r.tp));
    w.key("fp"); w.value(static_cast<std::uint64_t>(r.fp));
    w.key("fn"); w.value(static_cast<std::uint64_t>(r.fn));
    w.key("eval_width"); w.value(r.eval_width);
    w.key("eval_height"); w.value(r.eval_height);
    w.key("tau"); w.value(r.tau);
    w.key("band_width"); w.value(r.band_width);
    w.end();
}

inline void write_manifest(Writer& w, const RunManifest& m) {
    w.begin_object();
    w.key("dataset_root"); w.value(m.dataset_root);
    w.key("methods");
    w.begin_array();
    for (const auto& name : m.methods) w.value(name);
    w.end();
    w.key("seeds");
    w.begin_array();
    for (int s : m.seeds) w.value(s);
    w.end();
    w.key("split");
    w.begin_object();
    w.key("core");
    w.begin_array();
    for (int id : m.split.core_ids) w.value(id);
    w.end();
    w.key("thin");
    w.begin_array();
    for (int id : m.split.thin_ids) w.value(id);
    w.end();
    w.end();
    w.key("gray_weights");
    w.begin_array();
    w.value(m.gray_weights.r); w.value(m.gray_weights.g); w.value(m.gray_weights.b);
    w.end();
    w.key("band_variant"); w.value(std::string(to_string(m.band)));
    w.key("tau_override"); w.value(m.tau_override);
    w.key("metric"); w.value(m.metric);
    w.key("reference_method"); w.value(m.reference_method);
    w.end();
}

} // namespace jsonio

// Records file: {"manifest": ..., "records": [...]}.
inline std::string write_records_json(const RunManifest& manifest,
                                      const std::vector<MetricRecord>& records) {
    std::vector<const MetricRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const MetricRecord* a, const MetricRecord* b) {
        if (a->method != b->method) return a->method < b->method;
        if (a->image_id != b->image_id) return a->image_id < b->image_id;
        return a->seed.value_or(INT_MIN) < b->seed.value_or(INT_MIN);
    });

    jsonio::Writer w;
    w.begin_object();
    w.key("manifest");
    jsonio::write_manifest(w, manifest);
    w.key("records");
    w.begin_array();
    for (const MetricRecord* r : sorted) jsonio::write_record(w, *r);
    w.end();
    w.end();
    return w.str() + "\n";
}

// Full report: {"manifest", "records", "tables": {...}}.
inline std::string write_report_json(const RunManifest& manifest,
                                     const std::vector<MetricRecord>& records,
                                     const ReportTables& tables) {
    std::vector<const MetricRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const MetricRecord* a, const MetricRecord* b) {
        if (a->method != b->method) return a->method < b->method;
        if (a->image_id != b->image_id) return a->image_id < b->image_id;
        return a->seed.value_or(INT_MIN) < b->seed.value_or(INT_MIN);
    });

    jsonio::Writer w;
    w.begin_object();
    w.key("manifest");
    jsonio::write_manifest(w, manifest);
    w.key("records");
    w.begin_array();
    for (const MetricRecord* r : sorted) jsonio::write_record(w, *r);
    w.end();
    w.key("tables");
    w.begin_object();

    w.key("per_method");
    w.begin_array();
    for (const auto& s : tables.per_method) {
        w.begin_object();
        w.key("method"); w.value(s.method);
        w.key("n_images"); w.value(s.n_images);
        w.key("f1_mean"); w.value(s.f1_mean);
        w.key("f1_std"); w.value(s.f1_std);
        w.key("iou_mean"); w.value(s.iou_mean);
        w.key("iou_std"); w.value(s.iou_std);
        w.key("bf1_mean"); w.value(s.bf1_mean);
        w.key("bf1_std"); w.value(s.bf1_std);
        w.key("b_iou_mean"); w.value(s.b_iou_mean);
        w.key("b_iou_std"); w.value(s.b_iou_std);
        w.end();
    }
    w.end();

    w.key("core_thin");
    w.begin_array();
    for (const auto& r : tables.core_thin) {
        w.begin_object();
        w.key("method"); w.value(r.method);
        w.key("core_mean"); w.value(r.core_mean);
        w.key("thin_mean"); w.value(r.thin_mean);
        w.key("gap"); w.value(r.gap);
        w.key("core_n"); w.value(r.core_n);
        w.key("thin_n"); w.value(r.thin_n);
        w.end();
    }
    w.end();

    w.key("robustness");
    w.begin_array();
    for (const auto& r : tables.robustness) {
        w.begin_object();
        w.key("method"); w.value(r.method);
        w.key("mean"); w.value(r.profile.mean);
        w.key("median"); w.value(r.profile.median);
        w.key("iqr"); w.value(r.profile.iqr);
        w.key("min"); w.value(r.profile.min);
        w.key("max"); w.value(r.profile.max);
        w.key("wins"); w.value(r.profile.wins);
        w.key("n"); w.value(r.profile.n);
        w.end();
    }
    w.end();

    w.key("pairwise");
    w.begin_array();
    for (const auto& r : tables.pairwise) {
        w.begin_object();
        w.key("a"); w.value(r.method_a);
        w.key("b"); w.value(r.method_b);
        w.key("w"); w.value(r.w_statistic);
        w.key("p"); w.value(r.p_value);
        w.key("significant"); w.value(r.significant);
        w.key("mean_delta"); w.value(r.mean_delta);
        w.key("std_delta"); w.value(r.std_delta);
        w.key("median_delta"); w.value(r.median_delta);
        w.end();
    }
    w.end();

    w.key("metric"); w.value(tables.metric);
    w.key("reference_method"); w.value(tables.reference_method);
    w.key("m_comparisons"); w.value(tables.m_comparisons);
    w.key("alpha_corr"); w.value(tables.alpha_corr);
    w.end(); // tables
    w.end(); // root
    return w.str() + "\n";
}

struct RecordsFile {
    RunManifest manifest;
    std::vector<MetricRecord> records;
};

inline RecordsFile parse_records_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RecordsFile out;
    if (j.contains("manifest")) {
        const auto& m = j["manifest"];
        out.manifest.dataset_root = m.value("dataset_root", std::string());
        if (m.contains("methods"))
            for (const auto& v : m["methods"]) out.manifest.methods.push_back(v.get<std::string>());
        if (m.contains("seeds")) {
            out.manifest.seeds.clear();
            for (const auto& v : m["seeds"]) out.manifest.seeds.push_back(v.get<int>());
        }
        if (m.contains("split")) {
            out.manifest.split.core_ids.clear();
            out.manifest.split.thin_ids.clear();
            for (const auto& v : m["split"].value("core", nlohmann::json::array()))
                out.manifest.split.core_ids.push_back(v.get<int>());
            for (const auto& v : m["split"].value("thin", nlohmann::json::array()))
                out.manifest.split.thin_ids.push_back(v.get<int>());
        }
        if (m.contains("gray_weights") && m["gray_weights"].size() == 3) {
            out.manifest.gray_weights.r = m["gray_weights"][0].get<double>();
            out.manifest.gray_weights.g = m["gray_weights"][1].get<double>();
            out.manifest.gray_weights.b = m["gray_weights"][2].get<double>();
        }
        if (m.value("band_variant", std::string("both")) == "gt-only")
            out.manifest.band = BandVariant::GtOnly;
        out.manifest.tau_override = m.value("tau_override", 0);
        out.manifest.metric = m.value("metric", std::string("f1"));
        out.manifest.reference_method = m.value("reference_method", std::string());
    }
    if (!j.contains("records") || !j["records"].is_array())
        throw std::invalid_argument("records file: missing 'records' array");
    for (const auto& rj : j["records"]) {
        MetricRecord r;
        r.image_id = rj.at("image_id").get<std::string>();
        r.method = rj.at("method").get<std::string>();
        if (rj.contains("seed") && !rj["seed"].is_null()) r.seed = rj["seed"].get<int>();
        r.f1 = rj.at("f1").get<double>();
        r.iou = rj.at("iou").get<double>();
        r.bf1 = rj.at("bf1").get<double>();
        r.b_iou = rj.at("b_iou").get<double>();
        r.tp = rj.value("tp", 0ull);
        r.fp = rj.value("fp", 0ull);
        r.fn = rj.value("fn", 0ull);
        r.eval_width = rj.value("eval_width", 0);
        r.eval_height = rj.value("eval_height", 0);
        r.tau = rj.value("tau", 1);
        r.band_width = rj.value("band_width", 0.0);
        out.records.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Plain-text tables (3 decimals, the precision used in the write-ups).

namespace texttab {

inline std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

inline std::string pad(const std::string& s, std::size_t width) {
    if (s.size() >= width) return s + " ";
    return s + std::string(width - s.size(), ' ');
}

} // namespace texttab

inline std::string render_text_tables(const ReportTables& t) {
    using texttab::fixed3;
    using texttab::pad;
    std::ostringstream os;

    std::size_t name_w = 8;
    for (const auto& s : t.per_method) name_w = std::max(name_w, s.method.size() + 2);

    os << "Per-method metrics (seed-averaged per image; mean +- std across images)\n";
    os << pad("method", name_w) << pad("F1", 16) << pad("IoU", 16) << pad("BF1", 16)
       << pad("B-IoU", 16) << "\n";
    for (const auto& s : t.per_method) {
        os << pad(s.method, name_w) << pad(fixed3(s.f1_mean) + " +- " + fixed3(s.f1_std), 16)
           << pad(fixed3(s.iou_mean) + " +- " + fixed3(s.iou_std), 16)
           << pad(fixed3(s.bf1_mean) + " +- " + fixed3(s.bf1_std), 16)
           << pad(fixed3(s.b_iou_mean) + " +- " + fixed3(s.b_iou_std), 16) << "\n";
    }

    bool have_core_thin = false;
    for (const auto& r : t.core_thin)
        if (r.core_n > 0 && r.thin_n > 0) have_core_thin = true;
    if (have_core_thin) {
        os << "\nCore vs thin (" << t.metric << ")\n";
        os << pad("method", name_w) << pad("core", 10) << pad("thin", 10) << pad("gap", 10) << "\n";
        for (const auto& r : t.core_thin) {
            if (r.core_n == 0 || r.thin_n == 0) continue;
            os << pad(r.method, name_w) << pad(fixed3(r.core_mean), 10) << pad(fixed3(r.thin_mean), 10)
               << pad(fixed3(r.gap), 10) << "\n";
        }
    }

    if (!t.robustness.empty()) {
        os << "\nRobustness profile (" << t.metric << "; wins vs " << t.reference_method << ")\n";
        os << pad("method", name_w) << pad("mean", 9) << pad("median", 9) << pad("IQR", 9)
           << pad("min", 9) << pad("max", 9) << "wins\n";
        for (const auto& r : t.robustness) {
            os << pad(r.method, name_w) << pad(fixed3(r.profile.mean), 9)
               << pad(fixed3(r.profile.median), 9) << pad(fixed3(r.profile.iqr), 9)
               << pad(fixed3(r.profile.min), 9) << pad(fixed3(r.profile.max), 9) << r.profile.wins
               << "/" << r.profile.n << "\n";
        }
    }

    if (!t.pairwise.empty()) {
        os << "\nPairwise Wilcoxon (" << t.metric << "; two-sided, Bonferroni m=" << t.m_comparisons
           << ", alpha_corr=" << fixed3(t.alpha_corr) << ")\n";
        std::size_t pair_w = 12;
        for (const auto& r : t.pairwise)
            pair_w = std::max(pair_w, r.method_a.size() + r.method_b.size() + 6);
        os << pad("pair", pair_w) << pad("W", 8) << pad("p", 12) << pad("verdict", 9)
           << pad("mean d", 10) << pad("std d", 10) << "median d\n";
        for (const auto& r : t.pairwise) {
            char pbuf[32];
            std::snprintf(pbuf, sizeof(pbuf), "%.6f", r.p_value);
            os << pad(r.method_a + " vs " + r.method_b, pair_w) << pad(fixed3(r.w_statistic), 8)
               << pad(pbuf, 12) << pad(r.significant ? "signif." : "n.s.", 9)
               << pad(fixed3(r.mean_delta), 10) << pad(fixed3(r.std_delta), 10)
               << fixed3(r.median_delta) << "\n";
        }
    }
    return os.str();
}

} // namespace strokebench
