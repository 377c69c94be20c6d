#pragma once

// End-to-end wiring: validated run configuration and the full
// recording -> session analysis pass used by the CLI and the tests.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eegloop/core.hpp"
#include "eegloop/dsp.hpp"
#include "eegloop/recording.hpp"
#include "eegloop/report.hpp"
#include "eegloop/session.hpp"

namespace eegloop {

struct RunConfig {
    double sample_rate_hz = 256.0;
    std::size_t epoch_len = 512;
    std::size_t hop = 256;
    double artifact_threshold_uv = 400.0;
    int mains_hz = 50;  // 50, 60, or 0 = off
    BandValueMode band_value = BandValueMode::Amplitude;
    std::string catalog_path;  // empty = built-in catalog
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool fixed_timestamp = false;
};

// Fails fast, naming the offending field.
inline void validate_run_config(const RunConfig& cfg) {
    if (!(cfg.sample_rate_hz > 0.0))
        throw InputError("config: sample_rate_hz must be positive");
    if (!millisecond_grid_ok(cfg.sample_rate_hz))
        throw InputError("config: sample_rate_hz must be at most 1000 and, above 750, "
                         "divide 1000 ms evenly (integer millisecond timestamps)");
    if (!is_power_of_two(cfg.epoch_len) || cfg.epoch_len < 16)
        throw InputError("config: epoch_len must be a power of two, at least 16");
    if (cfg.hop < 1 || cfg.hop > cfg.epoch_len)
        throw InputError("config: hop must be in [1, epoch_len]");
    if (!(cfg.artifact_threshold_uv > 0.0))
        throw InputError("config: artifact_threshold_uv must be positive");
    if (cfg.mains_hz != 0 && cfg.mains_hz != 50 && cfg.mains_hz != 60)
        throw InputError("config: mains_hz must be 50, 60 or 0 (off)");
    if (cfg.out_dir.empty())
        throw InputError("config: out_dir must be non-empty");
}

inline DspConfig dsp_config(const RunConfig& cfg) {
    return {cfg.epoch_len, cfg.hop, cfg.artifact_threshold_uv, cfg.mains_hz,
            cfg.band_value};
}

inline ConfigEcho config_echo(const RunConfig& cfg) {
    return {cfg.sample_rate_hz,
            cfg.epoch_len,
            cfg.hop,
            cfg.artifact_threshold_uv,
            cfg.mains_hz,
            cfg.band_value == BandValueMode::Amplitude ? "amplitude" : "power",
            cfg.seed};
}

// Unique non-empty segment labels in order of first appearance.
inline std::vector<std::string> activity_labels(const Recording& rec) {
    std::vector<std::string> labels;
    for (const Segment& seg : rec.segments()) {
        bool seen = false;
        for (const auto& l : labels) seen = seen || l == seg.label;
        if (!seen) labels.push_back(seg.label);
    }
    return labels;
}

// Full analysis pass: summarize the talking baseline, then evaluate every
// training activity present in the recording, in order of first appearance.
inline SessionState analyze_recording(const Recording& rec, const SubjectProfile& subject,
                                      const ActivityCatalog& catalog,
                                      const RunConfig& cfg) {
    validate_run_config(cfg);
    validate_recording(rec);
    const DspConfig dsp = dsp_config(cfg);
    const std::string baseline_name = catalog.baseline().name;

    const std::vector<std::string> labels = activity_labels(rec);
    bool has_baseline = false;
    bool has_training = false;
    for (const auto& l : labels) {
        if (l == baseline_name) has_baseline = true;
        else has_training = true;
    }
    if (!has_baseline)
        throw PreconditionError("analyze: no baseline segment ('" + baseline_name +
                                "') in recording");
    if (!has_training)
        throw PreconditionError("analyze: no training segment in recording");

    SessionState state = make_session(subject, catalog);

    const ActivityKind* base_kind = catalog.find(baseline_name);
    ActivitySummary base =
        summarize_activity(extract_features(rec, baseline_name, dsp), *base_kind);
    set_baseline(state, std::move(base));

    for (const auto& label : labels) {
        if (label == baseline_name) continue;
        const ActivityKind* kind = catalog.find(label);
        if (!kind)
            throw InputError("analyze: activity '" + label + "' not in catalog");
        ActivitySummary summary =
            summarize_activity(extract_features(rec, label, dsp), *kind);
        evaluate_activity(state, std::move(summary));
    }
    return state;
}

}  // namespace eegloop
