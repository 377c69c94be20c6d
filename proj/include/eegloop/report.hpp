#pragma once

// Session reports: a summary table (subject | activity | cognitive domains |
// dominant hemisphere | dominant activity) plus a per-band change appendix,
// rendered as canonical JSON and plain text. Both renderings are
// byte-deterministic for a fixed state and timestamp.

#include <string>
#include <vector>

#include "eegloop/core.hpp"
#include "eegloop/json_codec.hpp"
#include "eegloop/session.hpp"

namespace eegloop {

// Processing parameters echoed into every report so a result can be
// reproduced from the report alone.
struct ConfigEcho {
    double sample_rate_hz = 256.0;
    std::size_t epoch_len = 512;
    std::size_t hop = 256;
    double artifact_threshold_uv = 400.0;
    int mains_hz = 50;
    std::string band_value = "amplitude";
    std::uint64_t seed = 0;

    bool operator==(const ConfigEcho&) const = default;
};

struct ActivityReportEntry {
    ActivityKind activity;
    DominanceVerdict verdict;
    std::size_t n_epochs_total = 0;
    std::size_t n_epochs_clean = 0;
    BandStats baseline_stats;
    BandStats activity_stats;

    bool operator==(const ActivityReportEntry&) const = default;
};

struct SubjectReport {
    SubjectProfile subject;
    std::string generated_at;  // excluded from any determinism comparison
    ConfigEcho config;
    std::string baseline_activity;
    std::vector<ActivityReportEntry> entries;

    bool operator==(const SubjectReport&) const = default;
};

inline SubjectReport build_report(const SessionState& state, const ConfigEcho& config,
                                  const std::string& generated_at) {
    if (state.evaluations.empty())
        throw PreconditionError("report: no evaluations to report");
    SubjectReport rep;
    rep.subject = state.subject;
    rep.generated_at = generated_at;
    rep.config = config;
    rep.baseline_activity = state.catalog.baseline().name;
    for (const Evaluation& e : state.evaluations) {
        ActivityReportEntry entry;
        entry.activity = e.activity;
        entry.verdict = e.verdict;
        entry.n_epochs_total = e.summary.n_epochs_total;
        entry.n_epochs_clean = e.summary.n_epochs_clean;
        entry.baseline_stats = e.baseline_used.stats;
        entry.activity_stats = e.summary.stats;
        rep.entries.push_back(std::move(entry));
    }
    return rep;
}

inline constexpr std::string_view kTableHeader =
    "Subject | Activity | Cognitive Domains | Dominant Hemisphere | Dominant Activity";

inline std::string table_row(const SubjectReport& rep, const ActivityReportEntry& e) {
    const std::string& who =
        rep.subject.display_name.empty() ? rep.subject.subject_id : rep.subject.display_name;
    return who + " | " + e.activity.name + " | " + join_domains(e.activity.cognitive_domains) +
           " | " + std::string(hemisphere_name(e.verdict.dominant_hemisphere)) + " | " +
           std::string(dominant_activity_name(e.verdict.dominant_activity));
}

inline std::string render_text(const SubjectReport& rep) {
    std::string out;
    out += std::string(kTableHeader) + "\n";
    for (const auto& e : rep.entries) out += table_row(rep, e) + "\n";

    for (const auto& e : rep.entries) {
        out += "\n# Band changes: " + e.activity.name + " vs " + rep.baseline_activity +
               " (clean epochs " + std::to_string(e.n_epochs_clean) + "/" +
               std::to_string(e.n_epochs_total) + ")\n";
        out += "electrode,band,baseline_mean,baseline_std,activity_mean,activity_std,"
               "delta_mean,delta_std\n";
        for (ElectrodeId el : kDataElectrodes) {
            for (FrequencyBand b : kAllBands) {
                const BandStat& base = e.baseline_stats.at(el, b);
                const BandStat& act = e.activity_stats.at(el, b);
                out += std::string(electrode_name(el)) + "," + std::string(band_name(b)) +
                       "," + format_double(base.mean) + "," + format_double(base.stddev) +
                       "," + format_double(act.mean) + "," + format_double(act.stddev) +
                       "," + format_double(act.mean - base.mean) + "," +
                       format_double(act.stddev - base.stddev) + "\n";
            }
        }
    }
    out += "\ngenerated_at: " + rep.generated_at + "\n";
    return out;
}

inline Json config_echo_to_json(const ConfigEcho& c) {
    return Json{{"sample_rate_hz", c.sample_rate_hz}, {"epoch_len", c.epoch_len},
                {"hop", c.hop},                       {"artifact_threshold_uv", c.artifact_threshold_uv},
                {"mains_hz", c.mains_hz},             {"band_value", c.band_value},
                {"seed", c.seed}};
}

inline ConfigEcho config_echo_from_json(const Json& j) {
    ConfigEcho c;
    c.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    c.epoch_len = j.at("epoch_len").get<std::size_t>();
    c.hop = j.at("hop").get<std::size_t>();
    c.artifact_threshold_uv = j.at("artifact_threshold_uv").get<double>();
    c.mains_hz = j.at("mains_hz").get<int>();
    c.band_value = j.at("band_value").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

inline Json report_to_json(const SubjectReport& rep) {
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
        entries.push_back(Json{
            {"activity", activity_to_json(e.activity)},
            {"verdict", verdict_to_json(e.verdict, rep.subject.subject_id)},
            {"n_epochs_total", e.n_epochs_total},
            {"n_epochs_clean", e.n_epochs_clean},
            {"baseline_stats", band_stats_to_json(e.baseline_stats)},
            {"activity_stats", band_stats_to_json(e.activity_stats)}});
    }
    Json table = Json::array();
    for (const auto& e : rep.entries) table.push_back(table_row(rep, e));
    return Json{{"subject", subject_to_json(rep.subject)},
                {"generated_at", rep.generated_at},
                {"config", config_echo_to_json(rep.config)},
                {"baseline_activity", rep.baseline_activity},
                {"table", std::move(table)},
                {"entries", std::move(entries)}};
}

inline SubjectReport report_from_json(const Json& j) {
    SubjectReport rep;
    rep.subject = subject_from_json(j.at("subject"));
    rep.generated_at = j.at("generated_at").get<std::string>();
    rep.config = config_echo_from_json(j.at("config"));
    rep.baseline_activity = j.at("baseline_activity").get<std::string>();
    for (const auto& je : j.at("entries")) {
        ActivityReportEntry e;
        e.activity = activity_from_json(je.at("activity"));
        e.verdict = verdict_from_json(je.at("verdict"));
        e.n_epochs_total = je.at("n_epochs_total").get<std::size_t>();
        e.n_epochs_clean = je.at("n_epochs_clean").get<std::size_t>();
        e.baseline_stats = band_stats_from_json(je.at("baseline_stats"));
        e.activity_stats = band_stats_from_json(je.at("activity_stats"));
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

inline std::string render_json(const SubjectReport& rep) {
    return report_to_json(rep).dump(2) + "\n";
}

enum class ReportFormat { Json, Text };

inline std::string render_report(const SessionState& state, const ConfigEcho& config,
                                 const std::string& generated_at, ReportFormat format) {
    const SubjectReport rep = build_report(state, config, generated_at);
    return format == ReportFormat::Json ? render_json(rep) : render_text(rep);
}

}  // namespace eegloop
