#pragma once

// JSON encoding for the documented external interfaces: activity catalog,
// activity summaries, dominance verdicts, sessions and recommendations.
// nlohmann::ordered_json keeps key order canonical so serialized documents
// are byte-deterministic.

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "eegloop/core.hpp"
#include "eegloop/dominance.hpp"
#include "eegloop/dsp.hpp"
#include "eegloop/ingest.hpp"

namespace eegloop {

using Json = nlohmann::ordered_json;

inline Json domains_to_json(const std::vector<CognitiveDomain>& ds) {
    Json arr = Json::array();
    for (CognitiveDomain d : ds) arr.push_back(std::string(domain_abbrev(d)));
    return arr;
}

inline std::vector<CognitiveDomain> domains_from_json(const Json& arr) {
    std::vector<CognitiveDomain> out;
    for (const auto& item : arr) {
        const auto d = parse_domain(item.get<std::string>());
        if (!d)
            throw InputError("json: unknown cognitive domain '" +
                             item.get<std::string>() + "'");
        out.push_back(*d);
    }
    return out;
}

inline Json activity_to_json(const ActivityKind& a) {
    return Json{{"name", a.name},
                {"cognitive_domains", domains_to_json(a.cognitive_domains)},
                {"difficulty", a.difficulty},
                {"difficulty_max", a.difficulty_max},
                {"is_baseline", a.is_baseline}};
}

inline ActivityKind activity_from_json(const Json& j) {
    ActivityKind a;
    a.name = j.at("name").get<std::string>();
    a.cognitive_domains = domains_from_json(j.at("cognitive_domains"));
    a.difficulty = j.value("difficulty", 1);
    a.difficulty_max = j.value("difficulty_max", 5);
    a.is_baseline = j.value("is_baseline", false);
    return a;
}

inline Json catalog_to_json(const ActivityCatalog& c) {
    Json arr = Json::array();
    for (const auto& a : c.activities) arr.push_back(activity_to_json(a));
    return arr;
}

inline ActivityCatalog catalog_from_json(const Json& arr) {
    if (!arr.is_array())
        throw InputError("catalog: expected a JSON array of activities");
    ActivityCatalog c;
    for (const auto& item : arr) c.activities.push_back(activity_from_json(item));
    validate_catalog(c);
    return c;
}

inline ActivityCatalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("catalog: cannot open '" + path.string() + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("catalog: invalid JSON in '" + path.string() + "': " + e.what());
    }
    return catalog_from_json(j);
}

inline void save_catalog(const ActivityCatalog& c, const std::filesystem::path& path) {
    atomic_write_file(path, catalog_to_json(c).dump(2) + "\n");
}

inline Json subject_to_json(const SubjectProfile& s) {
    return Json{{"subject_id", s.subject_id},
                {"display_name", s.display_name},
                {"notes", s.notes}};
}

inline SubjectProfile subject_from_json(const Json& j) {
    return {j.at("subject_id").get<std::string>(),
            j.value("display_name", ""), j.value("notes", "")};
}

// electrodes x bands matrix of {mean, std}
inline Json band_stats_to_json(const BandStats& stats) {
    Json j = Json::object();
    for (ElectrodeId e : kDataElectrodes) {
        Json row = Json::object();
        for (FrequencyBand b : kAllBands) {
            const BandStat& s = stats.at(e, b);
            row[std::string(band_name(b))] = Json{{"mean", s.mean}, {"std", s.stddev}};
        }
        j[std::string(electrode_name(e))] = std::move(row);
    }
    return j;
}

inline BandStats band_stats_from_json(const Json& j) {
    BandStats stats;
    for (ElectrodeId e : kDataElectrodes) {
        const Json& row = j.at(std::string(electrode_name(e)));
        for (FrequencyBand b : kAllBands) {
            const Json& cell = row.at(std::string(band_name(b)));
            stats.at(e, b) = {cell.at("mean").get<double>(),
                              cell.at("std").get<double>()};
        }
    }
    return stats;
}

inline Json summary_to_json(const ActivitySummary& s) {
    return Json{{"activity", activity_to_json(s.activity)},
                {"n_epochs_total", s.n_epochs_total},
                {"n_epochs_clean", s.n_epochs_clean},
                {"stats", band_stats_to_json(s.stats)}};
}

inline ActivitySummary summary_from_json(const Json& j) {
    ActivitySummary s;
    s.activity = activity_from_json(j.at("activity"));
    s.n_epochs_total = j.at("n_epochs_total").get<std::size_t>();
    s.n_epochs_clean = j.at("n_epochs_clean").get<std::size_t>();
    s.stats = band_stats_from_json(j.at("stats"));
    return s;
}

inline Json verdict_to_json(const DominanceVerdict& v, const std::string& subject_id) {
    return Json{{"subject", subject_id},
                {"activity", v.activity},
                {"dominant_hemisphere", std::string(hemisphere_name(v.dominant_hemisphere))},
                {"gamma_change", v.gamma_change},
                {"dominant_activity", std::string(dominant_activity_name(v.dominant_activity))},
                {"delta_left", v.delta_left},
                {"delta_right", v.delta_right}};
}

inline DominanceVerdict verdict_from_json(const Json& j) {
    DominanceVerdict v;
    v.activity = j.at("activity").get<std::string>();
    const std::string hemi = j.at("dominant_hemisphere").get<std::string>();
    if (hemi == "Left") v.dominant_hemisphere = Hemisphere::Left;
    else if (hemi == "Right") v.dominant_hemisphere = Hemisphere::Right;
    else if (hemi == "Balanced") v.dominant_hemisphere = Hemisphere::Balanced;
    else throw InputError("json: unknown hemisphere '" + hemi + "'");
    v.gamma_change = j.at("gamma_change").get<double>();
    const std::string da = j.at("dominant_activity").get<std::string>();
    if (da == "Training") v.dominant_activity = DominantActivity::Training;
    else if (da == "Talking") v.dominant_activity = DominantActivity::Talking;
    else throw InputError("json: unknown dominant activity '" + da + "'");
    v.delta_left = j.at("delta_left").get<double>();
    v.delta_right = j.at("delta_right").get<double>();
    return v;
}

}  // namespace eegloop
