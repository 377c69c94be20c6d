#pragma once

// Shared domain vocabulary: electrodes, hemispheres, frequency bands,
// cognitive domains and the activity catalog. Everything here is immutable
// value data and safe to share across threads.

#include <array>
#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eegloop {

// Error categories; the CLI maps these onto exit codes (1/2/3).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NetworkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The four data electrodes of the headband plus the reference position NZ.
// NZ is a hardware reference only and never carries sample data.
enum class ElectrodeId { TP9, AF7, AF8, TP10, NZ };

inline constexpr std::size_t kNumElectrodes = 4;

// Data electrodes in channel order (also the wire order of StreamPacket).
inline constexpr std::array<ElectrodeId, kNumElectrodes> kDataElectrodes = {
    ElectrodeId::TP9, ElectrodeId::AF7, ElectrodeId::AF8, ElectrodeId::TP10};

inline constexpr std::string_view electrode_name(ElectrodeId e) {
    switch (e) {
        case ElectrodeId::TP9: return "TP9";
        case ElectrodeId::AF7: return "AF7";
        case ElectrodeId::AF8: return "AF8";
        case ElectrodeId::TP10: return "TP10";
        case ElectrodeId::NZ: return "NZ";
    }
    return "?";
}

inline std::optional<ElectrodeId> parse_electrode(std::string_view s) {
    for (ElectrodeId e : kDataElectrodes)
        if (s == electrode_name(e)) return e;
    if (s == "NZ") return ElectrodeId::NZ;
    return std::nullopt;
}

// Index of a data electrode in channel order.
inline std::size_t electrode_index(ElectrodeId e) {
    switch (e) {
        case ElectrodeId::TP9: return 0;
        case ElectrodeId::AF7: return 1;
        case ElectrodeId::AF8: return 2;
        case ElectrodeId::TP10: return 3;
        default:
            throw InputError("NZ is a reference electrode and carries no data");
    }
}

// Balanced is an output-only tie value; no electrode maps to it.
enum class Hemisphere { Left, Right, Balanced };

inline constexpr std::string_view hemisphere_name(Hemisphere h) {
    switch (h) {
        case Hemisphere::Left: return "Left";
        case Hemisphere::Right: return "Right";
        case Hemisphere::Balanced: return "Balanced";
    }
    return "?";
}

// TP9/AF7 sit on the left hemisphere, AF8/TP10 on the right.
inline Hemisphere hemisphere_of(ElectrodeId e) {
    switch (e) {
        case ElectrodeId::TP9:
        case ElectrodeId::AF7: return Hemisphere::Left;
        case ElectrodeId::AF8:
        case ElectrodeId::TP10: return Hemisphere::Right;
        default:
            throw InputError("NZ is a reference electrode and carries no data");
    }
}

enum class FrequencyBand { Delta, Theta, Alpha, Beta, Gamma };

inline constexpr std::size_t kNumBands = 5;

inline constexpr std::array<FrequencyBand, kNumBands> kAllBands = {
    FrequencyBand::Delta, FrequencyBand::Theta, FrequencyBand::Alpha,
    FrequencyBand::Beta, FrequencyBand::Gamma};

struct BandRange {
    double lo_hz;
    double hi_hz;
};

// Bands partition [0, 45] Hz. Intervals are half-open [lo, hi) except Gamma,
// which is closed at 45 Hz so the partition covers the full range.
inline constexpr BandRange band_range(FrequencyBand b) {
    switch (b) {
        case FrequencyBand::Delta: return {0.0, 4.0};
        case FrequencyBand::Theta: return {4.0, 8.0};
        case FrequencyBand::Alpha: return {8.0, 12.0};
        case FrequencyBand::Beta: return {12.0, 30.0};
        case FrequencyBand::Gamma: return {30.0, 45.0};
    }
    return {0.0, 0.0};
}

inline constexpr std::string_view band_name(FrequencyBand b) {
    switch (b) {
        case FrequencyBand::Delta: return "Delta";
        case FrequencyBand::Theta: return "Theta";
        case FrequencyBand::Alpha: return "Alpha";
        case FrequencyBand::Beta: return "Beta";
        case FrequencyBand::Gamma: return "Gamma";
    }
    return "?";
}

inline std::optional<FrequencyBand> parse_band(std::string_view s) {
    for (FrequencyBand b : kAllBands)
        if (s == band_name(b)) return b;
    return std::nullopt;
}

// Band containing frequency f, or nullopt above 45 Hz. Negative frequencies
// are rejected.
inline std::optional<FrequencyBand> band_of(double f_hz) {
    if (!(f_hz >= 0.0))
        throw InputError("band_of: frequency must be non-negative");
    for (FrequencyBand b : kAllBands) {
        const BandRange r = band_range(b);
        if (f_hz >= r.lo_hz && f_hz < r.hi_hz) return b;
    }
    if (f_hz == band_range(FrequencyBand::Gamma).hi_hz) return FrequencyBand::Gamma;
    return std::nullopt;
}

// Skill dimensions a training activity exercises.
enum class CognitiveDomain { IVM, VP, LTM, VC, C, NA, VM, VerbM };

inline constexpr std::array<CognitiveDomain, 8> kAllDomains = {
    CognitiveDomain::IVM, CognitiveDomain::VP, CognitiveDomain::LTM,
    CognitiveDomain::VC, CognitiveDomain::C, CognitiveDomain::NA,
    CognitiveDomain::VM, CognitiveDomain::VerbM};

inline constexpr std::string_view domain_abbrev(CognitiveDomain d) {
    switch (d) {
        case CognitiveDomain::IVM: return "IVM";
        case CognitiveDomain::VP: return "VP";
        case CognitiveDomain::LTM: return "LTM";
        case CognitiveDomain::VC: return "VC";
        case CognitiveDomain::C: return "C";
        case CognitiveDomain::NA: return "NA";
        case CognitiveDomain::VM: return "VM";
        case CognitiveDomain::VerbM: return "VerbM";
    }
    return "?";
}

inline constexpr std::string_view domain_long_name(CognitiveDomain d) {
    switch (d) {
        case CognitiveDomain::IVM: return "Instant Verbal Memory";
        case CognitiveDomain::VP: return "Visuoperception";
        case CognitiveDomain::LTM: return "Long Term Memory";
        case CognitiveDomain::VC: return "Visuoconstruction";
        case CognitiveDomain::C: return "Comprehension";
        case CognitiveDomain::NA: return "Naming Ability";
        case CognitiveDomain::VM: return "Visual Memory";
        case CognitiveDomain::VerbM: return "Verbal Memory";
    }
    return "?";
}

inline std::optional<CognitiveDomain> parse_domain(std::string_view s) {
    for (CognitiveDomain d : kAllDomains)
        if (s == domain_abbrev(d)) return d;
    return std::nullopt;
}

// A training (or baseline) activity. cognitive_domains is an ordered set:
// uniqueness is enforced, insertion order is preserved for rendering.
struct ActivityKind {
    std::string name;
    std::vector<CognitiveDomain> cognitive_domains;
    int difficulty = 1;
    int difficulty_max = 5;
    bool is_baseline = false;

    bool operator==(const ActivityKind&) const = default;
};

struct SubjectProfile {
    std::string subject_id;
    std::string display_name;
    std::string notes;

    bool operator==(const SubjectProfile&) const = default;
};

// Activity catalog. Exactly one entry is the baseline; per the domain rules
// only "Talking" may be marked baseline and it carries no cognitive domains.
struct ActivityCatalog {
    std::vector<ActivityKind> activities;

    const ActivityKind* find(std::string_view name) const {
        for (const auto& a : activities)
            if (a.name == name) return &a;
        return nullptr;
    }

    const ActivityKind& baseline() const {
        for (const auto& a : activities)
            if (a.is_baseline) return a;
        throw PreconditionError("catalog has no baseline activity");
    }

    bool operator==(const ActivityCatalog&) const = default;
};

inline void validate_catalog(const ActivityCatalog& catalog) {
    if (catalog.activities.empty())
        throw InputError("catalog: must contain at least one activity");
    std::size_t baselines = 0;
    for (const auto& a : catalog.activities) {
        if (a.name.empty()) throw InputError("catalog: activity name must be non-empty");
        std::size_t dup = 0;
        for (const auto& b : catalog.activities)
            if (b.name == a.name) ++dup;
        if (dup != 1)
            throw InputError("catalog: duplicate activity name '" + a.name + "'");
        if (a.difficulty < 1 || a.difficulty_max < 1 || a.difficulty > a.difficulty_max)
            throw InputError("catalog: activity '" + a.name + "' has invalid difficulty range");
        for (std::size_t i = 0; i < a.cognitive_domains.size(); ++i)
            for (std::size_t j = i + 1; j < a.cognitive_domains.size(); ++j)
                if (a.cognitive_domains[i] == a.cognitive_domains[j])
                    throw InputError("catalog: activity '" + a.name + "' repeats a cognitive domain");
        if (a.is_baseline) {
            ++baselines;
            if (a.name != "Talking")
                throw InputError("catalog: only 'Talking' may be marked baseline");
            if (!a.cognitive_domains.empty())
                throw InputError("catalog: baseline activity must have no cognitive domains");
        }
    }
    if (baselines != 1)
        throw InputError("catalog: exactly one baseline activity required");
}

// Built-in catalog. PaintObjectRain's {VP, VC} assignment is a placeholder:
// the activity set names it but gives it no domain list.
inline ActivityCatalog default_catalog() {
    ActivityCatalog c;
    c.activities.push_back({"Talking", {}, 1, 1, true});
    c.activities.push_back(
        {"Memory", {CognitiveDomain::IVM, CognitiveDomain::VP}, 1, 5, false});
    c.activities.push_back(
        {"Puzzle",
         {CognitiveDomain::VP, CognitiveDomain::VC, CognitiveDomain::C},
         1, 5, false});
    c.activities.push_back(
        {"PaintObjectRain", {CognitiveDomain::VP, CognitiveDomain::VC}, 1, 5, false});
    return c;
}

inline std::string join_domains(const std::vector<CognitiveDomain>& ds) {
    std::string out;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (i) out += ", ";
        out += domain_abbrev(ds[i]);
    }
    return out;
}

}  // namespace eegloop
