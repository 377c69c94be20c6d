#pragma once

// Shared fixture builders for the session/report tests and the acceptance
// suite: hand-crafted activity summaries whose gamma means steer classify()
// to a chosen verdict, and the reference subject-wise verdict table they
// reproduce.

#include <array>
#include <cctype>
#include <string>
#include <vector>

#include "eegloop/dominance.hpp"
#include "eegloop/dsp.hpp"
#include "eegloop/session.hpp"

namespace fixtures {

using namespace eegloop;

// Summary with explicit per-electrode gamma means (all other bands zero).
inline ActivitySummary summary_with_gamma(const ActivityKind& kind, double tp9,
                                          double af7, double af8, double tp10) {
    ActivitySummary s;
    s.activity = kind;
    s.n_epochs_total = 1;
    s.n_epochs_clean = 1;
    s.stats.at(ElectrodeId::TP9, FrequencyBand::Gamma) = {tp9, 0.0};
    s.stats.at(ElectrodeId::AF7, FrequencyBand::Gamma) = {af7, 0.0};
    s.stats.at(ElectrodeId::AF8, FrequencyBand::Gamma) = {af8, 0.0};
    s.stats.at(ElectrodeId::TP10, FrequencyBand::Gamma) = {tp10, 0.0};
    return s;
}

// Baseline with unit gamma on every electrode (hemisphere sums 2 and 2).
inline ActivitySummary unit_baseline(const ActivityCatalog& catalog) {
    return summary_with_gamma(catalog.baseline(), 1.0, 1.0, 1.0, 1.0);
}

// Training summary engineered to classify as (hemisphere, dominant activity)
// against unit_baseline.
inline ActivitySummary steered_summary(const ActivityKind& kind, Hemisphere hemi,
                                       DominantActivity dom) {
    const bool training = dom == DominantActivity::Training;
    if (hemi == Hemisphere::Left)
        return training ? summary_with_gamma(kind, 2.0, 2.0, 1.5, 1.5)
                        : summary_with_gamma(kind, 0.75, 0.75, 0.5, 0.5);
    if (hemi == Hemisphere::Right)
        return training ? summary_with_gamma(kind, 1.5, 1.5, 2.0, 2.0)
                        : summary_with_gamma(kind, 0.5, 0.5, 0.75, 0.75);
    // Balanced: equal deltas; positive for Training, zero for Talking.
    return training ? summary_with_gamma(kind, 1.5, 1.5, 1.5, 1.5)
                    : summary_with_gamma(kind, 1.0, 1.0, 1.0, 1.0);
}

struct VerdictRow {
    std::string subject;
    std::string activity;
    Hemisphere hemisphere;
    DominantActivity dominant;
};

// Reference subject-wise verdict table: six subjects on Memory, five on
// Puzzle, with the expected dominant hemisphere and activity labels.
inline const std::vector<VerdictRow>& verdict_table() {
    static const std::vector<VerdictRow> rows = {
        {"Jaume", "Memory", Hemisphere::Left, DominantActivity::Training},
        {"Sara", "Memory", Hemisphere::Left, DominantActivity::Talking},
        {"Oscar", "Memory", Hemisphere::Right, DominantActivity::Talking},
        {"Yolanda", "Memory", Hemisphere::Right, DominantActivity::Training},
        {"Gaurav", "Memory", Hemisphere::Left, DominantActivity::Training},
        {"Benigno", "Memory", Hemisphere::Left, DominantActivity::Training},
        {"Jaume", "Puzzle", Hemisphere::Left, DominantActivity::Training},
        {"Sara", "Puzzle", Hemisphere::Right, DominantActivity::Training},
        {"Oscar", "Puzzle", Hemisphere::Right, DominantActivity::Talking},
        {"Yolanda", "Puzzle", Hemisphere::Left, DominantActivity::Talking},
        {"Gaurav", "Puzzle", Hemisphere::Left, DominantActivity::Training},
    };
    return rows;
}

// The exact text rows the renderer must produce for verdict_table(), frozen
// as literals (same order).
inline const std::vector<std::string>& expected_table_rows() {
    static const std::vector<std::string> rows = {
        "Jaume | Memory | IVM, VP | Left | Training",
        "Sara | Memory | IVM, VP | Left | Talking",
        "Oscar | Memory | IVM, VP | Right | Talking",
        "Yolanda | Memory | IVM, VP | Right | Training",
        "Gaurav | Memory | IVM, VP | Left | Training",
        "Benigno | Memory | IVM, VP | Left | Training",
        "Jaume | Puzzle | VP, VC, C | Left | Training",
        "Sara | Puzzle | VP, VC, C | Right | Training",
        "Oscar | Puzzle | VP, VC, C | Right | Talking",
        "Yolanda | Puzzle | VP, VC, C | Left | Talking",
        "Gaurav | Puzzle | VP, VC, C | Left | Training",
    };
    return rows;
}

// Lowercase id for a display name.
inline std::string subject_id_of(const std::string& display) {
    std::string id;
    for (char c : display) id += static_cast<char>(std::tolower(c));
    return id;
}

}  // namespace fixtures
