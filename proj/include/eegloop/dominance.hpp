#pragma once

// Gamma-based dominance: per-hemisphere gamma sums, change against the
// talking baseline, and the (hemisphere, activity) verdict.
//
// Decision rules, in one place so alternates can be swapped in:
//  - hemisphere wins by the larger signed gamma increase (not absolute)
//  - exact tie -> Balanced; gamma_change then reports the left delta
//  - gamma_change > 0 -> Training dominates; zero counts as Talking

#include <cmath>
#include <string>

#include "eegloop/core.hpp"
#include "eegloop/dsp.hpp"

namespace eegloop {

struct HemisphereGamma {
    double left = 0.0;   // gamma mean of AF7 + gamma mean of TP9
    double right = 0.0;  // gamma mean of AF8 + gamma mean of TP10
    std::string source_activity;

    bool operator==(const HemisphereGamma&) const = default;
};

enum class DominantActivity { Training, Talking };

inline constexpr std::string_view dominant_activity_name(DominantActivity d) {
    return d == DominantActivity::Training ? "Training" : "Talking";
}

struct DominanceVerdict {
    std::string activity;  // the training activity evaluated
    Hemisphere dominant_hemisphere = Hemisphere::Balanced;
    double gamma_change = 0.0;  // delta of the dominant hemisphere, microvolts
    DominantActivity dominant_activity = DominantActivity::Talking;
    double delta_left = 0.0;
    double delta_right = 0.0;

    bool operator==(const DominanceVerdict&) const = default;
};

inline HemisphereGamma hemisphere_gamma(const ActivitySummary& summary) {
    const auto gamma = [&](ElectrodeId e) {
        const double v = summary.stats.at(e, FrequencyBand::Gamma).mean;
        if (!std::isfinite(v) || v < 0.0)
            throw InputError("hemisphere_gamma: invalid gamma mean for " +
                             std::string(electrode_name(e)));
        return v;
    };
    HemisphereGamma hg;
    hg.left = gamma(ElectrodeId::AF7) + gamma(ElectrodeId::TP9);
    hg.right = gamma(ElectrodeId::AF8) + gamma(ElectrodeId::TP10);
    hg.source_activity = summary.activity.name;
    return hg;
}

inline DominanceVerdict classify(const HemisphereGamma& training,
                                 const HemisphereGamma& baseline,
                                 const ActivityCatalog& catalog) {
    const ActivityKind* base_kind = catalog.find(baseline.source_activity);
    if (!base_kind)
        throw InputError("classify: baseline activity '" + baseline.source_activity +
                         "' not in catalog");
    if (!base_kind->is_baseline)
        throw PreconditionError("classify: activity '" + baseline.source_activity +
                                "' is not marked baseline");
    const ActivityKind* train_kind = catalog.find(training.source_activity);
    if (!train_kind)
        throw InputError("classify: training activity '" + training.source_activity +
                         "' not in catalog");
    if (train_kind->is_baseline)
        throw PreconditionError("classify: training activity must not be the baseline");

    DominanceVerdict v;
    v.activity = training.source_activity;
    v.delta_left = training.left - baseline.left;
    v.delta_right = training.right - baseline.right;

    if (v.delta_left > v.delta_right)
        v.dominant_hemisphere = Hemisphere::Left;
    else if (v.delta_right > v.delta_left)
        v.dominant_hemisphere = Hemisphere::Right;
    else
        v.dominant_hemisphere = Hemisphere::Balanced;

    v.gamma_change = (v.dominant_hemisphere == Hemisphere::Right) ? v.delta_right
                                                                  : v.delta_left;
    v.dominant_activity = (v.gamma_change > 0.0) ? DominantActivity::Training
                                                 : DominantActivity::Talking;
    return v;
}

}  // namespace eegloop
