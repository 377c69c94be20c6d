#pragma once

// Session orchestration: hold the talking baseline, evaluate training
// activities into verdicts, and derive the next-activity recommendation.
//
// The recommendation rules are a replaceable policy, kept in one pure
// function (recommend_next):
//   (a) Training dominated      -> repeat, difficulty + 1 (capped)
//   (b) Talking won, Left/Right -> switch to the most different activity
//                                  (largest cognitive-domain symmetric
//                                  difference; ties: fewest runs, then name),
//                                  difficulty - 1 (floored at 1)
//   (c) Balanced                -> repeat unchanged

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eegloop/core.hpp"
#include "eegloop/dominance.hpp"
#include "eegloop/dsp.hpp"
#include "eegloop/json_codec.hpp"

namespace eegloop {

struct Evaluation {
    ActivityKind activity;
    ActivitySummary summary;
    DominanceVerdict verdict;
    ActivitySummary baseline_used;  // the baseline in force at evaluation time
    // Accepted for parity with the activity parameters the comparison step
    // receives, but not consumed by any rule yet.
    std::optional<double> response_time_s;
};

struct SessionState {
    SubjectProfile subject;
    ActivityCatalog catalog;
    std::optional<ActivitySummary> baseline;
    std::vector<Evaluation> evaluations;
    std::map<std::string, int> history_counts;
};

inline SessionState make_session(SubjectProfile subject,
                                 ActivityCatalog catalog = default_catalog()) {
    validate_catalog(catalog);
    if (subject.subject_id.empty())
        throw InputError("session: subject_id must be non-empty");
    SessionState s;
    s.subject = std::move(subject);
    s.catalog = std::move(catalog);
    return s;
}

// Stores (or replaces) the talking baseline. Prior evaluations keep the
// baseline they were computed against.
inline void set_baseline(SessionState& state, ActivitySummary summary) {
    const ActivityKind* kind = state.catalog.find(summary.activity.name);
    if (!kind || !kind->is_baseline)
        throw PreconditionError("set_baseline: '" + summary.activity.name +
                                "' is not the baseline activity");
    state.baseline = std::move(summary);
}

inline DominanceVerdict evaluate_activity(SessionState& state, ActivitySummary summary,
                                          std::optional<double> response_time_s = {}) {
    if (!state.baseline)
        throw PreconditionError("evaluate_activity: baseline required");
    const ActivityKind* kind = state.catalog.find(summary.activity.name);
    if (!kind)
        throw InputError("evaluate_activity: activity '" + summary.activity.name +
                         "' not in catalog");
    if (kind->is_baseline)
        throw PreconditionError("evaluate_activity: cannot evaluate the baseline activity");

    DominanceVerdict verdict = classify(hemisphere_gamma(summary),
                                        hemisphere_gamma(*state.baseline), state.catalog);
    state.evaluations.push_back(Evaluation{summary.activity, std::move(summary), verdict,
                                           *state.baseline, response_time_s});
    ++state.history_counts[verdict.activity];
    return verdict;
}

enum class Rationale { ContinueEngaged, SwitchDomains, RepeatBalanced };

inline constexpr std::string_view rationale_name(Rationale r) {
    switch (r) {
        case Rationale::ContinueEngaged: return "ContinueEngaged";
        case Rationale::SwitchDomains: return "SwitchDomains";
        case Rationale::RepeatBalanced: return "RepeatBalanced";
    }
    return "?";
}

struct Recommendation {
    ActivityKind next_activity;
    int next_difficulty = 1;
    Rationale rationale = Rationale::RepeatBalanced;
    std::string explanation;
};

namespace detail {

inline std::size_t domain_symmetric_difference(const std::vector<CognitiveDomain>& a,
                                               const std::vector<CognitiveDomain>& b) {
    std::size_t n = 0;
    for (CognitiveDomain d : a)
        if (std::find(b.begin(), b.end(), d) == b.end()) ++n;
    for (CognitiveDomain d : b)
        if (std::find(a.begin(), a.end(), d) == a.end()) ++n;
    return n;
}

}  // namespace detail

inline Recommendation recommend_next(const SessionState& state) {
    if (state.evaluations.empty())
        throw PreconditionError("recommend_next: no evaluations yet");
    bool any_training = false;
    for (const ActivityKind& a : state.catalog.activities)
        if (!a.is_baseline) any_training = true;
    if (!any_training)
        throw PreconditionError("recommend_next: catalog has no training activities");

    const Evaluation& last = state.evaluations.back();
    const ActivityKind& current = last.activity;
    Recommendation rec;

    if (last.verdict.dominant_activity == DominantActivity::Training) {
        rec.rationale = Rationale::ContinueEngaged;
        rec.next_activity = current;
        rec.next_difficulty = std::min(current.difficulty + 1, current.difficulty_max);
        rec.explanation = "gamma rose " + format_double(last.verdict.gamma_change) +
                          " uV over baseline; continue " + current.name +
                          " at difficulty " + std::to_string(rec.next_difficulty);
    } else if (last.verdict.dominant_hemisphere != Hemisphere::Balanced) {
        rec.rationale = Rationale::SwitchDomains;
        const ActivityKind* best = nullptr;
        std::size_t best_score = 0;
        for (const ActivityKind& cand : state.catalog.activities) {
            if (cand.is_baseline || cand.name == current.name) continue;
            const std::size_t score = detail::domain_symmetric_difference(
                cand.cognitive_domains, current.cognitive_domains);
            if (!best) {
                best = &cand;
                best_score = score;
                continue;
            }
            const auto count = [&](const std::string& name) {
                const auto it = state.history_counts.find(name);
                return it == state.history_counts.end() ? 0 : it->second;
            };
            if (score > best_score ||
                (score == best_score && (count(cand.name) < count(best->name) ||
                                         (count(cand.name) == count(best->name) &&
                                          cand.name < best->name)))) {
                best = &cand;
                best_score = score;
            }
        }
        // Catalog may hold no alternative beyond the just-run activity; fall
        // back to repeating it at the eased difficulty.
        rec.next_activity = best ? *best : current;
        rec.next_difficulty =
            std::clamp(current.difficulty - 1, 1, rec.next_activity.difficulty_max);
        rec.explanation = "talking baseline dominated; switch to " +
                          rec.next_activity.name + " (cognitive domains differ by " +
                          std::to_string(best ? best_score : 0) + ") at difficulty " +
                          std::to_string(rec.next_difficulty);
    } else {
        rec.rationale = Rationale::RepeatBalanced;
        rec.next_activity = current;
        rec.next_difficulty = current.difficulty;
        rec.explanation = "hemispheres balanced; repeat " + current.name +
                          " at difficulty " + std::to_string(rec.next_difficulty);
    }
    return rec;
}

inline Json recommendation_to_json(const Recommendation& r) {
    return Json{{"next_activity", r.next_activity.name},
                {"next_difficulty", r.next_difficulty},
                {"rationale", std::string(rationale_name(r.rationale))},
                {"explanation", r.explanation}};
}

// --- persistence: one JSON file per session ------------------------------

inline Json session_to_json(const SessionState& state) {
    Json evals = Json::array();
    for (const Evaluation& e : state.evaluations) {
        Json je{{"activity", activity_to_json(e.activity)},
                {"summary", summary_to_json(e.summary)},
                {"verdict", verdict_to_json(e.verdict, state.subject.subject_id)},
                {"baseline_used", summary_to_json(e.baseline_used)}};
        je["response_time_s"] =
            e.response_time_s ? Json(*e.response_time_s) : Json(nullptr);
        evals.push_back(std::move(je));
    }
    Json history = Json::object();
    for (const auto& [name, count] : state.history_counts) history[name] = count;
    return Json{{"subject", subject_to_json(state.subject)},
                {"catalog", catalog_to_json(state.catalog)},
                {"baseline", state.baseline ? summary_to_json(*state.baseline) : Json(nullptr)},
                {"evaluations", std::move(evals)},
                {"history_counts", std::move(history)}};
}

inline SessionState session_from_json(const Json& j) {
    SessionState state;
    state.subject = subject_from_json(j.at("subject"));
    state.catalog = catalog_from_json(j.at("catalog"));
    if (!j.at("baseline").is_null())
        state.baseline = summary_from_json(j.at("baseline"));
    for (const auto& je : j.at("evaluations")) {
        Evaluation e;
        e.activity = activity_from_json(je.at("activity"));
        e.summary = summary_from_json(je.at("summary"));
        e.verdict = verdict_from_json(je.at("verdict"));
        e.baseline_used = summary_from_json(je.at("baseline_used"));
        if (!je.at("response_time_s").is_null())
            e.response_time_s = je.at("response_time_s").get<double>();
        state.evaluations.push_back(std::move(e));
    }
    if (j.contains("history_counts"))
        for (const auto& [name, count] : j.at("history_counts").items())
            state.history_counts[name] = count.get<int>();
    return state;
}

// sessions/<subject_id>/<session_ts>.json under out_dir
inline std::filesystem::path save_session(const SessionState& state,
                                          const std::filesystem::path& out_dir,
                                          const std::string& session_ts) {
    const std::filesystem::path path =
        out_dir / "sessions" / state.subject.subject_id / (session_ts + ".json");
    atomic_write_file(path, session_to_json(state).dump(2) + "\n");
    return path;
}

inline SessionState load_session(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("session: cannot open '" + path.string() + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("session: invalid JSON in '" + path.string() + "': " + e.what());
    }
    return session_from_json(j);
}

}  // namespace eegloop
