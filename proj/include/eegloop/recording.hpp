#pragma once

// Recording: the uniform four-channel sample series every ingestion path
// (CSV, synthetic generator, UDP stream) produces.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "eegloop/core.hpp"

namespace eegloop {

struct RawSample {
    std::uint64_t t_ms = 0;  // milliseconds since recording start
    std::array<double, kNumElectrodes> values{};  // microvolts, channel order
    std::string marker;  // activity label; empty = unlabeled

    double value(ElectrodeId e) const { return values[electrode_index(e)]; }
    double& value(ElectrodeId e) { return values[electrode_index(e)]; }

    bool operator==(const RawSample&) const = default;
};

// Contiguous run of samples sharing one non-empty marker; [begin, end).
struct Segment {
    std::string label;
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool operator==(const Segment&) const = default;
};

struct Recording {
    double sample_rate_hz = 256.0;
    std::string subject_id;
    std::vector<RawSample> samples;
    std::vector<std::string> notes;  // ingestion warnings (loss, reordering)

    // Segments derived from contiguous runs of identical non-empty markers;
    // unlabeled spans belong to no segment.
    std::vector<Segment> segments() const {
        std::vector<Segment> out;
        std::size_t i = 0;
        while (i < samples.size()) {
            if (samples[i].marker.empty()) {
                ++i;
                continue;
            }
            std::size_t j = i + 1;
            while (j < samples.size() && samples[j].marker == samples[i].marker) ++j;
            out.push_back({samples[i].marker, i, j});
            i = j;
        }
        return out;
    }

    double duration_s() const {
        return samples.empty()
                   ? 0.0
                   : static_cast<double>(samples.size()) / sample_rate_hz;
    }

    bool operator==(const Recording& o) const {
        return sample_rate_hz == o.sample_rate_hz && samples == o.samples;
    }
};

// Checks the Recording invariants: non-empty, finite amplitudes, strictly
// increasing timestamps whose spacing stays within 50% of the nominal period.
inline void validate_recording(const Recording& rec) {
    if (!(rec.sample_rate_hz > 0.0))
        throw InputError("recording: sample_rate_hz must be positive");
    if (rec.samples.empty())
        throw InputError("recording: no samples");
    const double nominal_ms = 1000.0 / rec.sample_rate_hz;
    for (std::size_t i = 0; i < rec.samples.size(); ++i) {
        for (double v : rec.samples[i].values)
            if (!std::isfinite(v))
                throw InputError("recording: non-finite amplitude at sample " +
                                 std::to_string(i));
        if (i == 0) continue;
        if (rec.samples[i].t_ms <= rec.samples[i - 1].t_ms)
            throw InputError("recording: timestamps not strictly increasing at sample " +
                             std::to_string(i));
        const double dt =
            static_cast<double>(rec.samples[i].t_ms - rec.samples[i - 1].t_ms);
        if (std::abs(dt - nominal_ms) >= 0.5 * nominal_ms)
            throw InputError("recording: sample spacing " + std::to_string(dt) +
                             " ms deviates more than 50% from nominal at sample " +
                             std::to_string(i));
    }
}

// Canonical integer timestamp for sample index i at the given rate. Rates
// above 1000 Hz cannot be represented on a strictly increasing millisecond
// grid and are rejected at the ingestion layer.
inline std::uint64_t canonical_t_ms(std::size_t index, double sample_rate_hz) {
    return static_cast<std::uint64_t>(
        std::llround(static_cast<double>(index) * 1000.0 / sample_rate_hz));
}

// Whether the canonical integer-millisecond grid at this rate keeps every
// spacing strictly within 50% of the nominal period. Spacings are
// floor(period) or ceil(period); both stay within the bound exactly when the
// period exceeds 4/3 ms (rate < 750) or is a whole number of milliseconds.
inline bool millisecond_grid_ok(double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0) || sample_rate_hz > 1000.0) return false;
    const double period_ms = 1000.0 / sample_rate_hz;
    return period_ms > 4.0 / 3.0 || period_ms == std::floor(period_ms);
}

}  // namespace eegloop
