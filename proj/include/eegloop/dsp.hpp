#pragma once

// Time-domain epochs to band-wise spectral statistics:
// segmentation -> preprocessing -> windowed FFT -> band decomposition ->
// per-band mean/std -> per-activity summary.
//
// Conventions, fixed for reproducibility:
//  - periodic Hann window, amplitude corrected by the Hann coherent gain 0.5
//  - single-sided amplitude spectrum in microvolts
//  - band value = mean of the band's bin amplitudes (switchable to power)
//  - population standard deviation (bands have fixed bin counts)
//  - epochs aggregate in ascending index order, bit-deterministic

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "eegloop/core.hpp"
#include "eegloop/fft.hpp"
#include "eegloop/recording.hpp"

namespace eegloop {

enum class BandValueMode { Amplitude, Power };

struct DspConfig {
    std::size_t epoch_len = 512;  // power of two; 2 s at 256 Hz
    std::size_t hop = 256;        // 50% overlap
    double artifact_threshold_uv = 400.0;  // peak-to-peak rejection cutoff
    int mains_hz = 50;                     // 50, 60, or 0 = off
    BandValueMode band_value = BandValueMode::Amplitude;
};

struct Epoch {
    ElectrodeId electrode = ElectrodeId::TP9;
    std::vector<double> samples;  // microvolts
    std::size_t start_index = 0;  // offset in the source recording
    double sample_rate_hz = 256.0;
    bool preprocessed = false;
    bool artifact = false;
};

struct Spectrum {
    ElectrodeId electrode = ElectrodeId::TP9;
    double bin_hz = 0.0;                // sample_rate_hz / N
    std::vector<double> magnitudes;     // single-sided, length N/2+1
};

struct BandStat {
    double mean = 0.0;
    double stddev = 0.0;

    bool operator==(const BandStat&) const = default;
};

// One electrode's five band statistics, indexed by band order.
using ElectrodeBandStats = std::array<BandStat, kNumBands>;

// The full 4x5 electrode-by-band matrix.
struct BandStats {
    std::array<ElectrodeBandStats, kNumElectrodes> by_electrode{};

    const BandStat& at(ElectrodeId e, FrequencyBand b) const {
        return by_electrode[electrode_index(e)][static_cast<std::size_t>(b)];
    }
    BandStat& at(ElectrodeId e, FrequencyBand b) {
        return by_electrode[electrode_index(e)][static_cast<std::size_t>(b)];
    }

    bool operator==(const BandStats&) const = default;
};

struct ActivitySummary {
    ActivityKind activity;
    std::size_t n_epochs_total = 0;
    std::size_t n_epochs_clean = 0;
    BandStats stats;

    bool operator==(const ActivitySummary&) const = default;
};

// All windows of one labeled activity, per electrode in channel order.
// Windows start at offsets 0, hop, 2*hop, ... within each matching segment;
// trailing partial windows are dropped.
inline std::array<std::vector<Epoch>, kNumElectrodes> segment(
    const Recording& rec, const std::string& activity_label,
    std::size_t epoch_len, std::size_t hop) {
    if (!is_power_of_two(epoch_len))
        throw InputError("segment: epoch_len must be a power of two");
    if (hop < 1 || hop > epoch_len)
        throw InputError("segment: hop must be in [1, epoch_len]");

    std::array<std::vector<Epoch>, kNumElectrodes> out;
    bool found_label = false;
    for (const Segment& seg : rec.segments()) {
        if (seg.label != activity_label) continue;
        found_label = true;
        if (seg.size() < epoch_len) continue;
        for (std::size_t off = seg.begin; off + epoch_len <= seg.end; off += hop) {
            for (std::size_t c = 0; c < kNumElectrodes; ++c) {
                Epoch e;
                e.electrode = kDataElectrodes[c];
                e.start_index = off;
                e.sample_rate_hz = rec.sample_rate_hz;
                e.samples.resize(epoch_len);
                for (std::size_t i = 0; i < epoch_len; ++i)
                    e.samples[i] = rec.samples[off + i].values[c];
                out[c].push_back(std::move(e));
            }
        }
    }
    if (!found_label)
        throw InputError("segment: no segment labeled '" + activity_label + "'");
    if (out[0].empty())
        throw PreconditionError("segment: insufficient data for '" + activity_label +
                                "' (need at least one full epoch)");
    return out;
}

// DC removal plus peak-to-peak artifact flagging. Mains suppression happens
// in the spectral domain (to_band_stats), not here.
inline Epoch preprocess(Epoch epoch, const DspConfig& config) {
    if (epoch.preprocessed)
        throw PreconditionError("preprocess: epoch already preprocessed");
    if (!epoch.samples.empty()) {
        double lo = epoch.samples[0], hi = epoch.samples[0], sum = 0.0;
        for (double v : epoch.samples) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        const double mean = sum / static_cast<double>(epoch.samples.size());
        for (double& v : epoch.samples) v -= mean;
        epoch.artifact = (hi - lo) > config.artifact_threshold_uv;
    }
    epoch.preprocessed = true;
    return epoch;
}

inline std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(n)));
    return w;
}

inline constexpr double kHannCoherentGain = 0.5;

// Windowed single-sided amplitude spectrum. With the coherent-gain
// correction an on-bin tone of amplitude A lands as magnitude A in its bin.
inline Spectrum to_spectrum(const Epoch& epoch) {
    const std::size_t n = epoch.samples.size();
    if (!is_power_of_two(n))
        throw InputError("to_spectrum: epoch length must be a power of two");
    if (!epoch.preprocessed)
        throw PreconditionError("to_spectrum: epoch must be preprocessed first");

    const std::vector<double> w = hann_window(n);
    std::vector<std::complex<double>> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = epoch.samples[i] * w[i];
    fft_in_place(a);

    Spectrum spec;
    spec.electrode = epoch.electrode;
    spec.bin_hz = epoch.sample_rate_hz / static_cast<double>(n);
    spec.magnitudes.resize(n / 2 + 1);
    const double denom = static_cast<double>(n) * kHannCoherentGain;
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double scale = (k == 0 || k == n / 2) ? 1.0 : 2.0;
        spec.magnitudes[k] = scale * std::abs(a[k]) / denom;
    }
    return spec;
}

// True when bin frequency f falls in the +-1 Hz exclusion window around the
// configured mains frequency (inert at the default bands, which stop at
// 45 Hz, but kept for configurations with wider analysis ranges).
inline bool is_mains_bin(double f_hz, int mains_hz) {
    return mains_hz > 0 && std::abs(f_hz - static_cast<double>(mains_hz)) <= 1.0;
}

// Per-band mean and population standard deviation of the bin values for one
// electrode. Bin -> band assignment uses band_of on the bin center.
inline ElectrodeBandStats to_band_stats(const Spectrum& spec, const DspConfig& config) {
    std::array<std::vector<double>, kNumBands> bins;
    for (std::size_t k = 0; k < spec.magnitudes.size(); ++k) {
        const double f = static_cast<double>(k) * spec.bin_hz;
        if (is_mains_bin(f, config.mains_hz)) continue;
        const auto band = band_of(f);
        if (!band) continue;
        double v = spec.magnitudes[k];
        if (config.band_value == BandValueMode::Power) v *= v;
        bins[static_cast<std::size_t>(*band)].push_back(v);
    }

    ElectrodeBandStats out;
    for (std::size_t b = 0; b < kNumBands; ++b) {
        const auto& vals = bins[b];
        if (vals.empty())
            throw InputError(std::string("to_band_stats: band ") +
                             std::string(band_name(kAllBands[b])) +
                             " has no bins at this resolution");
        double sum = 0.0;
        for (double v : vals) sum += v;
        const double mean = sum / static_cast<double>(vals.size());
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= static_cast<double>(vals.size());
        out[b] = {mean, std::sqrt(var)};
    }
    return out;
}

// Per-epoch features for one window offset across all four electrodes.
// A window is clean only if no electrode tripped the artifact threshold;
// one contaminated channel rejects the whole window.
struct EpochFeatures {
    std::size_t start_index = 0;
    bool artifact = false;
    std::array<ElectrodeBandStats, kNumElectrodes> stats{};
};

// Runs segment + preprocess + to_spectrum + to_band_stats for every window
// of the labeled activity.
inline std::vector<EpochFeatures> extract_features(const Recording& rec,
                                                   const std::string& activity_label,
                                                   const DspConfig& config) {
    const auto epochs = segment(rec, activity_label, config.epoch_len, config.hop);
    const std::size_t n_windows = epochs[0].size();
    std::vector<EpochFeatures> out(n_windows);
    for (std::size_t i = 0; i < n_windows; ++i) {
        EpochFeatures& f = out[i];
        f.start_index = epochs[0][i].start_index;
        for (std::size_t c = 0; c < kNumElectrodes; ++c) {
            Epoch e = preprocess(epochs[c][i], config);
            f.artifact = f.artifact || e.artifact;
            f.stats[c] = to_band_stats(to_spectrum(e), config);
        }
    }
    return out;
}

// Averages per-epoch band means (and stds) over the clean epochs, in
// ascending epoch order.
inline ActivitySummary summarize_activity(const std::vector<EpochFeatures>& epochs,
                                          const ActivityKind& activity) {
    ActivitySummary summary;
    summary.activity = activity;
    summary.n_epochs_total = epochs.size();
    for (const EpochFeatures& f : epochs)
        if (!f.artifact) ++summary.n_epochs_clean;
    if (summary.n_epochs_clean == 0)
        throw PreconditionError("summarize_activity: no clean data for '" +
                                activity.name + "'");

    const double denom = static_cast<double>(summary.n_epochs_clean);
    for (std::size_t c = 0; c < kNumElectrodes; ++c) {
        for (std::size_t b = 0; b < kNumBands; ++b) {
            double mean_sum = 0.0, std_sum = 0.0;
            for (const EpochFeatures& f : epochs) {
                if (f.artifact) continue;
                mean_sum += f.stats[c][b].mean;
                std_sum += f.stats[c][b].stddev;
            }
            summary.stats.by_electrode[c][b] = {mean_sum / denom, std_sum / denom};
        }
    }
    return summary;
}

}  // namespace eegloop
