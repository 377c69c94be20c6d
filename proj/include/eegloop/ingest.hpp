#pragma once

// CSV recordings and the synthetic signal generator.
//
// CSV format (bit-exact):
//   header   timestamp_ms,TP9,AF7,AF8,TP10,marker
//   rows     integer timestamp, four shortest-round-trip decimals, marker
//   UTF-8, LF line endings; the marker may be empty and must not contain
//   commas or line breaks.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "eegloop/core.hpp"
#include "eegloop/recording.hpp"
#include "eegloop/rng.hpp"

namespace eegloop {

inline constexpr std::string_view kCsvHeader = "timestamp_ms,TP9,AF7,AF8,TP10,marker";

// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double_field(std::string_view s, std::size_t line_no) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
        throw InputError("csv: non-numeric amplitude '" + std::string(s) +
                         "' at line " + std::to_string(line_no));
    return v;
}

inline void write_recording(const Recording& rec, std::ostream& out) {
    validate_recording(rec);
    out << kCsvHeader << '\n';
    for (const RawSample& s : rec.samples) {
        if (s.marker.find_first_of(",\n\r") != std::string::npos)
            throw InputError("csv: marker '" + s.marker + "' contains a delimiter");
        out << s.t_ms;
        for (double v : s.values) out << ',' << format_double(v);
        out << ',' << s.marker << '\n';
    }
}

inline std::string write_recording_string(const Recording& rec) {
    std::ostringstream os;
    write_recording(rec, os);
    return os.str();
}

inline Recording read_recording(std::istream& in, double sample_rate_hz,
                                std::string subject_id = "") {
    Recording rec;
    rec.sample_rate_hz = sample_rate_hz;
    rec.subject_id = std::move(subject_id);

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw InputError("csv: empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw InputError("csv: bad header, expected '" + std::string(kCsvHeader) + "'");

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;

        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (true) {
            const auto pos = rest.find(',');
            if (pos == std::string_view::npos) {
                fields.push_back(rest);
                break;
            }
            fields.push_back(rest.substr(0, pos));
            rest.remove_prefix(pos + 1);
        }
        if (fields.size() != 6)
            throw InputError("csv: expected 6 columns, got " +
                             std::to_string(fields.size()) + " at line " +
                             std::to_string(line_no));

        RawSample s;
        {
            const std::string_view ts = fields[0];
            const auto res = std::from_chars(ts.data(), ts.data() + ts.size(), s.t_ms);
            if (res.ec != std::errc{} || res.ptr != ts.data() + ts.size())
                throw InputError("csv: bad timestamp '" + std::string(ts) +
                                 "' at line " + std::to_string(line_no));
        }
        for (std::size_t c = 0; c < kNumElectrodes; ++c)
            s.values[c] = parse_double_field(fields[1 + c], line_no);
        s.marker = std::string(fields[5]);

        if (!rec.samples.empty() && s.t_ms <= rec.samples.back().t_ms)
            throw InputError("csv: non-monotone timestamp at line " +
                             std::to_string(line_no));
        rec.samples.push_back(std::move(s));
    }
    if (rec.samples.empty())
        throw InputError("csv: no data rows");
    validate_recording(rec);
    return rec;
}

inline Recording read_recording_file(const std::filesystem::path& path,
                                     double sample_rate_hz,
                                     std::string subject_id = "") {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("csv: cannot open '" + path.string() + "'");
    return read_recording(in, sample_rate_hz, std::move(subject_id));
}

// Writes via a temp file plus rename so interrupted runs never leave a
// partial file behind.
inline void atomic_write_file(const std::filesystem::path& path,
                              std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InputError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw InputError("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

inline void write_recording_file(const Recording& rec,
                                 const std::filesystem::path& path) {
    atomic_write_file(path, write_recording_string(rec));
}

// --- synthetic generation ---------------------------------------------

struct ToneSpec {
    double freq_hz = 0.0;
    double amplitude_uv = 0.0;
    double phase_rad = 0.0;
};

struct SyntheticSpec {
    double sample_rate_hz = 256.0;
    double duration_s = 0.0;
    double noise_std_uv = 0.0;
    std::uint64_t seed = 0;
    std::string marker;
    std::array<std::vector<ToneSpec>, kNumElectrodes> tones;  // channel order

    // Same tone set on every electrode.
    static SyntheticSpec uniform(std::vector<ToneSpec> shared, double duration_s,
                                 double sample_rate_hz = 256.0) {
        SyntheticSpec s;
        s.duration_s = duration_s;
        s.sample_rate_hz = sample_rate_hz;
        for (auto& t : s.tones) t = shared;
        return s;
    }
};

inline void validate_synthetic_spec(const SyntheticSpec& spec) {
    if (!(spec.sample_rate_hz > 0.0))
        throw InputError("synthetic: sample_rate_hz must be positive");
    if (!millisecond_grid_ok(spec.sample_rate_hz))
        throw InputError("synthetic: sample_rate_hz cannot be laid out on an integer "
                         "millisecond grid within the spacing tolerance");
    if (!(spec.duration_s > 0.0))
        throw InputError("synthetic: duration_s must be positive");
    if (!(spec.noise_std_uv >= 0.0))
        throw InputError("synthetic: noise_std_uv must be non-negative");
    for (const auto& per_electrode : spec.tones)
        for (const ToneSpec& t : per_electrode)
            if (!(t.freq_hz >= 0.0) || t.freq_hz >= spec.sample_rate_hz / 2.0)
                throw InputError("synthetic: tone at " + format_double(t.freq_hz) +
                                 " Hz aliases at sample rate " +
                                 format_double(spec.sample_rate_hz));
}

// Sum-of-sinusoids plus seeded Gaussian noise. Noise draws happen per sample
// in channel order, so output is a pure function of (spec, seed).
inline Recording generate_synthetic(const SyntheticSpec& spec,
                                    std::string subject_id = "synthetic") {
    validate_synthetic_spec(spec);
    const auto n = static_cast<std::size_t>(
        std::llround(spec.duration_s * spec.sample_rate_hz));
    if (n == 0)
        throw InputError("synthetic: duration too short for one sample");

    Recording rec;
    rec.sample_rate_hz = spec.sample_rate_hz;
    rec.subject_id = std::move(subject_id);
    rec.samples.resize(n);

    SplitMix64 rng(spec.seed);
    for (std::size_t i = 0; i < n; ++i) {
        RawSample& s = rec.samples[i];
        s.t_ms = canonical_t_ms(i, spec.sample_rate_hz);
        s.marker = spec.marker;
        const double t = static_cast<double>(i) / spec.sample_rate_hz;
        for (std::size_t c = 0; c < kNumElectrodes; ++c) {
            double v = 0.0;
            for (const ToneSpec& tone : spec.tones[c])
                v += tone.amplitude_uv *
                     std::sin(2.0 * std::numbers::pi * tone.freq_hz * t + tone.phase_rad);
            if (spec.noise_std_uv > 0.0)
                v += spec.noise_std_uv * rng.next_gaussian();
            s.values[c] = v;
        }
    }
    return rec;
}

// Concatenates independently generated segments into one recording and
// re-times samples onto the canonical global millisecond grid. All segments
// must share one sample rate.
inline Recording concat_segments(const std::vector<SyntheticSpec>& specs,
                                 std::string subject_id = "synthetic") {
    if (specs.empty())
        throw InputError("synthetic: no segments");
    Recording rec;
    rec.sample_rate_hz = specs.front().sample_rate_hz;
    rec.subject_id = std::move(subject_id);
    for (const SyntheticSpec& spec : specs) {
        if (spec.sample_rate_hz != rec.sample_rate_hz)
            throw InputError("synthetic: segments disagree on sample rate");
        Recording part = generate_synthetic(spec);
        for (RawSample& s : part.samples) rec.samples.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < rec.samples.size(); ++i)
        rec.samples[i].t_ms = canonical_t_ms(i, rec.sample_rate_hz);
    validate_recording(rec);
    return rec;
}

}  // namespace eegloop
