// eegloop CLI: analyze | simulate | listen | recommend
//
// Exit codes are a stable scripting contract:
//   0 success, 1 input/parse error, 2 precondition violation,
//   3 network / no data.

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "eegloop/eegloop.hpp"

namespace fs = std::filesystem;
using namespace eegloop;

namespace {

constexpr const char* kFixedTimestamp = "19700101T000000Z";

std::string session_timestamp(bool fixed) {
    if (fixed) return kFixedTimestamp;
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

int parse_mains(const std::string& s) {
    if (s == "off" || s == "0") return 0;
    if (s == "50") return 50;
    if (s == "60") return 60;
    throw InputError("config: mains_hz must be 50, 60 or 0 (off)");
}

ActivityCatalog catalog_for(const RunConfig& cfg) {
    return cfg.catalog_path.empty() ? default_catalog() : load_catalog(cfg.catalog_path);
}

// Minimal TOML-style reader: `key = value` lines, # comments, optional
// quotes; section headers are ignored.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config: cannot open '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string t = trim(line);
        if (t.empty() || t.front() == '[') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InputError("config: expected key = value, got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                                  (value.front() == '\'' && value.back() == '\'')))
            value = value.substr(1, value.size() - 2);
        kv[key] = value;
    }
    return kv;
}

template <typename T>
T parse_config_value(const std::string& key, const std::string& value) {
    T out{};
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw InputError("config: bad value '" + value + "' for " + key);
    return out;
}

struct CommonFlags {
    RunConfig cfg;
    std::string mains = "50";
    std::string config_path;
    CLI::Option* rate_opt = nullptr;
    CLI::Option* epoch_opt = nullptr;
    CLI::Option* hop_opt = nullptr;
    CLI::Option* artifact_opt = nullptr;
    CLI::Option* mains_opt = nullptr;
    CLI::Option* catalog_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* fixed_ts_opt = nullptr;

    void attach(CLI::App& cmd) {
        cmd.add_option("--config", config_path,
                       "TOML-style config file; command-line flags win");
        rate_opt = cmd.add_option("--rate", cfg.sample_rate_hz, "Sample rate in Hz");
        epoch_opt =
            cmd.add_option("--epoch", cfg.epoch_len, "Epoch length in samples (power of two)");
        hop_opt = cmd.add_option("--hop", cfg.hop, "Hop between epochs in samples");
        artifact_opt = cmd.add_option("--artifact-uv", cfg.artifact_threshold_uv,
                                      "Peak-to-peak artifact threshold in microvolts");
        mains_opt = cmd.add_option("--mains", mains,
                                   "Mains frequency to suppress: 50, 60 or off");
        catalog_opt = cmd.add_option("--catalog", cfg.catalog_path,
                                     "Activity catalog JSON file");
        out_opt = cmd.add_option("--out", cfg.out_dir, "Output directory");
        seed_opt = cmd.add_option("--seed", cfg.seed, "PRNG seed echoed into reports");
        fixed_ts_opt = cmd.add_flag("--fixed-timestamp", cfg.fixed_timestamp,
                                    "Use a fixed timestamp for byte-reproducible outputs");
    }

    RunConfig finish() {
        if (!config_path.empty()) {
            const auto kv = read_config_file(config_path);
            const auto want = [&](const char* key, const CLI::Option* opt) {
                return opt->count() == 0 && kv.count(key) > 0;
            };
            if (want("rate", rate_opt))
                cfg.sample_rate_hz = parse_config_value<double>("rate", kv.at("rate"));
            if (want("epoch", epoch_opt))
                cfg.epoch_len = parse_config_value<std::size_t>("epoch", kv.at("epoch"));
            if (want("hop", hop_opt))
                cfg.hop = parse_config_value<std::size_t>("hop", kv.at("hop"));
            if (want("artifact-uv", artifact_opt))
                cfg.artifact_threshold_uv =
                    parse_config_value<double>("artifact-uv", kv.at("artifact-uv"));
            if (want("mains", mains_opt)) mains = kv.at("mains");
            if (want("catalog", catalog_opt)) cfg.catalog_path = kv.at("catalog");
            if (want("out", out_opt)) cfg.out_dir = kv.at("out");
            if (want("seed", seed_opt))
                cfg.seed = parse_config_value<std::uint64_t>("seed", kv.at("seed"));
            if (want("fixed-timestamp", fixed_ts_opt)) {
                const std::string& v = kv.at("fixed-timestamp");
                if (v == "true" || v == "1") cfg.fixed_timestamp = true;
                else if (v == "false" || v == "0") cfg.fixed_timestamp = false;
                else throw InputError("config: bad value '" + v + "' for fixed-timestamp");
            }
        }
        cfg.mains_hz = parse_mains(mains);
        validate_run_config(cfg);
        return cfg;
    }
};

// Writes report + session files and prints the summary table to stdout.
void emit_analysis(const SessionState& state, const RunConfig& cfg) {
    const std::string ts = session_timestamp(cfg.fixed_timestamp);
    const SubjectReport report = build_report(state, config_echo(cfg), ts);

    const fs::path out_dir = cfg.out_dir;
    const std::string stem = state.subject.subject_id + "_" + ts;
    const fs::path json_path = out_dir / "reports" / (stem + ".report.json");
    const fs::path text_path = out_dir / "reports" / (stem + ".report.txt");
    atomic_write_file(json_path, render_json(report));
    atomic_write_file(text_path, render_text(report));
    const fs::path session_path = save_session(state, out_dir, ts);

    std::cout << kTableHeader << "\n";
    for (const auto& entry : report.entries)
        std::cout << table_row(report, entry) << "\n";
    std::cerr << "report: " << json_path.string() << "\n"
              << "report: " << text_path.string() << "\n"
              << "session: " << session_path.string() << "\n";
}

int cmd_analyze(const std::string& recording_path, const std::string& subject_id,
                const std::string& display_name, const RunConfig& cfg) {
    const ActivityCatalog catalog = catalog_for(cfg);
    const Recording rec =
        read_recording_file(recording_path, cfg.sample_rate_hz, subject_id);
    const SubjectProfile subject{subject_id,
                                 display_name.empty() ? subject_id : display_name, ""};
    const SessionState state = analyze_recording(rec, subject, catalog, cfg);
    emit_analysis(state, cfg);
    return 0;
}

SyntheticSpec parse_segment_spec(const Json& j, double rate, double noise_std,
                                 std::uint64_t seed) {
    SyntheticSpec seg;
    seg.sample_rate_hz = rate;
    seg.noise_std_uv = noise_std;
    seg.seed = seed;
    seg.marker = j.at("marker").get<std::string>();
    seg.duration_s = j.at("duration_s").get<double>();
    if (j.contains("tones")) {
        for (const auto& [key, tones] : j.at("tones").items()) {
            const auto e = parse_electrode(key);
            if (!e || *e == ElectrodeId::NZ)
                throw InputError("simulate: unknown electrode '" + key + "' in spec");
            for (const auto& t : tones) {
                ToneSpec tone;
                tone.freq_hz = t.at("freq_hz").get<double>();
                tone.amplitude_uv = t.at("amplitude_uv").get<double>();
                tone.phase_rad = t.value("phase_rad", 0.0);
                seg.tones[electrode_index(*e)].push_back(tone);
            }
        }
    }
    return seg;
}

int cmd_simulate(const std::string& spec_path, const std::string& out_path,
                 const CLI::Option* seed_flag, std::uint64_t seed_override) {
    std::ifstream in(spec_path);
    if (!in) throw InputError("simulate: cannot open '" + spec_path + "'");
    Json spec;
    try {
        spec = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("simulate: invalid spec JSON: ") + e.what());
    }

    const double rate = spec.value("sample_rate_hz", 256.0);
    const double noise_std = spec.value("noise_std_uv", 0.0);
    const std::uint64_t seed =
        seed_flag->count() ? seed_override : spec.value("seed", std::uint64_t{0});
    const std::string subject = spec.value("subject", "synthetic");

    if (!spec.contains("segments") || !spec.at("segments").is_array() ||
        spec.at("segments").empty())
        throw InputError("simulate: spec has no segments");

    std::vector<SyntheticSpec> segments;
    std::uint64_t index = 0;
    for (const auto& js : spec.at("segments"))
        segments.push_back(parse_segment_spec(js, rate, noise_std, seed + index++));

    const Recording rec = concat_segments(segments, subject);
    write_recording_file(rec, out_path);
    std::cout << out_path << "\n";
    return 0;
}

int cmd_listen(const std::string& subject_id, std::uint16_t port, double duration_s,
               bool analyze_after, const RunConfig& cfg) {
    if (!(duration_s > 0.0))
        throw InputError("listen: duration must be positive");
    UdpSource source(port);
    std::cerr << "listening on udp port " << source.port() << " for " << duration_s
              << " s\n";
    StopCondition stop;
    stop.duration = std::chrono::milliseconds(
        static_cast<std::int64_t>(duration_s * 1000.0));
    Recording rec = collect_stream(source, stop, cfg.sample_rate_hz, subject_id);
    for (const auto& note : rec.notes) std::cerr << "note: " << note << "\n";

    const std::string ts = session_timestamp(cfg.fixed_timestamp);
    const fs::path csv_path =
        fs::path(cfg.out_dir) / "recordings" / (subject_id + "_" + ts + ".csv");
    write_recording_file(rec, csv_path);
    std::cout << csv_path.string() << "\n";

    if (analyze_after) {
        const SubjectProfile subject{subject_id, subject_id, ""};
        const SessionState state =
            analyze_recording(rec, subject, catalog_for(cfg), cfg);
        emit_analysis(state, cfg);
    }
    return 0;
}

int cmd_recommend(const std::string& session_path) {
    const SessionState state = load_session(session_path);
    const Recommendation rec = recommend_next(state);
    std::cout << recommendation_to_json(rec).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming EEG band analysis and closed-loop session tool"};
    app.require_subcommand(1);

    auto* analyze = app.add_subcommand("analyze", "Analyze a CSV recording into a session report");
    std::string rec_path, subject_id, display_name;
    analyze->add_option("recording", rec_path, "CSV recording path")->required();
    analyze->add_option("subject", subject_id, "Subject id")->required();
    analyze->add_option("--name", display_name, "Subject display name");
    CommonFlags analyze_flags;
    analyze_flags.attach(*analyze);

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic CSV recording");
    std::string spec_path, out_path;
    std::uint64_t seed_override = 0;
    simulate->add_option("spec", spec_path, "Synthetic spec JSON path")->required();
    simulate->add_option("output", out_path, "Output CSV path")->required();
    auto* seed_flag = simulate->add_option("--seed", seed_override, "Override the spec seed");

    auto* listen = app.add_subcommand("listen", "Record packets from a UDP stream");
    std::string listen_subject;
    std::uint16_t port = 7331;
    double duration_s = 10.0;
    bool analyze_after = false;
    listen->add_option("subject", listen_subject, "Subject id")->required();
    listen->add_option("--port", port, "UDP port to bind");
    listen->add_option("--duration", duration_s, "Listen duration in seconds");
    listen->add_flag("--analyze", analyze_after, "Analyze immediately after recording");
    CommonFlags listen_flags;
    listen_flags.attach(*listen);

    auto* recommend = app.add_subcommand("recommend", "Print the next-activity recommendation");
    std::string session_path;
    recommend->add_option("session", session_path, "Session JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (analyze->parsed())
            return cmd_analyze(rec_path, subject_id, display_name, analyze_flags.finish());
        if (simulate->parsed())
            return cmd_simulate(spec_path, out_path, seed_flag, seed_override);
        if (listen->parsed())
            return cmd_listen(listen_subject, port, duration_s, analyze_after,
                              listen_flags.finish());
        if (recommend->parsed())
            return cmd_recommend(session_path);
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NetworkError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
