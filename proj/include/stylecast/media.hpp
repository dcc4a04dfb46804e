#pragma once

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "stylecast/json_util.hpp"
#include "stylecast/signal.hpp"

namespace stylecast {

// Media decoding shells out to commands configured here. {input}, {time} and
// {output} placeholders are substituted with shell-quoted values. The series
// command must print one JSON object on stdout:
//   {"duration_s": <double>, "audio": [[t, v], ...], "light": [[t, v], ...]}
// with raw (unnormalized) values; normalization happens on this side.
struct DecoderCommands {
    std::string series_command = "scripts/decode_media.sh {input}";
    std::string frame_command = "scripts/extract_frame.sh {input} {time} {output}";
};

struct MediaSeries {
    SignalSeries audio;
    SignalSeries light;
    double duration_s = 0.0;
};

namespace detail {

inline std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += "'";
    return out;
}

inline std::string substitute_placeholders(std::string command,
                                           const std::vector<std::pair<std::string, std::string>>&
                                               substitutions) {
    for (const auto& [key, value] : substitutions) {
        std::string quoted = shell_quote(value);
        std::size_t pos = 0;
        while ((pos = command.find(key, pos)) != std::string::npos) {
            command.replace(pos, key.size(), quoted);
            pos += quoted.size();
        }
    }
    return command;
}

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

inline CommandResult run_command(const std::string& command) {
    CommandResult result;
    std::string wrapped = command + " 2>&1";
    FILE* pipe = ::popen(wrapped.c_str(), "r");
    if (!pipe) throw Error("cannot start decoder command: " + command);
    std::array<char, 4096> buffer;
    std::size_t n = 0;
    while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.output.append(buffer.data(), n);
    int status = ::pclose(pipe);
    if (status >= 0 && WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    return result;
}

inline SignalSeries parse_series(const json& pairs, SignalKind kind, const std::string& name) {
    SignalSeries s;
    s.kind = kind;
    if (!pairs.is_array()) throw Error("decoder output: '" + name + "' must be an array");
    for (const auto& p : pairs) {
        if (!p.is_array() || p.size() != 2)
            throw Error("decoder output: '" + name + "' entries must be [t, value] pairs");
        s.samples.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    if (s.samples.size() >= 2) {
        double span = s.samples.back().t - s.samples.front().t;
        if (span > 0.0)
            s.sample_rate_hz = static_cast<double>(s.samples.size() - 1) / span;
    } else {
        s.sample_rate_hz = 1.0;
    }
    return s;
}

}  // namespace detail

// Decodes audio-amplitude and light-intensity tracks for one video by running
// the configured subprocess, then min-max normalizes both onto [0,1].
inline MediaSeries extract_media_series(const fs::path& video_path,
                                        const DecoderCommands& commands = {}) {
    if (!fs::exists(video_path)) throw Error("file not found: " + video_path.string());
    std::string cmd =
        detail::substitute_placeholders(commands.series_command, {{"{input}", video_path.string()}});
    detail::CommandResult run = detail::run_command(cmd);
    if (run.exit_code != 0) {
        std::string tail = run.output.size() > 500 ? run.output.substr(run.output.size() - 500)
                                                   : run.output;
        throw Error("decoder failed (exit " + std::to_string(run.exit_code) + "): " + tail);
    }
    json doc = parse_json(run.output, "decoder output");
    if (!doc.contains("duration_s")) throw Error("decoder output: missing duration_s");

    MediaSeries series;
    series.duration_s = doc["duration_s"].get<double>();
    if (series.duration_s <= 0.0) throw Error("decoder output: duration must be positive");
    series.audio = normalize_min_max(
        detail::parse_series(doc.value("audio", json::array()), SignalKind::audio_amplitude,
                             "audio"));
    series.light = normalize_min_max(
        detail::parse_series(doc.value("light", json::array()), SignalKind::light_intensity,
                             "light"));
    return series;
}

// Writes one image per scheduled timestamp as frame_{index:06}.jpg and returns
// the paths in schedule order.
inline std::vector<fs::path> extract_frames(const fs::path& video_path,
                                            const FrameSchedule& schedule,
                                            const fs::path& frames_dir,
                                            const DecoderCommands& commands = {}) {
    if (!fs::exists(video_path)) throw Error("file not found: " + video_path.string());
    fs::create_directories(frames_dir);
    std::vector<fs::path> paths;
    for (std::size_t i = 0; i < schedule.frame_timestamps.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06zu.jpg", i);
        fs::path out = frames_dir / name;
        char stamp[32];
        std::snprintf(stamp, sizeof(stamp), "%.3f", schedule.frame_timestamps[i]);
        std::string cmd = detail::substitute_placeholders(
            commands.frame_command,
            {{"{input}", video_path.string()}, {"{time}", stamp}, {"{output}", out.string()}});
        detail::CommandResult run = detail::run_command(cmd);
        if (run.exit_code != 0) {
            std::string tail = run.output.size() > 500 ? run.output.substr(run.output.size() - 500)
                                                       : run.output;
            throw Error("frame extraction failed at " + std::string(stamp) + "s (exit " +
                        std::to_string(run.exit_code) + "): " + tail);
        }
        if (!fs::exists(out))
            throw Error("frame extraction produced no file: " + out.string());
        paths.push_back(out);
    }
    return paths;
}

}  // namespace stylecast
