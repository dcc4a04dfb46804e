#pragma once

#include <cstdlib>
#include <string>

#include "httplib.h"
#include "stylecast/media.hpp"
#include "stylecast/platform.hpp"

namespace stylecast {

// Settings shared by both API-backed platform clients. Official video APIs do
// not serve raw media, so downloads shell out to a configurable command
// ({url}/{output} placeholders, e.g. a yt-dlp invocation).
struct PlatformApiConfig {
    std::string base_url;         // test servers override the real endpoint
    std::string api_key_env;      // env var holding the token/key
    std::string download_command; // empty -> downloads unavailable
    double timeout_s = 30.0;
};

namespace detail {

inline std::string require_api_key(const std::string& env_name) {
    const char* key = std::getenv(env_name.c_str());
    if (!key || !*key) throw ProviderError("missing API key env: " + env_name, false);
    return key;
}

inline json get_json(const PlatformApiConfig& config, const std::string& path,
                     const httplib::Headers& headers) {
    if (config.base_url.empty())
        throw ProviderError("platform api base_url not configured", false);
    if (config.base_url.rfind("https://", 0) == 0)
        throw ProviderError("https endpoints need an SSL build; use an http gateway", false);
    httplib::Client client(config.base_url);
    client.set_connection_timeout(static_cast<time_t>(config.timeout_s), 0);
    client.set_read_timeout(static_cast<time_t>(config.timeout_s), 0);
    httplib::Result res = client.Get(path, headers);
    if (!res)
        throw ProviderError("platform transport error: " + httplib::to_string(res.error()), true);
    if (res->status == 401 || res->status == 403)
        throw ProviderError("platform auth failed (status " + std::to_string(res->status) + ")",
                            false);
    if (res->status == 429 || res->status >= 500)
        throw ProviderError("platform unavailable (status " + std::to_string(res->status) + ")",
                            true);
    if (res->status < 200 || res->status >= 300)
        throw ProviderError("platform rejected request (status " + std::to_string(res->status) +
                                "): " + res->body,
                            false);
    try {
        return json::parse(res->body);
    } catch (const json::parse_error&) {
        throw ProviderError("platform returned malformed JSON", true);
    }
}

// ISO 8601 durations as used by the YouTube data API, e.g. PT1H2M3S.
inline double parse_iso8601_duration(const std::string& s) {
    if (s.rfind("PT", 0) != 0) throw ProviderError("unparsable duration: " + s, false);
    double total = 0.0;
    std::string digits;
    for (std::size_t i = 2; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            continue;
        }
        if (digits.empty()) throw ProviderError("unparsable duration: " + s, false);
        double v = std::stod(digits);
        digits.clear();
        switch (c) {
            case 'H': total += v * 3600.0; break;
            case 'M': total += v * 60.0; break;
            case 'S': total += v; break;
            default: throw ProviderError("unparsable duration: " + s, false);
        }
    }
    if (!digits.empty()) throw ProviderError("unparsable duration: " + s, false);
    return total;
}

inline std::uintmax_t download_via_command(const std::string& command_template,
                                           const std::string& url, const fs::path& dest) {
    if (command_template.empty())
        throw ProviderError(
            "no media downloader configured; set platform.download_command or use a mock client",
            false);
    fs::create_directories(dest.parent_path());
    std::string cmd = substitute_placeholders(command_template,
                                              {{"{url}", url}, {"{output}", dest.string()}});
    CommandResult run = run_command(cmd);
    if (run.exit_code != 0 || !fs::exists(dest))
        throw ProviderError("media download failed (exit " + std::to_string(run.exit_code) +
                                "): " + run.output,
                            true);
    return fs::file_size(dest);
}

}  // namespace detail

// YouTube Data API v3 shapes:
//   GET /videos?part=snippet,contentDetails&id=<id>&key=<KEY>
//   GET /commentThreads?part=snippet&videoId=<id>&maxResults=<n>&key=<KEY>
class YoutubeApiClient : public PlatformClient {
public:
    explicit YoutubeApiClient(PlatformApiConfig config) : config_(std::move(config)) {
        if (config_.api_key_env.empty()) config_.api_key_env = "YOUTUBE_API_KEY";
    }

    Platform platform() const override { return Platform::youtube; }

    VideoInfo fetch_video_info(const std::string& video_id) override {
        std::string key = detail::require_api_key(config_.api_key_env);
        json doc = detail::get_json(
            config_, "/videos?part=snippet,contentDetails&id=" + video_id + "&key=" + key, {});
        if (!doc.contains("items") || doc["items"].empty())
            throw ProviderError("video not found: " + video_id, false);
        const json& item = doc["items"][0];
        VideoInfo info;
        info.video_id = video_id;
        info.title = item["snippet"].value("title", "");
        info.description_text = item["snippet"].value("description", "");
        info.duration_s =
            detail::parse_iso8601_duration(item["contentDetails"].value("duration", "PT0S"));
        return info;
    }

    std::uintmax_t download_media(const std::string& video_id, const fs::path& dest) override {
        return detail::download_via_command(config_.download_command,
                                            "https://www.youtube.com/watch?v=" + video_id, dest);
    }

    std::vector<CommentRecord> fetch_comments(const std::string& video_id,
                                              std::size_t max_count) override {
        std::string key = detail::require_api_key(config_.api_key_env);
        json doc = detail::get_json(config_,
                                    "/commentThreads?part=snippet&videoId=" + video_id +
                                        "&maxResults=" + std::to_string(max_count) +
                                        "&key=" + key,
                                    {});
        std::vector<CommentRecord> out;
        for (const auto& item : doc.value("items", json::array())) {
            const json& snippet = item["snippet"]["topLevelComment"]["snippet"];
            CommentRecord c;
            c.comment_id = item.value("id", "");
            c.video_id = video_id;
            c.text = snippet.value("textOriginal", "");
            c.like_count = snippet.value("likeCount", 0L);
            c.language = Language::en;
            c.source = CommentSource::platform_api;
            out.push_back(std::move(c));
            if (out.size() == max_count) break;
        }
        return out;
    }

private:
    PlatformApiConfig config_;
};

// Douyin open-platform shapes (token in the access-token header):
//   GET /video/info?video_id=<id>           -> {"data": {"title", "description", "duration_ms"}}
//   GET /video/comments?video_id=<id>&count=<n>
//     -> {"data": {"comments": [{"cid", "text", "digg_count"}]}}
class DouyinApiClient : public PlatformClient {
public:
    explicit DouyinApiClient(PlatformApiConfig config) : config_(std::move(config)) {
        if (config_.api_key_env.empty()) config_.api_key_env = "DOUYIN_API_TOKEN";
    }

    Platform platform() const override { return Platform::douyin; }

    VideoInfo fetch_video_info(const std::string& video_id) override {
        json doc = detail::get_json(config_, "/video/info?video_id=" + video_id, auth_headers());
        if (!doc.contains("data")) throw ProviderError("video not found: " + video_id, false);
        const json& data = doc["data"];
        VideoInfo info;
        info.video_id = video_id;
        info.title = data.value("title", "");
        info.description_text = data.value("description", "");
        info.duration_s = data.value("duration_ms", 0.0) / 1000.0;
        return info;
    }

    std::uintmax_t download_media(const std::string& video_id, const fs::path& dest) override {
        return detail::download_via_command(config_.download_command,
                                            "https://www.douyin.com/video/" + video_id, dest);
    }

    std::vector<CommentRecord> fetch_comments(const std::string& video_id,
                                              std::size_t max_count) override {
        json doc = detail::get_json(
            config_, "/video/comments?video_id=" + video_id + "&count=" +
                         std::to_string(max_count),
            auth_headers());
        std::vector<CommentRecord> out;
        for (const auto& item : doc["data"].value("comments", json::array())) {
            CommentRecord c;
            c.comment_id = item.value("cid", "");
            c.video_id = video_id;
            c.text = item.value("text", "");
            c.like_count = item.value("digg_count", 0L);
            c.language = Language::zh;
            c.source = CommentSource::platform_api;
            out.push_back(std::move(c));
            if (out.size() == max_count) break;
        }
        return out;
    }

private:
    httplib::Headers auth_headers() {
        return {{"access-token", detail::require_api_key(config_.api_key_env)}};
    }

    PlatformApiConfig config_;
};

}  // namespace stylecast
