#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "stylecast/manifest.hpp"

namespace stylecast {

struct VideoInfo {
    std::string video_id;
    std::string title;
    std::string description_text;
    double duration_s = 0.0;
};

// Fetch side of one platform API. Implementations must be safe to call
// repeatedly for the same id (pure reads).
class PlatformClient {
public:
    virtual ~PlatformClient() = default;
    virtual Platform platform() const = 0;
    virtual VideoInfo fetch_video_info(const std::string& video_id) = 0;
    // Writes the media file to `dest` and returns its size in bytes.
    virtual std::uintmax_t download_media(const std::string& video_id, const fs::path& dest) = 0;
    // Comments in platform order (the order the API returns them).
    virtual std::vector<CommentRecord> fetch_comments(const std::string& video_id,
                                                      std::size_t max_count) = 0;
};

// Token bucket. Clock is injectable so tests never sleep.
class RateLimiter {
public:
    using Clock = std::function<double()>;  // seconds, monotonic
    using Sleeper = std::function<void(double)>;

    RateLimiter(double permits_per_s, double burst, Clock clock = default_clock,
                Sleeper sleeper = default_sleeper)
        : rate_(permits_per_s), burst_(burst), tokens_(burst), clock_(std::move(clock)),
          sleeper_(std::move(sleeper)) {
        if (rate_ <= 0.0 || burst_ <= 0.0) throw Error("rate limiter needs positive rate and burst");
        last_ = clock_();
    }

    void acquire() {
        refill();
        if (tokens_ < 1.0) {
            double wait = (1.0 - tokens_) / rate_;
            sleeper_(wait);
            refill();
        }
        tokens_ = std::max(0.0, tokens_ - 1.0);
    }

    double available() {
        refill();
        return tokens_;
    }

private:
    void refill() {
        double now = clock_();
        tokens_ = std::min(burst_, tokens_ + (now - last_) * rate_);
        last_ = now;
    }

    static double default_clock() {
        using namespace std::chrono;
        return duration<double>(steady_clock::now().time_since_epoch()).count();
    }
    static void default_sleeper(double s) {
        std::this_thread::sleep_for(std::chrono::duration<double>(s));
    }

    double rate_, burst_, tokens_, last_;
    Clock clock_;
    Sleeper sleeper_;
};

// Reads fixtures from a directory:
//   <root>/<video_id>/info.json       {"title","description_text","duration_s"}
//   <root>/<video_id>/media.bin       raw bytes copied on download
//   <root>/<video_id>/comments.json   [{"comment_id","text","like_count",...}]
// Missing video directory -> not-found ProviderError; info.json containing
// {"error":"forbidden"} simulates an auth failure.
class MockPlatformClient : public PlatformClient {
public:
    MockPlatformClient(Platform platform, fs::path fixture_root)
        : platform_(platform), root_(std::move(fixture_root)) {}

    Platform platform() const override { return platform_; }

    VideoInfo fetch_video_info(const std::string& video_id) override {
        json j = read_info(video_id);
        VideoInfo info;
        info.video_id = video_id;
        info.title = j.value("title", "");
        info.description_text = j.value("description_text", "");
        info.duration_s = j.value("duration_s", 0.0);
        return info;
    }

    std::uintmax_t download_media(const std::string& video_id, const fs::path& dest) override {
        read_info(video_id);  // surfaces not-found / forbidden before writing
        fs::path src = root_ / video_id / "media.bin";
        if (!fs::exists(src)) throw ProviderError("no media for video: " + video_id, false);
        fs::create_directories(dest.parent_path());
        fs::copy_file(src, dest, fs::copy_options::overwrite_existing);
        return fs::file_size(dest);
    }

    std::vector<CommentRecord> fetch_comments(const std::string& video_id,
                                              std::size_t max_count) override {
        read_info(video_id);
        fs::path src = root_ / video_id / "comments.json";
        std::vector<CommentRecord> out;
        if (!fs::exists(src)) return out;
        json arr = read_json_file(src);
        for (const auto& cj : arr) {
            CommentRecord c;
            c.comment_id = cj.value("comment_id", "");
            c.video_id = video_id;
            c.text = cj.value("text", "");
            c.like_count = cj.value("like_count", 0LL);
            c.language = default_language(platform_);
            if (cj.contains("language")) {
                auto lang = language_from_string(cj.at("language").get<std::string>());
                if (lang) c.language = *lang;
            }
            c.source = CommentSource::platform_api;
            out.push_back(std::move(c));
            if (out.size() == max_count) break;
        }
        return out;
    }

private:
    json read_info(const std::string& video_id) {
        fs::path p = root_ / video_id / "info.json";
        if (!fs::exists(p)) throw ProviderError("video not found: " + video_id, false);
        json j = read_json_file(p);
        if (j.value("error", "") == "forbidden")
            throw ProviderError("platform auth failed for video: " + video_id, false);
        return j;
    }

    Platform platform_;
    fs::path root_;
};

struct FetchResult {
    VideoManifestEntry entry;
    bool media_downloaded = false;
    bool comments_fetched = false;
};

// Populates one manifest entry: metadata, media file, raw comment dump.
// Skips pieces that already exist on disk so reruns are cheap. On failure the
// incoming entry is returned unchanged inside the thrown error's wake (caller
// keeps its copy); partial files are not left behind for metadata, and media
// is only recorded once fully written.
inline FetchResult fetch_video(PlatformClient& client, const VideoManifestEntry& seed,
                               const fs::path& workdir, RateLimiter* limiter = nullptr,
                               std::size_t max_comments = 200) {
    FetchResult result;
    result.entry = seed;
    fs::path vdir = workdir / seed.video_id;
    fs::create_directories(vdir);

    if (limiter) limiter->acquire();
    VideoInfo info = client.fetch_video_info(seed.video_id);
    if (result.entry.title.empty()) result.entry.title = info.title;
    if (result.entry.description_text.empty()) result.entry.description_text = info.description_text;
    if (result.entry.duration_s <= 0.0) result.entry.duration_s = info.duration_s;

    fs::path media = vdir / "video.mp4";
    if (!fs::exists(media)) {
        if (limiter) limiter->acquire();
        client.download_media(seed.video_id, media);
        result.media_downloaded = true;
    }
    result.entry.media_path = media.string();

    fs::path comments_path = vdir / "comments.json";
    if (!fs::exists(comments_path)) {
        if (limiter) limiter->acquire();
        auto comments = client.fetch_comments(seed.video_id, max_comments);
        json arr = json::array();
        for (const auto& c : comments) arr.push_back(to_json(c));
        write_json_file(comments_path, arr);
        result.comments_fetched = true;
    }
    return result;
}

// Top-k by like count. Stable sort keeps platform order among equal counts.
// `pool_warning` is set when fewer than k comments exist at all.
inline std::vector<CommentRecord> fetch_top_comments(std::vector<CommentRecord> comments,
                                                     std::size_t k,
                                                     bool* pool_warning = nullptr) {
    if (pool_warning) *pool_warning = comments.size() < k;
    std::stable_sort(comments.begin(), comments.end(),
                     [](const CommentRecord& a, const CommentRecord& b) {
                         return a.like_count > b.like_count;
                     });
    if (comments.size() > k) comments.resize(k);
    return comments;
}

}  // namespace stylecast
