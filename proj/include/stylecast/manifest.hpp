#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stylecast/json_util.hpp"
#include "stylecast/types.hpp"

namespace stylecast {

struct TranscriptSegment {
    double start_s = 0.0;
    double end_s = 0.0;
    std::string text;
    std::vector<std::size_t> linked_frame_indices;
};

struct AnnotationEntry {
    std::string annotator_id;
    StyleLabel label = StyleLabel::plain_humor;
};

enum class CommentSource { platform_api, generated };

inline std::string to_string(CommentSource s) {
    return s == CommentSource::platform_api ? "platform_api" : "generated";
}

struct CommentRecord {
    std::string comment_id;
    std::string video_id;
    std::string text;
    long like_count = 0;
    Language language = Language::zh;
    std::optional<StyleLabel> style_label;
    CommentSource source = CommentSource::platform_api;
    std::vector<AnnotationEntry> audit;
};

// One manifest entry; `extra` carries unknown JSON keys for round-tripping.
struct VideoManifestEntry {
    std::string video_id;
    Platform platform = Platform::douyin;
    std::string url;
    std::string title;
    std::string description_text;
    double duration_s = 0.0;
    Language language = Language::zh;
    std::string media_path;
    std::vector<TranscriptSegment> transcript;
    std::vector<std::string> frame_paths;
    std::optional<VideoCategory> category;
    std::string semantic_description;
    json extra = json::object();
};

struct Manifest {
    std::vector<VideoManifestEntry> videos;
    json extra = json::object();
};

// ---- JSON (snake_case wire format) ----

inline json to_json(const TranscriptSegment& seg) {
    return json{{"start_s", seg.start_s},
                {"end_s", seg.end_s},
                {"text", seg.text},
                {"linked_frame_indices", seg.linked_frame_indices}};
}

inline TranscriptSegment transcript_segment_from_json(const json& j) {
    TranscriptSegment seg;
    seg.start_s = j.value("start_s", 0.0);
    seg.end_s = j.value("end_s", 0.0);
    seg.text = j.value("text", "");
    if (j.contains("linked_frame_indices"))
        seg.linked_frame_indices = j.at("linked_frame_indices").get<std::vector<std::size_t>>();
    return seg;
}

inline json to_json(const CommentRecord& c) {
    json j{{"comment_id", c.comment_id}, {"video_id", c.video_id},
           {"text", c.text},             {"like_count", c.like_count},
           {"language", to_string(c.language)}, {"source", to_string(c.source)}};
    if (c.style_label) j["style_label"] = to_string(*c.style_label);
    if (!c.audit.empty()) {
        json audit = json::array();
        for (const auto& a : c.audit)
            audit.push_back({{"annotator_id", a.annotator_id}, {"label", to_string(a.label)}});
        j["audit"] = audit;
    }
    return j;
}

inline CommentRecord comment_from_json(const json& j) {
    CommentRecord c;
    c.comment_id = j.value("comment_id", "");
    c.video_id = j.value("video_id", "");
    c.text = j.value("text", "");
    c.like_count = j.value("like_count", 0L);
    if (c.like_count < 0) throw Error("like_count must be >= 0: " + c.comment_id);
    if (auto lang = language_from_string(j.value("language", "zh")))
        c.language = *lang;
    else
        throw Error("unknown language in comment: " + c.comment_id);
    if (j.contains("style_label")) {
        auto s = style_from_string(j.at("style_label").get<std::string>());
        if (!s) throw Error("unknown style label: " + j.at("style_label").get<std::string>());
        c.style_label = *s;
    }
    c.source = j.value("source", "platform_api") == "generated" ? CommentSource::generated
                                                                : CommentSource::platform_api;
    if (j.contains("audit"))
        for (const auto& a : j.at("audit")) {
            AnnotationEntry entry;
            entry.annotator_id = a.value("annotator_id", "");
            if (auto s = style_from_string(a.value("label", "")))
                entry.label = *s;
            c.audit.push_back(entry);
        }
    return c;
}

namespace detail {

inline const char* kEntryKeys[] = {"video_id",   "platform",    "url",
                                   "title",      "description_text", "duration_s",
                                   "language",   "media_path",  "transcript",
                                   "frame_paths", "category",   "semantic_description"};

}  // namespace detail

inline json to_json(const VideoManifestEntry& e) {
    json j = e.extra;  // unknown keys first; known fields overwrite
    j["video_id"] = e.video_id;
    j["platform"] = to_string(e.platform);
    j["url"] = e.url;
    j["title"] = e.title;
    j["description_text"] = e.description_text;
    j["duration_s"] = e.duration_s;
    j["language"] = to_string(e.language);
    j["media_path"] = e.media_path;
    json transcript = json::array();
    for (const auto& seg : e.transcript) transcript.push_back(to_json(seg));
    j["transcript"] = transcript;
    j["frame_paths"] = e.frame_paths;
    if (e.category) j["category"] = to_string(*e.category);
    j["semantic_description"] = e.semantic_description;
    return j;
}

inline VideoManifestEntry entry_from_json(const json& j) {
    VideoManifestEntry e;
    e.video_id = j.value("video_id", "");
    if (e.video_id.empty()) throw Error("manifest entry missing video_id");

    std::string platform = j.value("platform", "");
    auto p = platform_from_string(platform);
    if (!p) throw Error("unknown platform: " + platform);
    e.platform = *p;

    e.url = j.value("url", "");
    e.title = j.value("title", "");
    e.description_text = j.value("description_text", "");
    e.duration_s = j.value("duration_s", 0.0);

    if (j.contains("language")) {
        auto lang = language_from_string(j.at("language").get<std::string>());
        if (!lang) throw Error("unknown language in entry: " + e.video_id);
        e.language = *lang;
    } else {
        e.language = default_language(e.platform);
    }
    if (e.language != default_language(e.platform))
        throw Error("language does not match platform for entry: " + e.video_id);

    e.media_path = j.value("media_path", "");
    if (j.contains("transcript"))
        for (const auto& seg : j.at("transcript")) e.transcript.push_back(transcript_segment_from_json(seg));
    if (j.contains("frame_paths"))
        e.frame_paths = j.at("frame_paths").get<std::vector<std::string>>();
    if (j.contains("category")) {
        auto c = category_from_string(j.at("category").get<std::string>());
        if (!c) throw Error("unknown category in entry: " + e.video_id);
        e.category = *c;
    }
    e.semantic_description = j.value("semantic_description", "");

    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : detail::kEntryKeys)
            if (it.key() == key) known = true;
        if (!known) e.extra[it.key()] = it.value();
    }
    return e;
}

inline void validate_entry_url(const VideoManifestEntry& e) {
    if (e.url.empty()) return;  // local-media workflows carry no URL
    bool ok = false;
    if (e.platform == Platform::douyin)
        ok = e.url.find("douyin.com") != std::string::npos ||
             e.url.find("iesdouyin.com") != std::string::npos;
    else
        ok = e.url.find("youtube.com") != std::string::npos ||
             e.url.find("youtu.be") != std::string::npos;
    if (!ok) throw Error("url does not match platform for entry: " + e.video_id);
}

inline json to_json(const Manifest& m) {
    json j = m.extra;
    json videos = json::array();
    for (const auto& e : m.videos) videos.push_back(to_json(e));
    j["videos"] = videos;
    return j;
}

inline Manifest manifest_from_json(const json& j) {
    Manifest m;
    if (!j.is_object() || !j.contains("videos") || !j.at("videos").is_array())
        throw Error("manifest must be an object with a 'videos' array");
    for (const auto& entry : j.at("videos")) {
        VideoManifestEntry e = entry_from_json(entry);
        validate_entry_url(e);
        for (const auto& existing : m.videos)
            if (existing.video_id == e.video_id)
                throw Error("duplicate video_id: " + e.video_id);
        m.videos.push_back(std::move(e));
    }
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "videos") m.extra[it.key()] = it.value();
    return m;
}

inline Manifest load_seed_manifest(const fs::path& path) {
    return manifest_from_json(read_json_file(path));
}

inline void save_manifest(const fs::path& path, const Manifest& m) {
    write_json_file(path, to_json(m));
}

// Records the label plus annotator provenance; relabeling appends to the audit
// trail rather than erasing history.
inline CommentRecord annotate_style(CommentRecord comment, StyleLabel label,
                                    const std::string& annotator_id) {
    comment.style_label = label;
    comment.audit.push_back({annotator_id, label});
    return comment;
}

}  // namespace stylecast
