#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stylecast/manifest.hpp"
#include "stylecast/text_features.hpp"

namespace stylecast {

// One curated video paired with its semantic description and comments.
struct DatasetVideo {
    std::string video_id;
    Platform platform = Platform::douyin;
    Language language = Language::zh;
    VideoCategory category = VideoCategory::talk_show;
    std::string semantic_description;
    std::vector<CommentRecord> comments;
};

struct DatasetBundle {
    std::vector<DatasetVideo> videos;
    // Mean structural feature vector per curated category, computed at build.
    std::map<VideoCategory, FeatureVector> category_profiles;

    std::vector<const CommentRecord*> all_comments() const {
        std::vector<const CommentRecord*> out;
        for (const auto& v : videos)
            for (const auto& c : v.comments) out.push_back(&c);
        return out;
    }

    const DatasetVideo* find_video(const std::string& video_id) const {
        for (const auto& v : videos)
            if (v.video_id == video_id) return &v;
        return nullptr;
    }
};

struct FewShotPair {
    std::string description;
    std::string comment;
};

struct AssembleParams {
    // Expected videos per (platform, category) cell. Unset: inferred as the
    // modal cell count, then cross-checked against N_platform / |categories|.
    std::optional<int> per_cell;
};

namespace detail {

inline std::string cell_name(Platform p, VideoCategory c) {
    return "(" + to_string(p) + ", " + to_string(c) + ")";
}

}  // namespace detail

// Verifies the per-platform-per-category balance rule (each cell holds exactly
// N_platform / |categories| videos) and pairs every video's description with
// its comments. Violations are reported, never silently fixed.
inline DatasetBundle assemble_dataset(const std::vector<VideoManifestEntry>& entries,
                                      const std::vector<CommentRecord>& comments,
                                      const AssembleParams& params = {}) {
    if (entries.empty()) throw Error("empty dataset");

    for (const auto& e : entries) {
        if (!e.category) throw Error("uncategorized video: " + e.video_id);
        if (*e.category == VideoCategory::other)
            throw Error("category 'other' not allowed in curated dataset: " + e.video_id);
        if (e.semantic_description.empty())
            throw Error("missing semantic description: " + e.video_id);
    }
    for (const auto& c : comments) {
        bool known = false;
        for (const auto& e : entries)
            if (e.video_id == c.video_id) known = true;
        if (!known) throw Error("comment references unknown video: " + c.video_id);
    }

    // Balance check per platform.
    std::map<Platform, std::map<VideoCategory, int>> cells;
    for (const auto& e : entries) cells[e.platform][*e.category] += 1;

    std::vector<std::string> violations;
    for (auto& [platform, by_category] : cells) {
        int platform_total = 0;
        for (VideoCategory c : kCuratedCategories) platform_total += by_category[c];

        int expected;
        if (params.per_cell) {
            expected = *params.per_cell;
        } else {
            // Modal cell count; ties resolve to the smaller count.
            std::map<int, int> freq;
            for (VideoCategory c : kCuratedCategories) freq[by_category[c]] += 1;
            expected = 0;
            int best = -1;
            for (auto& [count, f] : freq)
                if (f > best) {
                    best = f;
                    expected = count;
                }
        }
        for (VideoCategory c : kCuratedCategories)
            if (by_category[c] != expected)
                violations.push_back("unbalanced cell " + detail::cell_name(platform, c) +
                                     ": count=" + std::to_string(by_category[c]) +
                                     " expected=" + std::to_string(expected));
        if (platform_total != expected * static_cast<int>(kCuratedCategories.size()) &&
            violations.empty())
            violations.push_back("platform " + to_string(platform) + " total " +
                                 std::to_string(platform_total) + " is not divisible into " +
                                 std::to_string(kCuratedCategories.size()) + " equal cells");
    }
    if (!violations.empty()) {
        std::string message = "dataset balance check failed: ";
        for (std::size_t i = 0; i < violations.size(); ++i) {
            if (i) message += "; ";
            message += violations[i];
        }
        throw Error(message);
    }

    DatasetBundle bundle;
    for (const auto& e : entries) {
        DatasetVideo v;
        v.video_id = e.video_id;
        v.platform = e.platform;
        v.language = e.language;
        v.category = *e.category;
        v.semantic_description = e.semantic_description;
        for (const auto& c : comments)
            if (c.video_id == e.video_id) v.comments.push_back(c);
        bundle.videos.push_back(std::move(v));
    }

    std::map<VideoCategory, std::vector<FeatureVector>> features;
    for (const auto& v : bundle.videos)
        for (const auto& c : v.comments) features[v.category].push_back(extract_features(c.text));
    for (VideoCategory c : kCuratedCategories)
        bundle.category_profiles[c] = mean_features(features[c]);
    return bundle;
}

// First k dataset comments carrying the requested style and language, in
// bundle order; deterministic so prompts are reproducible.
inline std::vector<FewShotPair> select_few_shot(const DatasetBundle& bundle, StyleLabel style,
                                                Language language, std::size_t k) {
    std::vector<FewShotPair> out;
    for (const auto& v : bundle.videos) {
        for (const auto& c : v.comments) {
            if (c.language != language) continue;
            if (!c.style_label || *c.style_label != style) continue;
            out.push_back({v.semantic_description, c.text});
            if (out.size() == k) return out;
        }
    }
    return out;
}

// ---- persistence: one document per video plus an index ----

inline json to_json(const DatasetVideo& v) {
    json comments = json::array();
    for (const auto& c : v.comments) comments.push_back(to_json(c));
    return json{{"video_id", v.video_id},
                {"platform", to_string(v.platform)},
                {"language", to_string(v.language)},
                {"category", to_string(v.category)},
                {"semantic_description", v.semantic_description},
                {"comments", comments}};
}

inline DatasetVideo dataset_video_from_json(const json& j) {
    DatasetVideo v;
    v.video_id = j.at("video_id").get<std::string>();
    auto p = platform_from_string(j.value("platform", ""));
    if (!p) throw Error("unknown platform: " + j.value("platform", ""));
    v.platform = *p;
    auto lang = language_from_string(j.value("language", ""));
    if (!lang) throw Error("unknown language in dataset video: " + v.video_id);
    v.language = *lang;
    auto c = category_from_string(j.value("category", ""));
    if (!c) throw Error("unknown category in dataset video: " + v.video_id);
    v.category = *c;
    v.semantic_description = j.value("semantic_description", "");
    if (j.contains("comments"))
        for (const auto& cj : j.at("comments")) v.comments.push_back(comment_from_json(cj));
    return v;
}

inline void save_dataset(const fs::path& dir, const DatasetBundle& bundle) {
    fs::create_directories(dir);
    json index;
    json ids = json::array();
    for (const auto& v : bundle.videos) {
        write_json_file(dir / (v.video_id + ".json"), to_json(v));
        ids.push_back(v.video_id);
    }
    index["video_ids"] = ids;
    json profiles = json::object();
    for (const auto& [category, profile] : bundle.category_profiles)
        profiles[to_string(category)] = profile;
    index["category_profiles"] = profiles;
    write_json_file(dir / "index.json", index);
}

inline DatasetBundle load_dataset(const fs::path& dir) {
    json index = read_json_file(dir / "index.json");
    DatasetBundle bundle;
    for (const auto& id : index.at("video_ids"))
        bundle.videos.push_back(
            dataset_video_from_json(read_json_file(dir / (id.get<std::string>() + ".json"))));
    if (index.contains("category_profiles"))
        for (auto it = index.at("category_profiles").begin();
             it != index.at("category_profiles").end(); ++it) {
            auto c = category_from_string(it.key());
            if (!c) continue;
            FeatureVector f{};
            auto values = it.value().get<std::vector<double>>();
            for (std::size_t i = 0; i < std::min(values.size(), f.size()); ++i) f[i] = values[i];
            bundle.category_profiles[*c] = f;
        }
    return bundle;
}

}  // namespace stylecast
