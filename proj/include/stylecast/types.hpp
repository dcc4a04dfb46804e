#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "stylecast/error.hpp"

namespace stylecast {

enum class Platform { douyin, youtube };
enum class Language { zh, en };

// Closed six-value style set; no runtime extension.
enum class StyleLabel {
    puns_homophones,
    rhyming,
    meme_application,
    sarcasm_irony,
    plain_humor,
    content_extraction,
};

// Declaration order is the fixed tie-break order for classification.
// `other` is a classifier fallback only and never appears in curated data.
enum class VideoCategory {
    talk_show,
    humorous_commentary,
    funny_animal,
    daily_life_jokes,
    comedy_skits,
    other,
};

inline constexpr std::array<VideoCategory, 5> kCuratedCategories = {
    VideoCategory::talk_show,      VideoCategory::humorous_commentary,
    VideoCategory::funny_animal,   VideoCategory::daily_life_jokes,
    VideoCategory::comedy_skits,
};

inline constexpr std::array<StyleLabel, 6> kAllStyles = {
    StyleLabel::puns_homophones, StyleLabel::rhyming,     StyleLabel::meme_application,
    StyleLabel::sarcasm_irony,   StyleLabel::plain_humor, StyleLabel::content_extraction,
};

inline std::string to_string(Platform p) { return p == Platform::douyin ? "douyin" : "youtube"; }
inline std::string to_string(Language l) { return l == Language::zh ? "zh" : "en"; }

inline std::string to_string(StyleLabel s) {
    switch (s) {
        case StyleLabel::puns_homophones: return "puns_homophones";
        case StyleLabel::rhyming: return "rhyming";
        case StyleLabel::meme_application: return "meme_application";
        case StyleLabel::sarcasm_irony: return "sarcasm_irony";
        case StyleLabel::plain_humor: return "plain_humor";
        case StyleLabel::content_extraction: return "content_extraction";
    }
    return "plain_humor";
}

inline std::string to_string(VideoCategory c) {
    switch (c) {
        case VideoCategory::talk_show: return "talk_show";
        case VideoCategory::humorous_commentary: return "humorous_commentary";
        case VideoCategory::funny_animal: return "funny_animal";
        case VideoCategory::daily_life_jokes: return "daily_life_jokes";
        case VideoCategory::comedy_skits: return "comedy_skits";
        case VideoCategory::other: return "other";
    }
    return "other";
}

inline std::optional<Platform> platform_from_string(std::string_view s) {
    if (s == "douyin") return Platform::douyin;
    if (s == "youtube") return Platform::youtube;
    return std::nullopt;
}

inline std::optional<Language> language_from_string(std::string_view s) {
    if (s == "zh") return Language::zh;
    if (s == "en") return Language::en;
    return std::nullopt;
}

inline std::optional<StyleLabel> style_from_string(std::string_view s) {
    for (StyleLabel label : kAllStyles)
        if (to_string(label) == s) return label;
    return std::nullopt;
}

inline std::optional<VideoCategory> category_from_string(std::string_view s) {
    for (VideoCategory c : kCuratedCategories)
        if (to_string(c) == s) return c;
    if (s == "other") return VideoCategory::other;
    return std::nullopt;
}

// Platform determines the comment language: Douyin is Chinese, YouTube English.
inline Language default_language(Platform p) {
    return p == Platform::douyin ? Language::zh : Language::en;
}

}  // namespace stylecast
