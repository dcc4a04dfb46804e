#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "stylecast/unicode.hpp"

namespace stylecast {

// Handcrafted structural fingerprint of a comment: sentence count, a
// punctuation-class histogram, emoji count, and interjection count. Structural
// similarity is the cosine between a comment's features and a category profile.
constexpr std::size_t kFeatureDim = 9;
using FeatureVector = std::array<double, kFeatureDim>;

namespace detail {

// Small bilingual interjection lexicon; matched as lowercase substrings.
inline const std::vector<std::string>& interjection_lexicon() {
    static const std::vector<std::string> lex = {
        "haha", "lol",  "lmao", "omg",  "wow",  "yay",  "whoa", "hmm",
        "哈哈", "嘿嘿", "嘻嘻", "噗",   "哇",   "呀",   "啊",   "哦",
        "唉",   "呜呜", "嗯",   "哎哟",
    };
    return lex;
}

inline std::string ascii_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return 0;
    std::size_t n = 0, pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

}  // namespace detail

inline FeatureVector extract_features(std::string_view text) {
    FeatureVector f{};
    auto cps = decode_utf8(text);

    auto is_dot = [](char32_t cp) { return cp == U'.' || cp == 0x3002 || cp == 0x2026; };

    std::size_t sentences = 0;
    bool content_pending = false;  // non-space text seen since the last terminator run
    std::size_t i = 0;
    while (i < cps.size()) {
        char32_t cp = cps[i];
        if (is_dot(cp)) {
            // A maximal dot run is one token: a lone ./。 is a period, anything
            // longer (or containing the one-char ellipsis) is an ellipsis.
            std::size_t j = i;
            bool has_ellipsis_char = false;
            while (j < cps.size() && is_dot(cps[j])) {
                if (cps[j] == 0x2026) has_ellipsis_char = true;
                ++j;
            }
            if (j - i >= 2 || has_ellipsis_char)
                f[5] += 1;
            else
                f[1] += 1;
            ++sentences;
            content_pending = false;
            i = j;
            continue;
        }
        switch (punct_class(cp)) {
            case PunctClass::exclaim: f[2] += 1; break;
            case PunctClass::question: f[3] += 1; break;
            case PunctClass::comma: f[4] += 1; break;
            case PunctClass::other: f[6] += 1; break;
            default: break;
        }
        if (is_emoji_cp(cp)) f[7] += 1;
        if (is_sentence_end_cp(cp)) {
            // Collapse !?! style runs into a single sentence boundary.
            std::size_t j = i;
            while (j < cps.size() && is_sentence_end_cp(cps[j]) && !is_dot(cps[j])) {
                char32_t run_cp = cps[j];
                if (j > i) {
                    switch (punct_class(run_cp)) {
                        case PunctClass::exclaim: f[2] += 1; break;
                        case PunctClass::question: f[3] += 1; break;
                        default: break;
                    }
                    if (is_emoji_cp(run_cp)) f[7] += 1;
                }
                ++j;
            }
            ++sentences;
            content_pending = false;
            i = j;
            continue;
        }
        if (!is_space_cp(cp)) content_pending = true;
        ++i;
    }
    if (content_pending) ++sentences;  // trailing unterminated text is a sentence
    f[0] = static_cast<double>(sentences);

    std::string lower = detail::ascii_lower(text);
    for (const auto& word : detail::interjection_lexicon())
        f[8] += static_cast<double>(detail::count_occurrences(lower, word));
    return f;
}

inline double feature_norm(const FeatureVector& f) {
    double s = 0.0;
    for (double v : f) s += v * v;
    return std::sqrt(s);
}

// Cosine over non-negative feature vectors, so the result lands in [0,1].
// Either side degenerate (all zero) scores 0.
inline double feature_cosine(const FeatureVector& a, const FeatureVector& b) {
    double na = feature_norm(a), nb = feature_norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < kFeatureDim; ++i) dot += a[i] * b[i];
    return std::clamp(dot / (na * nb), 0.0, 1.0);
}

inline FeatureVector mean_features(const std::vector<FeatureVector>& features) {
    FeatureVector mean{};
    if (features.empty()) return mean;
    for (const auto& f : features)
        for (std::size_t i = 0; i < kFeatureDim; ++i) mean[i] += f[i];
    for (double& v : mean) v /= static_cast<double>(features.size());
    return mean;
}

}  // namespace stylecast
