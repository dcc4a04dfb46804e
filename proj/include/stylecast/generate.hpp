#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "stylecast/classify.hpp"
#include "stylecast/prompt.hpp"
#include "stylecast/tournament.hpp"

namespace stylecast {

struct GeneratedComment {
    std::string text;
    StyleLabel style = StyleLabel::plain_humor;
    Language language = Language::en;
    std::string request_fingerprint;
    std::string provider_id;
};

struct GenerateParams {
    int max_retries = 2;              // retryable provider failures
    std::size_t length_ceiling = 200; // Unicode scalars, all counted
    std::size_t few_shot_k = 3;
};

namespace detail {

inline bool is_quote_cp(char32_t cp) {
    switch (cp) {
        case U'"':
        case U'\'':
        case 0x2018:  // '
        case 0x2019:  // '
        case 0x201c:  // "
        case 0x201d:  // "
        case 0x300c:  // 「
        case 0x300d:  // 」
        case 0x300e:  // 『
        case 0x300f:  // 』
            return true;
        default:
            return false;
    }
}

}  // namespace detail

// Strips surrounding whitespace, then one layer of balanced quotes, repeating
// until stable.
inline std::string trim_generated(const std::string& raw) {
    std::vector<char32_t> cps = decode_utf8(raw);
    std::size_t lo = 0, hi = cps.size();
    bool changed = true;
    while (changed) {
        changed = false;
        while (lo < hi && is_space_cp(cps[lo])) ++lo;
        while (hi > lo && is_space_cp(cps[hi - 1])) --hi;
        if (hi - lo >= 2 && detail::is_quote_cp(cps[lo]) && detail::is_quote_cp(cps[hi - 1])) {
            ++lo;
            --hi;
            changed = true;
        }
    }
    return encode_utf8(std::vector<char32_t>(cps.begin() + lo, cps.begin() + hi));
}

inline std::size_t scalar_length(const std::string& text) { return decode_utf8(text).size(); }

// Cuts to at most `ceiling` scalars, preferring the last sentence terminator
// inside the window; falls back to a hard cut.
inline std::string truncate_at_sentence(const std::string& text, std::size_t ceiling) {
    std::vector<char32_t> cps = decode_utf8(text);
    if (cps.size() <= ceiling) return text;
    std::size_t cut = ceiling;
    for (std::size_t i = ceiling; i > 0; --i)
        if (is_sentence_end_cp(cps[i - 1])) {
            cut = i;
            break;
        }
    return encode_utf8(std::vector<char32_t>(cps.begin(), cps.begin() + cut));
}

// One provider round-trip with trimming, a single "shorter" re-ask when the
// ceiling is exceeded, and sentence-boundary truncation as the last resort.
inline GeneratedComment generate_comment(const GenerationRequest& request,
                                         GenerateProvider& provider,
                                         const GenerateParams& params = {}) {
    PromptDocument prompt = build_prompt(request);

    auto ask = [&](const std::string& prompt_text) -> std::string {
        std::string last_error = "provider returned empty text";
        for (int attempt = 0; attempt <= params.max_retries; ++attempt) {
            try {
                std::string text = trim_generated(provider.generate(prompt_text, request.language));
                if (!text.empty()) return text;
            } catch (const ProviderError& e) {
                if (!e.retryable()) throw;
                last_error = e.what();
            }
        }
        throw ProviderError("generation failed after " + std::to_string(params.max_retries + 1) +
                                " attempts: " + last_error + " (fingerprint " +
                                prompt.fingerprint + ")",
                            false);
    };

    std::string text = ask(prompt.text);
    if (scalar_length(text) > params.length_ceiling) {
        std::string shorter_prompt =
            prompt.text + "\n[previous answer was too long; reply again in under " +
            std::to_string(params.length_ceiling) + " characters]\n";
        text = ask(shorter_prompt);
        if (scalar_length(text) > params.length_ceiling)
            text = truncate_at_sentence(text, params.length_ceiling);
    }

    GeneratedComment out;
    out.text = text;
    out.style = request.style;
    out.language = request.language;
    out.request_fingerprint = prompt.fingerprint;
    out.provider_id = provider.provider_id();
    return out;
}

// Everything generate_for_video needs, bundled to keep call sites readable.
struct GenerationDeps {
    const DatasetBundle& dataset;
    const DatasetEmbeddingIndex& index;
    EmbedProvider& embed;
    SentimentProvider& sentiment;
    StyleScorer& scorer;
    GenerateProvider& generator;
    ClassifyParams classify_params{};
    SelectionParams selection_params{};
    GenerateParams generate_params{};
};

struct VideoGenerationResult {
    CategoryDecision decision;
    TournamentResult tournament;
    PromptDocument prompt;
    GeneratedComment comment;
    bool union_pool = false;  // category `other` drew from all categories
};

// classify -> tournament -> prompt -> generate for one described video.
// `style` unset means auto: inherit the winning template's label.
inline VideoGenerationResult generate_for_video(const VideoManifestEntry& video,
                                                std::optional<StyleLabel> style,
                                                const GenerationDeps& deps) {
    if (video.semantic_description.empty()) throw Error("run describe first");

    VideoGenerationResult result;
    SemanticDescription target;
    target.text = video.semantic_description;
    result.decision =
        classify_video(target, deps.index, deps.embed, deps.classify_params);

    std::vector<CommentRecord> pool;
    FeatureVector profile{};
    if (result.decision.category == VideoCategory::other) {
        result.union_pool = true;
        std::vector<FeatureVector> profiles;
        for (const auto& v : deps.dataset.videos) {
            for (const auto& c : v.comments) pool.push_back(c);
        }
        for (const auto& [category, p] : deps.dataset.category_profiles) profiles.push_back(p);
        profile = mean_features(profiles);
    } else {
        for (const auto& v : deps.dataset.videos)
            if (v.category == result.decision.category)
                for (const auto& c : v.comments) pool.push_back(c);
        auto it = deps.dataset.category_profiles.find(result.decision.category);
        if (it != deps.dataset.category_profiles.end()) profile = it->second;
    }

    VideoContext context;
    context.video_id = video.video_id;
    context.category = result.decision.category;
    context.category_profile = profile;
    context.language = video.language;
    context.description_sentiment =
        deps.sentiment.classify(video.semantic_description, video.language);

    result.tournament =
        run_tournament(pool, context, deps.selection_params, deps.scorer);
    if (result.union_pool)
        result.tournament.trace.notes.push_back(
            "category fallback `other`: pool drawn from all categories");

    StyleLabel resolved;
    if (style) {
        resolved = *style;
    } else if (result.tournament.style_template.style_label) {
        resolved = *result.tournament.style_template.style_label;
    } else {
        throw Error("style template has no style label; pass an explicit style");
    }

    GenerationRequest request;
    request.video_description = video.semantic_description;
    request.style_template = result.tournament.style_template;
    request.style = resolved;
    request.language = video.language;
    request.few_shot = select_few_shot(deps.dataset, resolved, video.language,
                                       deps.generate_params.few_shot_k);

    result.prompt = build_prompt(request);
    result.comment = generate_comment(request, deps.generator, deps.generate_params);
    return result;
}

inline json to_json(const GeneratedComment& g) {
    return json{{"text", g.text},
                {"style", to_string(g.style)},
                {"language", to_string(g.language)},
                {"request_fingerprint", g.request_fingerprint},
                {"provider_id", g.provider_id}};
}

// One line per generation, appended; callers own file locking if any.
inline void append_generated(const fs::path& path, const GeneratedComment& g) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) throw Error("cannot open for append: " + path.string());
    out << to_json(g).dump() << "\n";
}

}  // namespace stylecast
