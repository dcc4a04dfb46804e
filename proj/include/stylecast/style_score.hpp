#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "stylecast/providers.hpp"
#include "stylecast/text_features.hpp"

namespace stylecast {

enum class ScorerKind { heuristic, llm_judge };

// Target comment-length range per language; comments inside earn full length
// credit. Lengths are whitespace-delimited words (en) or non-whitespace
// Unicode scalars (zh).
struct LengthBand {
    double lo = 0.0;
    double hi = 0.0;
    double mid() const { return (lo + hi) / 2.0; }
};

inline LengthBand length_band(Language language) {
    return language == Language::zh ? LengthBand{25.0, 35.0} : LengthBand{63.0, 72.0};
}

inline double comment_length(const std::string& text, Language language) {
    return language == Language::zh ? static_cast<double>(count_scalars_no_ws(text))
                                    : static_cast<double>(count_words(text));
}

// Gaussian decay scale for the selection length term.
inline double selection_sigma(Language language) { return language == Language::zh ? 4.0 : 5.0; }

struct SelectionParams {
    std::size_t pool_size = 100;
    std::size_t group_count = 10;
    double alpha = 1.0 / 3.0;
    double beta = 1.0 / 3.0;
    double gamma = 1.0 / 3.0;
    ScorerKind scorer_kind = ScorerKind::heuristic;
    std::uint64_t seed = 0;
};

inline void validate(const SelectionParams& p) {
    if (p.alpha < 0.0 || p.beta < 0.0 || p.gamma < 0.0)
        throw Error("selection weights must be non-negative");
    if (std::abs(p.alpha + p.beta + p.gamma - 1.0) > 1e-9)
        throw Error("selection weights must sum to 1");
    if (p.group_count < 1) throw Error("group_count must be >= 1");
    if (p.pool_size < 1) throw Error("pool_size must be >= 1");
}

struct StyleScore {
    double total = 0.0;
    double s_struct = 0.0;
    double s_tone = 0.0;
    double s_length = 0.0;
};

// What the scorer knows about the target video.
struct VideoContext {
    std::string video_id;
    VideoCategory category = VideoCategory::other;
    FeatureVector category_profile{};
    Sentiment description_sentiment = Sentiment::positive;
    Language language = Language::en;
};

class StyleScorer {
public:
    virtual ~StyleScorer() = default;
    virtual StyleScore score(const CommentRecord& comment, const VideoContext& video,
                             const SelectionParams& params) = 0;
    // Warnings accumulated across calls (judge retries/fallbacks); drained by
    // the tournament into its trace.
    virtual std::vector<std::string> drain_notes() { return {}; }
};

// Deterministic offline scorer:
//   s_struct  cosine between the comment's structural features and the
//             category profile
//   s_tone    1 if the comment's sentiment class matches the video's, else 0
//   s_length  exp(-(len - L_mid)^2 / (2 sigma^2)) against the band midpoint
class HeuristicStyleScorer : public StyleScorer {
public:
    explicit HeuristicStyleScorer(SentimentProvider& sentiment) : sentiment_(sentiment) {}

    StyleScore score(const CommentRecord& comment, const VideoContext& video,
                     const SelectionParams& params) override {
        StyleScore s;
        s.s_struct = feature_cosine(extract_features(comment.text), video.category_profile);
        s.s_tone =
            sentiment_.classify(comment.text, video.language) == video.description_sentiment
                ? 1.0
                : 0.0;
        double len = comment_length(comment.text, video.language);
        double mid = length_band(video.language).mid();
        double sigma = selection_sigma(video.language);
        s.s_length = std::exp(-(len - mid) * (len - mid) / (2.0 * sigma * sigma));
        s.total = params.alpha * s.s_struct + params.beta * s.s_tone + params.gamma * s.s_length;
        return s;
    }

private:
    SentimentProvider& sentiment_;
};

// Asks a text backend for the three components as JSON and recomputes the
// total locally. Unparseable or out-of-range output retries, then falls back
// to the heuristic scorer and leaves a note.
class LlmJudgeStyleScorer : public StyleScorer {
public:
    LlmJudgeStyleScorer(GenerateProvider& judge, SentimentProvider& sentiment,
                        int max_retries = 2)
        : judge_(judge), fallback_(sentiment), max_retries_(max_retries) {}

    StyleScore score(const CommentRecord& comment, const VideoContext& video,
                     const SelectionParams& params) override {
        std::string prompt = build_prompt(comment, video);
        for (int attempt = 0; attempt <= max_retries_; ++attempt) {
            std::string raw;
            try {
                raw = judge_.generate(prompt, video.language);
            } catch (const ProviderError&) {
                break;  // provider down: no point re-asking
            }
            if (auto parsed = parse_components(raw)) {
                if (attempt > 0)
                    notes_.push_back("judge needed " + std::to_string(attempt) +
                                     " retries for comment " + comment.comment_id);
                StyleScore s = *parsed;
                s.total = params.alpha * s.s_struct + params.beta * s.s_tone +
                          params.gamma * s.s_length;
                return s;
            }
        }
        notes_.push_back("judge unavailable for comment " + comment.comment_id +
                         "; heuristic fallback");
        return fallback_.score(comment, video, params);
    }

    std::vector<std::string> drain_notes() override {
        std::vector<std::string> out;
        out.swap(notes_);
        return out;
    }

    static std::string build_prompt(const CommentRecord& comment, const VideoContext& video) {
        return "Rate how well the comment matches the video's comment style.\n"
               "Video category: " + to_string(video.category) + "\n"
               "Comment: " + comment.text + "\n"
               "Reply with exactly one JSON object: "
               "{\"s_struct\": x, \"s_tone\": y, \"s_length\": z} with x, y, z in [0,1].\n";
    }

private:
    static std::optional<StyleScore> parse_components(const std::string& raw) {
        std::size_t open = raw.find('{');
        std::size_t close = raw.rfind('}');
        if (open == std::string::npos || close == std::string::npos || close < open)
            return std::nullopt;
        json j = json::parse(raw.substr(open, close - open + 1), nullptr, false);
        if (j.is_discarded()) return std::nullopt;
        StyleScore s;
        try {
            s.s_struct = j.at("s_struct").get<double>();
            s.s_tone = j.at("s_tone").get<double>();
            s.s_length = j.at("s_length").get<double>();
        } catch (const json::exception&) {
            return std::nullopt;
        }
        for (double v : {s.s_struct, s.s_tone, s.s_length})
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) return std::nullopt;
        return s;
    }

    GenerateProvider& judge_;
    HeuristicStyleScorer fallback_;
    int max_retries_;
    std::vector<std::string> notes_;
};

}  // namespace stylecast
