#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stylecast/classify.hpp"
#include "stylecast/style_score.hpp"

namespace stylecast {

// ---- scalar kernels (pure, exposed for direct testing) ----

inline double originality_from_sim(double sim_max) {
    return std::clamp(10.0 * (1.0 - sim_max), 0.0, 10.0);
}

inline double relevance_from_sim(double sim_to_video, double baseline, double sigma) {
    double d = sim_to_video - baseline;
    return 10.0 * std::exp(-(d * d) / (2.0 * sigma * sigma));
}

// Full credit inside the band; Gaussian decay from the nearest bound outside.
inline double length_part(double len, const LengthBand& band, double sigma_length) {
    if (len >= band.lo && len <= band.hi) return 5.0;
    double nearest = len < band.lo ? band.lo : band.hi;
    double d = len - nearest;
    return 5.0 * std::exp(-(d * d) / (2.0 * sigma_length * sigma_length));
}

inline double scoring_sigma_length(Language language) {
    return language == Language::zh ? 4.0 : 5.0;
}

// ---- report assembly ----

struct ScoreReport {
    std::string comment_id;
    std::string video_id;
    double s_originality = 0.0;
    double s_relevance = 0.0;
    double s_style = 0.0;
    double s_total = 0.0;
    double s_length_part = 0.0;
    double s_sentiment_part = 0.0;
    double sim_max = 0.0;
    double sim_to_video = 0.0;
    double sim_baseline = 0.0;
};

// Computes the total from the three dimensions and enforces the report's
// internal consistency. Shared by the scoring path and by consistency checks
// that start from externally given dimension values.
inline ScoreReport finalize_report(ScoreReport report) {
    auto in_range = [](double v, double lo, double hi) { return v >= lo - 1e-9 && v <= hi + 1e-9; };
    if (!in_range(report.s_originality, 0, 10) || !in_range(report.s_relevance, 0, 10) ||
        !in_range(report.s_style, 0, 10))
        throw Error("score dimension out of [0,10]");
    if (!in_range(report.s_length_part, 0, 5) || !in_range(report.s_sentiment_part, 0, 5))
        throw Error("style part out of [0,5]");
    if (std::abs(report.s_style - (report.s_length_part + report.s_sentiment_part)) > 1e-9)
        throw Error("style parts do not sum to the style score");
    report.s_total = (report.s_originality + report.s_relevance + report.s_style) / 3.0;
    return report;
}

// ---- context over the reference corpora ----

struct ScoredVideo {
    std::string content_text;  // the canonical text view of the video
    Language language = Language::en;
};

struct ScoringParams {
    std::optional<double> sigma;  // relevance scale; unset -> std of bench sims
    double sigma_floor = 0.05;
};

// Precomputes reference embeddings, per-video embeddings and sentiments, the
// benchmark relevance baseline, and sigma. Scoring calls are pure after this.
class ScoringContext {
public:
    ScoringContext(const std::vector<CommentRecord>& bench_comments,
                   const std::vector<CommentRecord>& train_comments,
                   const std::map<std::string, ScoredVideo>& videos, EmbedProvider& embed,
                   SentimentProvider& sentiment, const ScoringParams& params = {})
        : embed_(embed), sentiment_(sentiment) {
        if (bench_comments.empty() && train_comments.empty())
            throw Error("no reference corpus");
        if (bench_comments.empty()) throw Error("empty benchmark corpus");
        for (const auto& [id, v] : videos) {
            video_embeddings_.emplace(id, embed_.embed(v.content_text));
            video_sentiments_.emplace(id, sentiment_.classify(v.content_text, v.language));
        }
        for (const auto& c : bench_comments) reference_.push_back(embed_.embed(c.text));
        for (const auto& c : train_comments) reference_.push_back(embed_.embed(c.text));

        std::vector<double> bench_sims;
        for (std::size_t i = 0; i < bench_comments.size(); ++i) {
            auto it = video_embeddings_.find(bench_comments[i].video_id);
            if (it == video_embeddings_.end())
                throw Error("benchmark comment links to unknown video: " +
                            bench_comments[i].video_id);
            bench_sims.push_back(cosine_similarity(reference_[i], it->second));
        }
        double mean = 0.0;
        for (double s : bench_sims) mean += s;
        mean /= static_cast<double>(bench_sims.size());
        sim_baseline_ = mean;

        if (params.sigma) {
            sigma_ = *params.sigma;
        } else {
            double var = 0.0;
            for (double s : bench_sims) var += (s - mean) * (s - mean);
            var /= static_cast<double>(bench_sims.size());
            sigma_ = std::max(std::sqrt(var), params.sigma_floor);
        }
        if (sigma_ <= 0.0) throw Error("sigma must be positive");
    }

    double sim_baseline() const { return sim_baseline_; }
    double sigma() const { return sigma_; }
    const std::vector<Embedding>& reference_embeddings() const { return reference_; }

    const Embedding& video_embedding(const std::string& video_id) const {
        auto it = video_embeddings_.find(video_id);
        if (it == video_embeddings_.end()) throw Error("unknown video: " + video_id);
        return it->second;
    }
    Sentiment video_sentiment(const std::string& video_id) const {
        auto it = video_sentiments_.find(video_id);
        if (it == video_sentiments_.end()) throw Error("unknown video: " + video_id);
        return it->second;
    }
    EmbedProvider& embed() const { return embed_; }
    SentimentProvider& sentiment() const { return sentiment_; }

private:
    EmbedProvider& embed_;
    SentimentProvider& sentiment_;
    std::map<std::string, Embedding> video_embeddings_;
    std::map<std::string, Sentiment> video_sentiments_;
    std::vector<Embedding> reference_;
    double sim_baseline_ = 0.0;
    double sigma_ = 0.05;
};

// ---- the three dimensions ----

struct OriginalityResult {
    double score = 0.0;
    double sim_max = 0.0;
};

inline OriginalityResult score_originality(const std::string& comment_text,
                                           const std::string& video_id,
                                           const ScoringContext& ctx) {
    if (ctx.reference_embeddings().empty()) throw Error("no reference corpus");
    Embedding c = ctx.embed().embed(comment_text);
    double sim_max = -1.0;
    for (const auto& ref : ctx.reference_embeddings())
        sim_max = std::max(sim_max, cosine_similarity(c, ref));
    sim_max = std::max(sim_max, cosine_similarity(c, ctx.video_embedding(video_id)));
    return {originality_from_sim(sim_max), sim_max};
}

struct RelevanceResult {
    double score = 0.0;
    double sim_to_video = 0.0;
    double sim_baseline = 0.0;
};

inline RelevanceResult score_relevance(const std::string& comment_text,
                                       const std::string& video_id, const ScoringContext& ctx) {
    Embedding c = ctx.embed().embed(comment_text);
    double sim = cosine_similarity(c, ctx.video_embedding(video_id));
    return {relevance_from_sim(sim, ctx.sim_baseline(), ctx.sigma()), sim, ctx.sim_baseline()};
}

struct StyleResult {
    double score = 0.0;
    double length_part = 0.0;
    double sentiment_part = 0.0;
};

inline StyleResult score_style(const CommentRecord& comment, const std::string& video_id,
                               const ScoringContext& ctx) {
    StyleResult r;
    double len = comment_length(comment.text, comment.language);
    r.length_part =
        length_part(len, length_band(comment.language), scoring_sigma_length(comment.language));
    Sentiment comment_sentiment = ctx.sentiment().classify(comment.text, comment.language);
    r.sentiment_part = comment_sentiment == ctx.video_sentiment(video_id) ? 5.0 : 0.0;
    r.score = r.length_part + r.sentiment_part;
    return r;
}

inline ScoreReport score_comment(const CommentRecord& comment, const std::string& video_id,
                                 const ScoringContext& ctx) {
    ScoreReport report;
    report.comment_id = comment.comment_id;
    report.video_id = video_id;
    OriginalityResult o = score_originality(comment.text, video_id, ctx);
    report.s_originality = o.score;
    report.sim_max = o.sim_max;
    RelevanceResult rel = score_relevance(comment.text, video_id, ctx);
    report.s_relevance = rel.score;
    report.sim_to_video = rel.sim_to_video;
    report.sim_baseline = rel.sim_baseline;
    StyleResult st = score_style(comment, video_id, ctx);
    report.s_style = st.score;
    report.s_length_part = st.length_part;
    report.s_sentiment_part = st.sentiment_part;
    return finalize_report(report);
}

// ---- serialization and aggregation ----

inline json to_json(const ScoreReport& r) {
    return json{{"comment_id", r.comment_id},
                {"video_id", r.video_id},
                {"s_originality", r.s_originality},
                {"s_relevance", r.s_relevance},
                {"s_style", r.s_style},
                {"s_total", r.s_total},
                {"s_length_part", r.s_length_part},
                {"s_sentiment_part", r.s_sentiment_part},
                {"sim_max", r.sim_max},
                {"sim_to_video", r.sim_to_video},
                {"sim_baseline", r.sim_baseline}};
}

// Mean per dimension per system, laid out rows=system for the report table.
inline json aggregate_reports(const std::vector<std::pair<std::string, ScoreReport>>& rows) {
    std::map<std::string, std::vector<const ScoreReport*>> by_system;
    for (const auto& [system, report] : rows) by_system[system].push_back(&report);
    json out = json::object();
    for (const auto& [system, reports] : by_system) {
        double o = 0, r = 0, s = 0, t = 0;
        for (const ScoreReport* rep : reports) {
            o += rep->s_originality;
            r += rep->s_relevance;
            s += rep->s_style;
            t += rep->s_total;
        }
        double n = static_cast<double>(reports.size());
        out[system] = json{{"originality", o / n},
                           {"relevance", r / n},
                           {"style", s / n},
                           {"total", t / n},
                           {"count", reports.size()}};
    }
    return out;
}

}  // namespace stylecast
