#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>
#include "stylecast/rng.hpp"
#include "stylecast/scoring.hpp"
#include "support/test_util.hpp"

using namespace stylecast;
using namespace stylecast::test;
using Catch::Matchers::StartsWith;
using Catch::Matchers::WithinAbs;

namespace {

const std::string kVideoText =
    "A golden retriever sprints across the yard, leaps into a plastic kiddie pool, and soaks "
    "its owner, who cannot stop laughing.";

const std::vector<std::string> kBenchTexts = {
    "The dog really committed to that pool landing, owner never stood a chance.",
    "Cannot stop replaying the leap into the pool, pure joy.",
    "That retriever has more enthusiasm than the whole yard combined.",
};
const std::vector<std::string> kTrainTexts = {
    "Owner got soaked and still kept filming, dedication.",
    "The splash at the end is the best part of the whole clip.",
};

const std::string kCandidate =
    "The retriever clearly trained for this exact moment all summer, because no dog hits a "
    "kiddie pool with that much confidence by accident, and the owner laughing through a full "
    "soaking is the kind of reaction that makes the internet worth scrolling, honestly the "
    "splash deserves its own slow motion replay with dramatic music, ten out of ten entry, the "
    "judges are weeping, somebody give this athlete a medal and a towel.";

CommentRecord make_comment(const std::string& id, const std::string& video_id,
                           const std::string& text, Language language = Language::en) {
    CommentRecord c;
    c.comment_id = id;
    c.video_id = video_id;
    c.text = text;
    c.language = language;
    return c;
}

struct ScoringFixture {
    MockEmbedProvider embed;
    LexiconSentimentProvider sentiment;
    std::vector<CommentRecord> bench;
    std::vector<CommentRecord> train;
    std::map<std::string, ScoredVideo> videos;

    ScoringFixture() {
        videos["vid_en"] = {kVideoText, Language::en};
        for (std::size_t i = 0; i < kBenchTexts.size(); ++i)
            bench.push_back(make_comment("b" + std::to_string(i), "vid_en", kBenchTexts[i]));
        for (std::size_t i = 0; i < kTrainTexts.size(); ++i)
            train.push_back(make_comment("t" + std::to_string(i), "vid_en", kTrainTexts[i]));
    }

    ScoringContext context(ScoringParams params = {}) {
        return ScoringContext(bench, train, videos, embed, sentiment, params);
    }
};

}  // namespace

TEST_CASE("originality kernel maps similarity to score") {
    CHECK_THAT(originality_from_sim(0.62), WithinAbs(3.8, 1e-12));
    CHECK(originality_from_sim(0.0) == 10.0);
    CHECK(originality_from_sim(1.0) == 0.0);
    CHECK(originality_from_sim(1.3) == 0.0);
    CHECK(originality_from_sim(-0.2) == 10.0);
}

TEST_CASE("originality kernel is antitone in similarity") {
    double prev = originality_from_sim(-0.5);
    for (double s = -0.45; s <= 1.5; s += 0.05) {
        double cur = originality_from_sim(s);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("relevance kernel peaks at the baseline and is symmetric") {
    CHECK_THAT(relevance_from_sim(0.5, 0.5, 0.1), WithinAbs(10.0, 1e-12));
    CHECK_THAT(relevance_from_sim(0.5 + 0.11, 0.5, 0.11), WithinAbs(6.065306597126334, 1e-12));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        double base = unit_double(rng);
        double sigma = 0.05 + unit_double(rng) * 0.3;
        double d = unit_double(rng);
        double up = relevance_from_sim(base + d, base, sigma);
        double down = relevance_from_sim(base - d, base, sigma);
        CHECK_THAT(up, WithinAbs(down, 1e-9));
        if (d > 1e-6) CHECK(up < 10.0);
    }
}

TEST_CASE("length kernel gives full credit inside the band and decays outside") {
    LengthBand en = length_band(Language::en);
    CHECK(en.lo == 63.0);
    CHECK(en.hi == 72.0);
    CHECK(length_part(63, en, 5.0) == 5.0);
    CHECK(length_part(67, en, 5.0) == 5.0);
    CHECK(length_part(72, en, 5.0) == 5.0);
    CHECK_THAT(length_part(75, en, 5.0), WithinAbs(4.17635105705636, 1e-12));

    SECTION("continuous at band edges") {
        CHECK_THAT(length_part(63.0 - 1e-7, en, 5.0), WithinAbs(5.0, 1e-6));
        CHECK_THAT(length_part(72.0 + 1e-7, en, 5.0), WithinAbs(5.0, 1e-6));
    }
    SECTION("monotone decay away from the band") {
        double prev = 5.0;
        for (double len = 72; len <= 120; len += 1.0) {
            double cur = length_part(len, en, 5.0);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
        prev = 5.0;
        for (double len = 63; len >= 0; len -= 1.0) {
            double cur = length_part(len, en, 5.0);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("language dependent length sigma") {
    CHECK(scoring_sigma_length(Language::en) == 5.0);
    CHECK(scoring_sigma_length(Language::zh) == 4.0);
}

TEST_CASE("report total is the mean of the three dimensions") {
    ScoreReport r;
    r.s_originality = 0.0;
    r.s_relevance = 10.0;
    r.s_style = 10.0;
    r.s_length_part = 5.0;
    r.s_sentiment_part = 5.0;
    CHECK_THAT(finalize_report(r).s_total, WithinAbs(6.666666666666667, 1e-12));

    ScoreReport p;
    p.s_originality = 2.11;
    p.s_relevance = 8.48;
    p.s_style = 6.07;
    p.s_length_part = 5.0;
    p.s_sentiment_part = 1.07;
    CHECK_THAT(finalize_report(p).s_total, WithinAbs(5.55, 0.01));
}

TEST_CASE("report validation rejects inconsistent values") {
    ScoreReport r;
    r.s_originality = 11.0;
    r.s_relevance = 5.0;
    r.s_style = 5.0;
    r.s_length_part = 5.0;
    r.s_sentiment_part = 0.0;
    CHECK_THROWS_WITH(finalize_report(r), "score dimension out of [0,10]");

    ScoreReport parts;
    parts.s_originality = 5.0;
    parts.s_relevance = 5.0;
    parts.s_style = 9.0;
    parts.s_length_part = 5.0;
    parts.s_sentiment_part = 0.0;
    CHECK_THROWS_WITH(finalize_report(parts), "style parts do not sum to the style score");
}

TEST_CASE("context derives baseline and sigma from the benchmark corpus") {
    ScoringFixture fx;
    auto ctx = fx.context();
    CHECK_THAT(ctx.sim_baseline(), WithinAbs(0.6921301961629065, 1e-12));
    CHECK_THAT(ctx.sigma(), WithinAbs(0.06272641951343522, 1e-12));
    CHECK(ctx.reference_embeddings().size() == 5);
}

TEST_CASE("sigma floor and explicit override") {
    ScoringFixture fx;
    SECTION("identical bench comments hit the floor") {
        fx.bench = {make_comment("b0", "vid_en", kBenchTexts[0]),
                    make_comment("b1", "vid_en", kBenchTexts[0])};
        auto ctx = fx.context();
        CHECK(ctx.sigma() == 0.05);
    }
    SECTION("explicit sigma wins") {
        ScoringParams params;
        params.sigma = 0.2;
        auto ctx = fx.context(params);
        CHECK(ctx.sigma() == 0.2);
    }
}

TEST_CASE("context construction errors") {
    ScoringFixture fx;
    SECTION("no corpus at all") {
        fx.bench.clear();
        fx.train.clear();
        CHECK_THROWS_WITH(fx.context(), "no reference corpus");
    }
    SECTION("benchmark required for the baseline") {
        fx.bench.clear();
        CHECK_THROWS_WITH(fx.context(), "empty benchmark corpus");
    }
    SECTION("benchmark comment pointing at an unknown video") {
        fx.bench.push_back(make_comment("b9", "vid_missing", "stray"));
        CHECK_THROWS_WITH(fx.context(),
                          StartsWith("benchmark comment links to unknown video"));
    }
}

TEST_CASE("full report for the in-band positive candidate") {
    ScoringFixture fx;
    auto ctx = fx.context();
    CommentRecord c = make_comment("cand", "vid_en", kCandidate);
    ScoreReport r = score_comment(c, "vid_en", ctx);

    CHECK_THAT(r.sim_max, WithinAbs(0.8786634617110413, 1e-12));
    CHECK_THAT(r.sim_to_video, WithinAbs(0.855758863420784, 1e-12));
    CHECK_THAT(r.sim_baseline, WithinAbs(0.6921301961629065, 1e-12));
    CHECK_THAT(r.s_originality, WithinAbs(1.2133653828895874, 1e-12));
    CHECK_THAT(r.s_relevance, WithinAbs(0.3329263782972019, 1e-12));
    CHECK(r.s_length_part == 5.0);
    CHECK(r.s_sentiment_part == 5.0);
    CHECK(r.s_style == 10.0);
    CHECK_THAT(r.s_total, WithinAbs(3.8487639203955966, 1e-12));
    CHECK(r.comment_id == "cand");
    CHECK(r.video_id == "vid_en");
}

TEST_CASE("full report for the short negative candidate") {
    ScoringFixture fx;
    auto ctx = fx.context();
    CommentRecord c =
        make_comment("cand2", "vid_en", "Boring clip, honestly the dog did all the work here.");
    ScoreReport r = score_comment(c, "vid_en", ctx);

    CHECK_THAT(r.sim_to_video, WithinAbs(0.5973191135873606, 1e-12));
    CHECK_THAT(r.sim_max, WithinAbs(0.8137334712067351, 1e-12));
    CHECK_THAT(r.s_originality, WithinAbs(1.8626652879326488, 1e-12));
    CHECK_THAT(r.s_relevance, WithinAbs(3.19078373262181, 1e-12));
    CHECK_THAT(r.s_length_part, WithinAbs(0.0, 1e-20));
    CHECK(r.s_sentiment_part == 0.0);
    CHECK(r.s_total >= 0.0);
    CHECK(r.s_total <= 10.0);
}

TEST_CASE("scoring is deterministic") {
    ScoringFixture fx;
    auto ctx = fx.context();
    CommentRecord c = make_comment("cand", "vid_en", kCandidate);
    ScoreReport a = score_comment(c, "vid_en", ctx);
    ScoreReport b = score_comment(c, "vid_en", ctx);
    CHECK(dump_json(to_json(a)) == dump_json(to_json(b)));
}

TEST_CASE("report intermediates recompute to the total") {
    ScoringFixture fx;
    auto ctx = fx.context();

    std::vector<std::string> texts = {
        kCandidate,
        "Boring clip, honestly the dog did all the work here.",
        "Pure joy, the pool never saw it coming.",
        "That owner's laugh is the real soundtrack of the summer.",
        "Somebody enter this dog in the next diving championship please.",
    };
    for (std::size_t i = 0; i < texts.size(); ++i) {
        CommentRecord c = make_comment("c" + std::to_string(i), "vid_en", texts[i]);
        ScoreReport r = score_comment(c, "vid_en", ctx);

        // plain-loop recomputation straight from the mock provider
        Embedding ec = fx.embed.embed(c.text);
        Embedding ev = fx.embed.embed(kVideoText);
        auto cos = [](const Embedding& a, const Embedding& b) {
            double dot = 0, na = 0, nb = 0;
            for (std::size_t k = 0; k < a.values.size(); ++k) {
                dot += a.values[k] * b.values[k];
                na += a.values[k] * a.values[k];
                nb += b.values[k] * b.values[k];
            }
            return dot / (std::sqrt(na) * std::sqrt(nb));
        };
        double sim_max = cos(ec, ev);
        for (const auto& refc : kBenchTexts) sim_max = std::max(sim_max, cos(ec, fx.embed.embed(refc)));
        for (const auto& refc : kTrainTexts) sim_max = std::max(sim_max, cos(ec, fx.embed.embed(refc)));
        CHECK_THAT(r.sim_max, WithinAbs(sim_max, 1e-12));

        double sim_v = cos(ec, ev);
        double expect_rel =
            10.0 * std::exp(-(sim_v - ctx.sim_baseline()) * (sim_v - ctx.sim_baseline()) /
                            (2.0 * ctx.sigma() * ctx.sigma()));
        CHECK_THAT(r.s_relevance, WithinAbs(expect_rel, 1e-12));
        CHECK_THAT(r.s_total, WithinAbs((r.s_originality + r.s_relevance + r.s_style) / 3.0, 1e-12));
        CHECK(r.s_style == r.s_length_part + r.s_sentiment_part);
        CHECK(r.s_total >= 0.0);
        CHECK(r.s_total <= 10.0);
    }
}

TEST_CASE("unknown video id is rejected at scoring time") {
    ScoringFixture fx;
    auto ctx = fx.context();
    CommentRecord c = make_comment("cand", "vid_en", kCandidate);
    CHECK_THROWS_WITH(score_comment(c, "vid_missing", ctx), "unknown video: vid_missing");
}

TEST_CASE("aggregate table means per system") {
    auto rep = [](double o, double r, double s) {
        ScoreReport x;
        x.s_originality = o;
        x.s_relevance = r;
        x.s_style = s;
        x.s_length_part = std::min(s, 5.0);
        x.s_sentiment_part = s - x.s_length_part;
        return finalize_report(x);
    };
    std::vector<std::pair<std::string, ScoreReport>> rows = {
        {"ours", rep(2.0, 8.0, 6.0)},
        {"ours", rep(4.0, 6.0, 8.0)},
        {"baseline", rep(1.0, 9.0, 3.0)},
    };
    json table = aggregate_reports(rows);
    CHECK_THAT(table["ours"]["originality"].get<double>(), WithinAbs(3.0, 1e-12));
    CHECK_THAT(table["ours"]["relevance"].get<double>(), WithinAbs(7.0, 1e-12));
    CHECK_THAT(table["ours"]["style"].get<double>(), WithinAbs(7.0, 1e-12));
    CHECK_THAT(table["ours"]["total"].get<double>(),
               WithinAbs((rep(2, 8, 6).s_total + rep(4, 6, 8).s_total) / 2.0, 1e-12));
    CHECK(table["ours"]["count"] == 2);
    CHECK(table["baseline"]["count"] == 1);
}

TEST_CASE("score report round trips through json") {
    ScoringFixture fx;
    auto ctx = fx.context();
    CommentRecord c = make_comment("cand", "vid_en", kCandidate);
    json j = to_json(score_comment(c, "vid_en", ctx));
    CHECK(j["comment_id"] == "cand");
    CHECK(j["video_id"] == "vid_en");
    for (const char* key : {"s_originality", "s_relevance", "s_style", "s_total", "s_length_part",
                            "s_sentiment_part", "sim_max", "sim_to_video", "sim_baseline"})
        CHECK(j.contains(key));
}
