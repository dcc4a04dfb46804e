#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "stylecast/classify.hpp"
#include "stylecast/config.hpp"
#include "stylecast/dataset.hpp"
#include "stylecast/describe.hpp"
#include "stylecast/generate.hpp"
#include "stylecast/http_providers.hpp"
#include "stylecast/media.hpp"
#include "stylecast/platform.hpp"
#include "stylecast/platform_api.hpp"
#include "stylecast/questionnaire.hpp"
#include "stylecast/scoring.hpp"
#include "stylecast/signal.hpp"

namespace stylecast {

enum class StageStatus { done, skipped, failed, planned };

inline std::string to_string(StageStatus s) {
    switch (s) {
        case StageStatus::done: return "done";
        case StageStatus::skipped: return "skipped";
        case StageStatus::failed: return "failed";
        case StageStatus::planned: return "planned";
    }
    return "unknown";
}

// One unit of stage work. `id` is the video id for per-video stages and
// "<system>/<comment_id>" for score items.
struct StageOutcome {
    std::string id;
    StageStatus status = StageStatus::done;
    std::string detail;
    bool provider_failure = false;
};

struct StageReport {
    std::string stage;
    std::vector<StageOutcome> outcomes;

    bool ok() const {
        for (const auto& o : outcomes)
            if (o.status == StageStatus::failed) return false;
        return true;
    }
    bool had_provider_failure() const {
        for (const auto& o : outcomes)
            if (o.provider_failure) return true;
        return false;
    }
    std::size_t count(StageStatus status) const {
        std::size_t n = 0;
        for (const auto& o : outcomes)
            if (o.status == status) ++n;
        return n;
    }
};

struct RunOptions {
    bool force = false;
    bool dry_run = false;
};

inline json to_json(const FrameSchedule& s) {
    json segments = json::array();
    for (const auto& seg : s.segments)
        segments.push_back(
            {{"start_s", seg.start_s}, {"end_s", seg.end_s}, {"rate_fps", seg.rate_fps}});
    return json{{"segments", segments},
                {"frame_timestamps", s.frame_timestamps},
                {"duration_s", s.duration_s}};
}

inline FrameSchedule frame_schedule_from_json(const json& j) {
    FrameSchedule s;
    s.duration_s = j.value("duration_s", 0.0);
    if (j.contains("segments"))
        for (const auto& seg : j.at("segments"))
            s.segments.push_back({seg.value("start_s", 0.0), seg.value("end_s", 0.0),
                                  seg.value("rate_fps", 0.0)});
    if (j.contains("frame_timestamps"))
        s.frame_timestamps = j.at("frame_timestamps").get<std::vector<double>>();
    return s;
}

// ---- workdir layout ----
//   <workdir>/<video_id>/entry.json        manifest entry (paths relative to the video dir)
//   <workdir>/<video_id>/video.mp4         downloaded media
//   <workdir>/<video_id>/comments.json     raw comment dump
//   <workdir>/<video_id>/frames/*.jpg      scheduled frames
//   <workdir>/<video_id>/selection.json    tournament result
//   <workdir>/<video_id>/generated.jsonl   generated comments
//   <workdir>/cache/embeddings/            content-addressed embedding cache
//   <workdir>/logs/<stage>.jsonl           per-stage state log, rewritten per run

inline fs::path video_dir(const fs::path& workdir, const std::string& video_id) {
    return workdir / video_id;
}

inline fs::path entry_path(const fs::path& workdir, const std::string& video_id) {
    return video_dir(workdir, video_id) / "entry.json";
}

inline void save_entry(const fs::path& workdir, const VideoManifestEntry& entry) {
    write_json_file(entry_path(workdir, entry.video_id), to_json(entry));
}

inline std::vector<VideoManifestEntry> load_workdir_entries(const fs::path& workdir) {
    std::vector<VideoManifestEntry> out;
    if (!fs::exists(workdir)) return out;
    for (const auto& dirent : fs::directory_iterator(workdir)) {
        if (!dirent.is_directory()) continue;
        fs::path p = dirent.path() / "entry.json";
        if (!fs::exists(p)) continue;
        out.push_back(entry_from_json(read_json_file(p)));
    }
    std::sort(out.begin(), out.end(),
              [](const VideoManifestEntry& a, const VideoManifestEntry& b) {
                  return a.video_id < b.video_id;
              });
    return out;
}

namespace detail {

// Pulls indices off a shared counter so uneven per-video costs balance.
template <typename Fn>
inline void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// The mock backends keep call counters and scripts, so concurrent per-video
// tasks serialize calls to any one provider. The rate limiter (http backends)
// sits inside the same lock: waiting for a permit blocks only users of that
// provider, which is what the limit means anyway.

class GuardedTranscribe : public TranscribeProvider {
public:
    GuardedTranscribe(std::unique_ptr<TranscribeProvider> impl, std::unique_ptr<RateLimiter> limiter)
        : impl_(std::move(impl)), limiter_(std::move(limiter)) {}
    std::string provider_id() const override { return impl_->provider_id(); }
    std::vector<TranscriptSegment> transcribe(const std::string& media_path) override {
        std::scoped_lock lock(mutex_);
        if (limiter_) limiter_->acquire();
        return impl_->transcribe(media_path);
    }

private:
    std::unique_ptr<TranscribeProvider> impl_;
    std::unique_ptr<RateLimiter> limiter_;
    std::mutex mutex_;
};

class GuardedDescribe : public DescribeProvider {
public:
    GuardedDescribe(std::unique_ptr<DescribeProvider> impl, std::unique_ptr<RateLimiter> limiter)
        : impl_(std::move(impl)), limiter_(std::move(limiter)) {}
    std::string provider_id() const override { return impl_->provider_id(); }
    std::string describe(const DescribeRequest& request) override {
        std::scoped_lock lock(mutex_);
        if (limiter_) limiter_->acquire();
        return impl_->describe(request);
    }

private:
    std::unique_ptr<DescribeProvider> impl_;
    std::unique_ptr<RateLimiter> limiter_;
    std::mutex mutex_;
};

class GuardedEmbed : public EmbedProvider {
public:
    GuardedEmbed(std::unique_ptr<EmbedProvider> impl, std::unique_ptr<RateLimiter> limiter)
        : impl_(std::move(impl)), limiter_(std::move(limiter)) {}
    std::string provider_id() const override { return impl_->provider_id(); }
    Embedding embed(const std::string& text) override {
        std::scoped_lock lock(mutex_);
        if (limiter_) limiter_->acquire();
        return impl_->embed(text);
    }

private:
    std::unique_ptr<EmbedProvider> impl_;
    std::unique_ptr<RateLimiter> limiter_;
    std::mutex mutex_;
};

class GuardedGenerate : public GenerateProvider {
public:
    GuardedGenerate(std::unique_ptr<GenerateProvider> impl, std::unique_ptr<RateLimiter> limiter)
        : impl_(std::move(impl)), limiter_(std::move(limiter)) {}
    std::string provider_id() const override { return impl_->provider_id(); }
    std::string generate(const std::string& prompt, Language language) override {
        std::scoped_lock lock(mutex_);
        if (limiter_) limiter_->acquire();
        return impl_->generate(prompt, language);
    }

private:
    std::unique_ptr<GenerateProvider> impl_;
    std::unique_ptr<RateLimiter> limiter_;
    std::mutex mutex_;
};

class GuardedSentiment : public SentimentProvider {
public:
    GuardedSentiment(std::unique_ptr<SentimentProvider> impl, std::unique_ptr<RateLimiter> limiter)
        : impl_(std::move(impl)), limiter_(std::move(limiter)) {}
    std::string provider_id() const override { return impl_->provider_id(); }
    Sentiment classify(const std::string& text, Language language) override {
        std::scoped_lock lock(mutex_);
        if (limiter_) limiter_->acquire();
        return impl_->classify(text, language);
    }

private:
    std::unique_ptr<SentimentProvider> impl_;
    std::unique_ptr<RateLimiter> limiter_;
    std::mutex mutex_;
};

inline std::unique_ptr<RateLimiter> make_limiter(const ProviderBinding& binding,
                                                 const RateLimitConfig& limits) {
    if (binding.kind != ProviderKind::http) return nullptr;
    return std::make_unique<RateLimiter>(limits.rate_per_s, limits.burst);
}

inline HttpProviderConfig embed_http_config(HttpProviderConfig http) {
    // The generic default path targets the chat endpoint; embeddings live on
    // their own route unless the config says otherwise.
    if (http.path == HttpProviderConfig{}.path) http.path = "/v1/embed";
    return http;
}

}  // namespace detail

// Builds the configured backends and hands out serialized facades safe for
// the worker pool.
class ProviderSet {
public:
    explicit ProviderSet(const PipelineConfig& config) {
        if (config.transcribe.kind == ProviderKind::http)
            throw Error("transcribe has no http backend in this build; bind it to mock");
        transcribe_ = std::make_unique<detail::GuardedTranscribe>(
            std::make_unique<MockTranscribeProvider>(), nullptr);

        std::unique_ptr<DescribeProvider> describe =
            config.describe.kind == ProviderKind::http
                ? std::unique_ptr<DescribeProvider>(
                      std::make_unique<HttpDescribeProvider>(config.describe.http))
                : std::make_unique<MockDescribeProvider>();
        describe_ = std::make_unique<detail::GuardedDescribe>(
            std::move(describe), detail::make_limiter(config.describe, config.rate_limit));

        std::unique_ptr<EmbedProvider> embed =
            config.embed.kind == ProviderKind::http
                ? std::unique_ptr<EmbedProvider>(std::make_unique<HttpEmbedProvider>(
                      detail::embed_http_config(config.embed.http)))
                : std::make_unique<MockEmbedProvider>();
        embed_ = std::make_unique<detail::GuardedEmbed>(
            std::move(embed), detail::make_limiter(config.embed, config.rate_limit));

        std::unique_ptr<GenerateProvider> generate =
            config.generate.kind == ProviderKind::http
                ? std::unique_ptr<GenerateProvider>(
                      std::make_unique<HttpGenerateProvider>(config.generate.http))
                : std::make_unique<MockGenerateProvider>();
        generate_ = std::make_unique<detail::GuardedGenerate>(
            std::move(generate), detail::make_limiter(config.generate, config.rate_limit));

        std::unique_ptr<SentimentProvider> sentiment =
            config.sentiment.kind == ProviderKind::http
                ? std::unique_ptr<SentimentProvider>(
                      std::make_unique<HttpSentimentProvider>(config.sentiment.http))
                : std::make_unique<LexiconSentimentProvider>();
        sentiment_ = std::make_unique<detail::GuardedSentiment>(
            std::move(sentiment), detail::make_limiter(config.sentiment, config.rate_limit));
    }

    TranscribeProvider& transcribe() { return *transcribe_; }
    DescribeProvider& describe() { return *describe_; }
    EmbedProvider& embed() { return *embed_; }
    GenerateProvider& generate() { return *generate_; }
    SentimentProvider& sentiment() { return *sentiment_; }

private:
    std::unique_ptr<TranscribeProvider> transcribe_;
    std::unique_ptr<DescribeProvider> describe_;
    std::unique_ptr<EmbedProvider> embed_;
    std::unique_ptr<GenerateProvider> generate_;
    std::unique_ptr<SentimentProvider> sentiment_;
};

struct ScoreRun {
    StageReport report;
    std::vector<std::pair<std::string, ScoreReport>> reports;  // (system, report)
    json aggregate = json::object();
};

struct QuestionnaireRun {
    StageReport report;
    QuestionnairePacket packet;
    fs::path output_dir;
};

namespace detail {

struct Candidate {
    std::string system;
    CommentRecord record;
};

// JSONL, one candidate per line: the CommentRecord fields plus "system".
// Missing comment ids get stable line-numbered ones.
inline std::vector<Candidate> load_candidates(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open candidates file: " + path.string());
    std::vector<Candidate> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        std::string origin = path.string() + " line " + std::to_string(line_no);
        json j = parse_json(line, origin);
        Candidate c;
        c.system = j.value("system", "");
        if (c.system.empty()) throw Error(origin + ": missing system");
        c.record = comment_from_json(j);
        if (c.record.video_id.empty()) throw Error(origin + ": missing video_id");
        if (c.record.text.empty()) throw Error(origin + ": missing text");
        if (c.record.comment_id.empty())
            c.record.comment_id = "line-" + std::to_string(line_no);
        out.push_back(std::move(c));
    }
    if (out.empty()) throw Error("no candidates in file: " + path.string());
    return out;
}

inline std::vector<CommentRecord> load_comment_array(const fs::path& path, const char* what) {
    json doc = read_json_file(path);
    if (!doc.is_array())
        throw Error(std::string(what) + " must be a JSON array: " + path.string());
    std::vector<CommentRecord> out;
    for (const auto& cj : doc) out.push_back(comment_from_json(cj));
    return out;
}

// Log lines capture the resulting state per video, not the action taken, so
// re-running a completed stage rewrites identical bytes.
inline json log_line(const std::string& stage, const StageOutcome& outcome, json state) {
    json line{{"stage", stage}, {"id", outcome.id}};
    if (outcome.status == StageStatus::failed) {
        line["ok"] = false;
        line["error"] = outcome.detail;
    } else {
        line["ok"] = true;
        line["state"] = std::move(state);
    }
    return line;
}

inline void write_stage_log(const fs::path& workdir, const std::string& stage,
                            const std::vector<json>& lines) {
    fs::create_directories(workdir / "logs");
    fs::path p = workdir / "logs" / (stage + ".jsonl");
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + p.string());
    for (const auto& line : lines) out << line.dump() << "\n";
}

inline fs::path resolve_in(const fs::path& base, const std::string& stored) {
    fs::path p(stored);
    return p.is_absolute() ? p : base / p;
}

}  // namespace detail

// Orchestrates the stages over a workdir. Stage methods return per-video
// outcomes; conditions that prevent a stage from starting at all (missing
// manifest, missing curated dataset, unreadable config inputs) throw.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config)
        : config_(std::move(config)), providers_(config_) {}

    const PipelineConfig& config() const { return config_; }
    ProviderSet& providers() { return providers_; }

    std::vector<VideoManifestEntry> entries() const {
        return load_workdir_entries(config_.workdir);
    }

    // ---- ingest: seed manifest -> metadata + media + raw comments ----
    StageReport ingest(const fs::path& manifest_path, const RunOptions& opts = {}) {
        Manifest manifest = load_seed_manifest(manifest_path);
        if (manifest.videos.empty()) throw Error("manifest has no videos: " + manifest_path.string());

        for (const auto& seed : manifest.videos) client_for(seed.platform);

        StageReport report{"ingest", {}};
        report.outcomes.resize(manifest.videos.size());
        std::vector<json> lines(manifest.videos.size());

        int jobs = config_.platform.kind == "api" ? 1 : effective_jobs();
        detail::parallel_for(manifest.videos.size(), jobs, [&](std::size_t i) {
            const VideoManifestEntry& seed = manifest.videos[i];
            fs::path vdir = video_dir(config_.workdir, seed.video_id);
            bool complete = fs::exists(vdir / "entry.json") && fs::exists(vdir / "video.mp4") &&
                            fs::exists(vdir / "comments.json");

            if (opts.dry_run) {
                report.outcomes[i] = {seed.video_id, StageStatus::planned,
                                      complete && !opts.force ? "already ingested; would skip"
                                                              : "would fetch metadata, media, comments",
                                      false};
                return;
            }
            if (opts.force && fs::exists(vdir)) {
                fs::remove_all(vdir);
                complete = false;
            }

            StageOutcome outcome{seed.video_id, StageStatus::done, "", false};
            json state;
            try {
                if (complete) {
                    outcome.status = StageStatus::skipped;
                    outcome.detail = "already ingested";
                } else {
                    FetchResult fetched = fetch_video(*client_for(seed.platform), seed,
                                                      config_.workdir, limiter_for(seed.platform),
                                                      config_.platform.max_comments);
                    VideoManifestEntry entry = fetched.entry;
                    entry.media_path = "video.mp4";
                    save_entry(config_.workdir, entry);
                    outcome.detail = "fetched metadata, media, comments";
                }
                json comments = read_json_file(vdir / "comments.json");
                state = json{{"media_bytes", fs::file_size(vdir / "video.mp4")},
                             {"comments", comments.size()}};
            } catch (const ProviderError& e) {
                outcome = {seed.video_id, StageStatus::failed, e.what(), true};
            } catch (const std::exception& e) {
                outcome = {seed.video_id, StageStatus::failed, e.what(), false};
            }
            report.outcomes[i] = outcome;
            lines[i] = detail::log_line("ingest", outcome, std::move(state));
        });

        if (!opts.dry_run) detail::write_stage_log(config_.workdir, "ingest", lines);
        return report;
    }

    // ---- preprocess: decode signals, detect highlights, extract frames ----
    StageReport preprocess(const std::vector<std::string>& ids = {}, const RunOptions& opts = {}) {
        auto selected = select_entries(ids);
        StageReport report{"preprocess", {}};
        report.outcomes.resize(selected.size());
        std::vector<json> lines(selected.size());

        detail::parallel_for(selected.size(), effective_jobs(), [&](std::size_t i) {
            VideoManifestEntry entry = selected[i];
            fs::path vdir = video_dir(config_.workdir, entry.video_id);
            bool complete = frames_complete(entry, vdir);

            if (opts.dry_run) {
                report.outcomes[i] = {entry.video_id, StageStatus::planned,
                                      complete && !opts.force ? "already preprocessed; would skip"
                                                              : "would decode signals and extract frames",
                                      false};
                return;
            }

            StageOutcome outcome{entry.video_id, StageStatus::done, "", false};
            json state;
            try {
                if (opts.force) {
                    fs::remove_all(vdir / "frames");
                    entry.frame_paths.clear();
                    entry.extra.erase("frame_schedule");
                    complete = false;
                }
                FrameSchedule schedule;
                if (complete) {
                    outcome.status = StageStatus::skipped;
                    schedule = frame_schedule_from_json(entry.extra.at("frame_schedule"));
                } else {
                    fs::path media = detail::resolve_in(vdir, entry.media_path);
                    MediaSeries series = extract_media_series(media, config_.decoder);
                    SignalSeries score =
                        highlight_score(series.audio, series.light, config_.highlight);
                    auto windows = detect_highlights(score, config_.highlight);
                    schedule = build_frame_schedule(series.duration_s, windows);
                    auto frames =
                        extract_frames(media, schedule, vdir / "frames", config_.decoder);
                    entry.frame_paths.clear();
                    for (const auto& f : frames)
                        entry.frame_paths.push_back(
                            (fs::path("frames") / f.filename()).generic_string());
                    if (entry.duration_s <= 0.0) entry.duration_s = series.duration_s;
                    entry.extra["frame_schedule"] = to_json(schedule);
                    save_entry(config_.workdir, entry);
                }
                std::size_t highlight_segments = 0;
                for (const auto& seg : schedule.segments)
                    if (seg.rate_fps == kHighlightRateFps) ++highlight_segments;
                outcome.detail = std::to_string(entry.frame_paths.size()) + " frames, " +
                                 std::to_string(highlight_segments) + " highlight segments";
                state = json{{"frames", entry.frame_paths.size()},
                             {"highlight_segments", highlight_segments}};
            } catch (const std::exception& e) {
                outcome = {entry.video_id, StageStatus::failed, e.what(), false};
            }
            report.outcomes[i] = outcome;
            lines[i] = detail::log_line("preprocess", outcome, std::move(state));
        });

        if (!opts.dry_run) detail::write_stage_log(config_.workdir, "preprocess", lines);
        return report;
    }

    // ---- describe: transcript + frames + metadata -> semantic description ----
    StageReport describe(const std::vector<std::string>& ids = {}, const RunOptions& opts = {}) {
        auto selected = select_entries(ids);
        StageReport report{"describe", {}};
        report.outcomes.resize(selected.size());
        std::vector<json> lines(selected.size());

        detail::parallel_for(selected.size(), effective_jobs(), [&](std::size_t i) {
            VideoManifestEntry entry = selected[i];
            fs::path vdir = video_dir(config_.workdir, entry.video_id);
            bool complete = !entry.semantic_description.empty();

            if (opts.dry_run) {
                report.outcomes[i] = {entry.video_id, StageStatus::planned,
                                      complete && !opts.force ? "already described; would skip"
                                                              : "would transcribe and describe",
                                      false};
                return;
            }

            StageOutcome outcome{entry.video_id, StageStatus::done, "", false};
            json state;
            try {
                if (opts.force) {
                    entry.semantic_description.clear();
                    entry.extra.erase("describe_provider");
                    entry.extra.erase("describe_fingerprint");
                    if (entry.extra.contains("transcript_provider")) {
                        entry.transcript.clear();
                        entry.extra.erase("transcript_provider");
                    }
                    complete = false;
                }
                if (complete) {
                    outcome.status = StageStatus::skipped;
                } else {
                    if (!entry.extra.contains("frame_schedule"))
                        throw Error("run preprocess first");
                    FrameSchedule schedule =
                        frame_schedule_from_json(entry.extra.at("frame_schedule"));

                    if (entry.transcript.empty() &&
                        !entry.extra.contains("transcript_provider")) {
                        fs::path media = detail::resolve_in(vdir, entry.media_path);
                        entry.transcript = transcribe_audio(media.string(), providers_.transcribe(),
                                                            schedule.frame_timestamps);
                        entry.extra["transcript_provider"] = providers_.transcribe().provider_id();
                    } else {
                        entry.transcript = normalize_transcript(std::move(entry.transcript));
                        link_frames(entry.transcript, schedule.frame_timestamps);
                    }

                    DescribeRequest request;
                    request.title = entry.title;
                    request.description_text = entry.description_text;
                    request.duration_s = entry.duration_s;
                    request.language = entry.language;
                    request.transcript = entry.transcript;
                    // Image references are workdir-relative so fingerprints and
                    // entry files stay byte-identical across machines.
                    for (const auto& rel : entry.frame_paths)
                        request.frame_paths.push_back(
                            (fs::path(entry.video_id) / rel).generic_string());

                    SemanticDescription d =
                        describe_video(std::move(request), providers_.describe(),
                                       config_.describing);
                    entry.semantic_description = d.text;
                    entry.extra["describe_provider"] = d.provider_id;
                    entry.extra["describe_fingerprint"] = d.prompt_fingerprint;
                    save_entry(config_.workdir, entry);
                }
                std::string fp = entry.extra.value("describe_fingerprint", "");
                outcome.detail = fp.empty() ? "described" : "fingerprint " + fp;
                state = json{{"fingerprint", fp},
                             {"provider", entry.extra.value("describe_provider", "")},
                             {"transcript_segments", entry.transcript.size()}};
            } catch (const ProviderError& e) {
                outcome = {entry.video_id, StageStatus::failed, e.what(), true};
            } catch (const std::exception& e) {
                outcome = {entry.video_id, StageStatus::failed, e.what(), false};
            }
            report.outcomes[i] = outcome;
            lines[i] = detail::log_line("describe", outcome, std::move(state));
        });

        if (!opts.dry_run) detail::write_stage_log(config_.workdir, "describe", lines);
        return report;
    }

    // ---- classify: embed description, nearest curated category ----
    StageReport classify(const std::vector<std::string>& ids = {}, const RunOptions& opts = {}) {
        auto selected = select_entries(ids);
        StageReport report{"classify", {}};
        report.outcomes.resize(selected.size());
        std::vector<json> lines(selected.size());

        if (opts.dry_run) {
            for (std::size_t i = 0; i < selected.size(); ++i)
                report.outcomes[i] = {selected[i].video_id, StageStatus::planned,
                                      selected[i].category && !opts.force
                                          ? "already classified; would skip"
                                          : "would classify against dataset at " +
                                                config_.resolved_dataset_dir().string(),
                                      false};
            return report;
        }

        // A fully classified selection needs no dataset or provider at all.
        bool any_work = opts.force;
        for (const auto& e : selected)
            if (!e.category) any_work = true;

        DatasetBundle dataset;
        DatasetEmbeddingIndex index;
        if (any_work) {
            dataset = load_curated_dataset();
            index = build_index(dataset);
        }

        detail::parallel_for(selected.size(), effective_jobs(), [&](std::size_t i) {
            VideoManifestEntry entry = selected[i];

            StageOutcome outcome{entry.video_id, StageStatus::done, "", false};
            json state;
            try {
                if (opts.force) {
                    entry.category.reset();
                    entry.extra.erase("classification");
                }
                if (entry.category) {
                    outcome.status = StageStatus::skipped;
                } else {
                    if (entry.semantic_description.empty()) throw Error("run describe first");
                    SemanticDescription target;
                    target.text = entry.semantic_description;
                    CategoryDecision decision =
                        classify_video(target, index, providers_.embed(), config_.classify);
                    entry.category = decision.category;
                    json scores = json::object();
                    for (const auto& [category, sum] : decision.per_category_scores)
                        scores[to_string(category)] = sum;
                    entry.extra["classification"] = json{
                        {"margin", decision.margin},
                        {"fallback_applied", decision.fallback_applied},
                        {"per_category_scores", scores},
                        {"provider_id", index.provider_id}};
                    save_entry(config_.workdir, entry);
                }
                outcome.detail = to_string(*entry.category);
                state = json{{"category", to_string(*entry.category)}};
                if (entry.extra.contains("classification"))
                    state["fallback"] =
                        entry.extra.at("classification").value("fallback_applied", false);
            } catch (const ProviderError& e) {
                outcome = {entry.video_id, StageStatus::failed, e.what(), true};
            } catch (const std::exception& e) {
                outcome = {entry.video_id, StageStatus::failed, e.what(), false};
            }
            report.outcomes[i] = outcome;
            lines[i] = detail::log_line("classify", outcome, std::move(state));
        });

        if (!opts.dry_run) detail::write_stage_log(config_.workdir, "classify", lines);
        return report;
    }

    // ---- generate: tournament template + style-conditioned comment ----
    StageReport generate(const std::vector<std::string>& ids, std::optional<StyleLabel> style,
                         bool per_style, const RunOptions& opts = {}) {
        auto selected = select_entries(ids);
        StageReport report{"generate", {}};
        report.outcomes.resize(selected.size());
        std::vector<json> lines(selected.size());

        std::vector<std::optional<StyleLabel>> styles;
        if (per_style) {
            if (style) {
                styles.push_back(style);
            } else {
                for (StyleLabel s : kAllStyles) styles.push_back(s);
            }
        } else {
            styles.push_back(style);
        }

        if (opts.dry_run) {
            for (std::size_t i = 0; i < selected.size(); ++i) {
                fs::path vdir = video_dir(config_.workdir, selected[i].video_id);
                bool complete = fs::exists(vdir / "selection.json") &&
                                fs::exists(vdir / "generated.jsonl");
                report.outcomes[i] = {selected[i].video_id, StageStatus::planned,
                                      complete && !opts.force
                                          ? "already generated; would skip"
                                          : "would generate " + std::to_string(styles.size()) +
                                                " comment(s)",
                                      false};
            }
            return report;
        }

        bool any_work = opts.force;
        for (const auto& e : selected) {
            fs::path vdir = video_dir(config_.workdir, e.video_id);
            if (!fs::exists(vdir / "selection.json") || !fs::exists(vdir / "generated.jsonl"))
                any_work = true;
        }

        DatasetBundle dataset;
        DatasetEmbeddingIndex index;
        if (any_work) {
            dataset = load_curated_dataset();
            index = build_index(dataset);
        }

        detail::parallel_for(selected.size(), effective_jobs(), [&](std::size_t i) {
            VideoManifestEntry entry = selected[i];
            fs::path vdir = video_dir(config_.workdir, entry.video_id);
            fs::path selection_path = vdir / "selection.json";
            fs::path generated_path = vdir / "generated.jsonl";

            StageOutcome outcome{entry.video_id, StageStatus::done, "", false};
            json state;
            try {
                if (opts.force) {
                    fs::remove(selection_path);
                    fs::remove(generated_path);
                }
                if (fs::exists(selection_path) && fs::exists(generated_path)) {
                    outcome.status = StageStatus::skipped;
                } else {
                    if (entry.semantic_description.empty()) throw Error("run describe first");
                    fs::remove(selection_path);
                    fs::remove(generated_path);

                    HeuristicStyleScorer heuristic(providers_.sentiment());
                    LlmJudgeStyleScorer judge(providers_.generate(), providers_.sentiment());
                    StyleScorer& scorer =
                        config_.selection.scorer_kind == ScorerKind::llm_judge
                            ? static_cast<StyleScorer&>(judge)
                            : heuristic;
                    GenerationDeps deps{dataset,
                                        index,
                                        providers_.embed(),
                                        providers_.sentiment(),
                                        scorer,
                                        providers_.generate(),
                                        config_.classify,
                                        config_.selection,
                                        config_.generation};

                    bool first = true;
                    for (const auto& s : styles) {
                        VideoGenerationResult result = generate_for_video(entry, s, deps);
                        if (first) {
                            save_selection(selection_path, result.tournament);
                            first = false;
                        }
                        append_generated(generated_path, result.comment);
                    }
                }
                json selection = read_json_file(selection_path);
                std::vector<std::string> produced;
                std::ifstream generated(generated_path, std::ios::binary);
                std::string line;
                while (std::getline(generated, line))
                    if (!line.empty())
                        produced.push_back(
                            parse_json(line, generated_path.string()).value("style", ""));
                outcome.detail = std::to_string(produced.size()) + " comment(s), template " +
                                 selection.at("template").value("comment_id", "");
                state = json{{"styles", produced},
                             {"template_comment_id",
                              selection.at("template").value("comment_id", "")}};
            } catch (const ProviderError& e) {
                outcome = {entry.video_id, StageStatus::failed, e.what(), true};
            } catch (const std::exception& e) {
                outcome = {entry.video_id, StageStatus::failed, e.what(), false};
            }
            report.outcomes[i] = outcome;
            lines[i] = detail::log_line("generate", outcome, std::move(state));
        });

        if (!opts.dry_run) detail::write_stage_log(config_.workdir, "generate", lines);
        return report;
    }

    // ---- score: 3-dimension automatic evaluation over a candidates file ----
    ScoreRun score(const fs::path& candidates_path, const fs::path& bench_path,
                   const fs::path& train_path, const RunOptions& opts = {}) {
        auto candidates = detail::load_candidates(candidates_path);
        auto bench = detail::load_comment_array(bench_path, "benchmark corpus");
        std::vector<CommentRecord> train;
        if (!train_path.empty()) train = detail::load_comment_array(train_path, "training corpus");

        ScoreRun run;
        run.report.stage = "score";

        if (opts.dry_run) {
            for (const auto& c : candidates)
                run.report.outcomes.push_back(
                    {c.system + "/" + c.record.comment_id, StageStatus::planned,
                     "would score against " + std::to_string(bench.size()) + " benchmark + " +
                         std::to_string(train.size()) + " training comments",
                     false});
            return run;
        }

        std::map<std::string, ScoredVideo> videos;
        for (const auto& e : entries())
            if (!e.semantic_description.empty())
                videos[e.video_id] = ScoredVideo{e.semantic_description, e.language};

        ScoringContext context(bench, train, videos, providers_.embed(), providers_.sentiment(),
                               config_.scoring);

        std::vector<json> lines;
        for (const auto& c : candidates) {
            std::string id = c.system + "/" + c.record.comment_id;
            StageOutcome outcome{id, StageStatus::done, "", false};
            json state;
            try {
                ScoreReport scored = score_comment(c.record, c.record.video_id, context);
                run.reports.emplace_back(c.system, scored);
                outcome.detail = "total " + std::to_string(scored.s_total);
                state = json{{"system", c.system}, {"comment_id", c.record.comment_id}};
            } catch (const ProviderError& e) {
                outcome = {id, StageStatus::failed, e.what(), true};
            } catch (const std::exception& e) {
                outcome = {id, StageStatus::failed, e.what(), false};
            }
            run.report.outcomes.push_back(outcome);
            lines.push_back(detail::log_line("score", outcome, std::move(state)));
        }

        run.aggregate = aggregate_reports(run.reports);

        fs::path dir = config_.workdir / "scores";
        fs::create_directories(dir);
        std::ofstream out(dir / "reports.jsonl", std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write file: " + (dir / "reports.jsonl").string());
        for (const auto& [system, scored] : run.reports) {
            json row = to_json(scored);
            row["system"] = system;
            out << row.dump() << "\n";
        }
        out.close();
        write_json_file(dir / "aggregate.json", run.aggregate);
        detail::write_stage_log(config_.workdir, "score", lines);
        return run;
    }

    // ---- questionnaire: blinded human-evaluation packet ----
    QuestionnaireRun questionnaire(const fs::path& candidates_path, std::uint64_t seed,
                                   const RunOptions& opts = {}) {
        auto candidates = detail::load_candidates(candidates_path);

        std::map<std::string, std::map<std::string, std::string>> per_system;
        std::vector<std::string> video_ids;
        for (const auto& c : candidates) {
            auto& by_video = per_system[c.system];
            if (by_video.count(c.record.video_id))
                throw Error("duplicate candidate for system '" + c.system +
                            "' video: " + c.record.video_id);
            by_video[c.record.video_id] = c.record.text;
            if (std::find(video_ids.begin(), video_ids.end(), c.record.video_id) ==
                video_ids.end())
                video_ids.push_back(c.record.video_id);
        }
        std::sort(video_ids.begin(), video_ids.end());

        QuestionnaireRun run;
        run.report.stage = "questionnaire";
        run.output_dir = config_.workdir / "questionnaire";

        if (opts.dry_run) {
            for (const auto& id : video_ids)
                run.report.outcomes.push_back(
                    {id, StageStatus::planned,
                     "would export " + std::to_string(per_system.size()) + " systems", false});
            return run;
        }

        std::map<std::string, std::string> titles;
        for (const auto& e : entries()) titles[e.video_id] = e.title;
        std::vector<QuestionnaireVideo> videos;
        for (const auto& id : video_ids) {
            auto it = titles.find(id);
            if (it == titles.end()) throw Error("no ingested video: " + id);
            videos.push_back({id, it->second});
        }

        run.packet = export_questionnaire(videos, per_system, seed);
        write_questionnaire(run.packet, run.output_dir);

        std::vector<json> lines;
        for (const auto& item : run.packet.items) {
            StageOutcome outcome{item.item_id, StageStatus::done,
                                 std::to_string(item.options.size()) + " options", false};
            run.report.outcomes.push_back(outcome);
            lines.push_back(detail::log_line(
                "questionnaire", outcome,
                json{{"video_id", item.video_id}, {"options", item.options.size()}}));
        }
        detail::write_stage_log(config_.workdir, "questionnaire", lines);
        return run;
    }

    // ---- dataset-build: curated corpus from labeled workdir entries ----
    StageReport dataset_build(bool check_balance, std::optional<int> per_cell,
                              const RunOptions& opts = {}) {
        auto selected = select_entries({});
        StageReport report{"dataset-build", {}};

        if (opts.dry_run) {
            for (const auto& e : selected)
                report.outcomes.push_back(
                    {e.video_id, StageStatus::planned,
                     check_balance ? "would check balance" : "would add to curated dataset",
                     false});
            return report;
        }

        std::vector<CommentRecord> top_comments;
        std::map<std::string, std::size_t> per_video_count;
        for (const auto& e : selected) {
            fs::path comments_path = video_dir(config_.workdir, e.video_id) / "comments.json";
            if (!fs::exists(comments_path))
                throw Error("no comments for video: " + e.video_id + "; run ingest first");
            std::vector<CommentRecord> all;
            for (const auto& cj : read_json_file(comments_path))
                all.push_back(comment_from_json(cj));
            auto top = fetch_top_comments(std::move(all), config_.platform.top_k);
            per_video_count[e.video_id] = top.size();
            for (auto& c : top) top_comments.push_back(std::move(c));
        }

        AssembleParams params;
        params.per_cell = per_cell;
        DatasetBundle bundle = assemble_dataset(selected, top_comments, params);
        if (!check_balance) save_dataset(config_.resolved_dataset_dir(), bundle);

        std::vector<json> lines;
        for (const auto& e : selected) {
            StageOutcome outcome{e.video_id, StageStatus::done,
                                 to_string(*e.category) + ", " +
                                     std::to_string(per_video_count[e.video_id]) + " comments",
                                 false};
            report.outcomes.push_back(outcome);
            lines.push_back(detail::log_line("dataset-build", outcome,
                                             json{{"category", to_string(*e.category)},
                                                  {"comments", per_video_count[e.video_id]}}));
        }
        if (!check_balance) detail::write_stage_log(config_.workdir, "dataset-build", lines);
        return report;
    }

    // ---- composed flows ----
    std::vector<StageReport> run_all(const fs::path& manifest_path, std::optional<StyleLabel> style,
                                     bool per_style, const RunOptions& opts = {}) {
        std::vector<StageReport> out;
        out.push_back(ingest(manifest_path, opts));
        out.push_back(preprocess({}, opts));
        out.push_back(describe({}, opts));
        out.push_back(classify({}, opts));
        out.push_back(generate({}, style, per_style, opts));
        return out;
    }

    std::vector<StageReport> build_corpus(const fs::path& manifest_path,
                                          std::optional<int> per_cell,
                                          const RunOptions& opts = {}) {
        std::vector<StageReport> out;
        out.push_back(ingest(manifest_path, opts));
        out.push_back(preprocess({}, opts));
        out.push_back(describe({}, opts));
        out.push_back(dataset_build(false, per_cell, opts));
        return out;
    }

private:
    int effective_jobs() const { return config_.jobs < 1 ? 1 : config_.jobs; }

    std::vector<VideoManifestEntry> select_entries(const std::vector<std::string>& ids) const {
        auto all = entries();
        if (all.empty())
            throw Error("no ingested videos in workdir: " + config_.workdir.string() +
                        "; run ingest first");
        if (ids.empty()) return all;
        std::vector<VideoManifestEntry> out;
        for (const auto& e : all)
            if (std::find(ids.begin(), ids.end(), e.video_id) != ids.end()) out.push_back(e);
        for (const auto& id : ids) {
            bool found = false;
            for (const auto& e : out)
                if (e.video_id == id) found = true;
            if (!found) throw Error("no ingested video: " + id);
        }
        return out;
    }

    static bool frames_complete(const VideoManifestEntry& entry, const fs::path& vdir) {
        if (!entry.extra.contains("frame_schedule") || entry.frame_paths.empty()) return false;
        for (const auto& rel : entry.frame_paths)
            if (!fs::exists(detail::resolve_in(vdir, rel))) return false;
        return true;
    }

    DatasetBundle load_curated_dataset() const {
        fs::path dir = config_.resolved_dataset_dir();
        if (!fs::exists(dir / "index.json"))
            throw Error("no curated dataset at " + dir.string() + "; run dataset-build first");
        return load_dataset(dir);
    }

    DatasetEmbeddingIndex build_index(const DatasetBundle& dataset) {
        DatasetEmbeddingIndex index = build_embedding_index(
            dataset, providers_.embed(), config_.workdir / "cache" / "embeddings");
        if (!index.complete())
            throw ProviderError("embedding index incomplete: " +
                                    std::to_string(index.failed_video_ids.size()) +
                                    " provider failures; re-run when the provider recovers",
                                false);
        return index;
    }

    PlatformClient* client_for(Platform platform) {
        auto it = clients_.find(platform);
        if (it != clients_.end()) return it->second.get();
        std::unique_ptr<PlatformClient> client;
        if (config_.platform.kind == "mock") {
            client = std::make_unique<MockPlatformClient>(platform, config_.platform.fixture_root);
        } else if (platform == Platform::douyin) {
            client = std::make_unique<DouyinApiClient>(config_.platform.douyin);
        } else {
            client = std::make_unique<YoutubeApiClient>(config_.platform.youtube);
        }
        if (config_.platform.kind == "api")
            limiters_[platform] = std::make_unique<RateLimiter>(config_.rate_limit.rate_per_s,
                                                                config_.rate_limit.burst);
        return (clients_[platform] = std::move(client)).get();
    }

    RateLimiter* limiter_for(Platform platform) {
        auto it = limiters_.find(platform);
        return it == limiters_.end() ? nullptr : it->second.get();
    }

    PipelineConfig config_;
    ProviderSet providers_;
    std::map<Platform, std::unique_ptr<PlatformClient>> clients_;
    std::map<Platform, std::unique_ptr<RateLimiter>> limiters_;
};

}  // namespace stylecast
