#pragma once

#include <set>
#include <string>

#include "stylecast/classify.hpp"
#include "stylecast/describe.hpp"
#include "stylecast/generate.hpp"
#include "stylecast/http_providers.hpp"
#include "stylecast/media.hpp"
#include "stylecast/platform_api.hpp"
#include "stylecast/prompt.hpp"
#include "stylecast/scoring.hpp"
#include "stylecast/signal.hpp"
#include "stylecast/style_score.hpp"
#include "stylecast/toml_lite.hpp"

namespace stylecast {

enum class ProviderKind { mock, http };

struct ProviderBinding {
    ProviderKind kind = ProviderKind::mock;
    HttpProviderConfig http;
};

struct RateLimitConfig {
    double rate_per_s = 2.0;
    double burst = 4.0;
};

struct PlatformClientsConfig {
    std::string kind = "mock";  // mock | api
    fs::path fixture_root = "fixtures/platform";
    PlatformApiConfig douyin;
    PlatformApiConfig youtube;
    std::size_t max_comments = 200;
    std::size_t top_k = 5;
};

struct PipelineConfig {
    fs::path workdir = "work";
    std::uint64_t seed = 42;
    int jobs = 1;
    ProviderBinding describe;
    ProviderBinding embed;
    ProviderBinding generate;
    ProviderBinding sentiment;
    ProviderBinding transcribe;
    HighlightParams highlight;
    SelectionParams selection;
    ScoringParams scoring;
    ClassifyParams classify;
    GenerateParams generation;
    DescribeParams describing;
    DecoderCommands decoder;
    RateLimitConfig rate_limit;
    PlatformClientsConfig platform;
    fs::path dataset_dir;  // empty -> <workdir>/dataset
    std::string generate_instruction = kGenerateInstructionVersion;
    std::string describe_instruction_version = kDescribeInstructionVersion;

    fs::path resolved_dataset_dir() const {
        return dataset_dir.empty() ? workdir / "dataset" : dataset_dir;
    }
};

namespace detail {

// Tracks which keys a load consumed so typos surface as errors.
class KeyReader {
public:
    explicit KeyReader(const toml::Table& table) : table_(table) {}

    std::string str(const std::string& key, const std::string& fallback) {
        used_.insert(key);
        return table_.get_string(key, fallback);
    }
    double num(const std::string& key, double fallback) {
        used_.insert(key);
        return table_.get_double(key, fallback);
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        used_.insert(key);
        return table_.get_int(key, fallback);
    }
    bool has(const std::string& key) {
        used_.insert(key);
        return table_.has(key);
    }

    void finish() const {
        for (const auto& [key, value] : table_.entries)
            if (!used_.count(key)) throw Error("unknown config key: " + key);
    }

private:
    const toml::Table& table_;
    std::set<std::string> used_;
};

inline ProviderBinding read_provider(KeyReader& reader, const std::string& section) {
    ProviderBinding binding;
    std::string kind = reader.str(section + ".kind", "mock");
    if (kind == "mock") {
        binding.kind = ProviderKind::mock;
    } else if (kind == "http") {
        binding.kind = ProviderKind::http;
    } else {
        throw Error("unknown provider kind for " + section + ": " + kind);
    }
    binding.http.base_url = reader.str(section + ".base_url", "");
    binding.http.path = reader.str(section + ".path", binding.http.path);
    binding.http.model = reader.str(section + ".model", "");
    binding.http.api_key_env = reader.str(section + ".api_key_env", "");
    binding.http.timeout_s = reader.num(section + ".timeout_s", binding.http.timeout_s);
    if (binding.kind == ProviderKind::http && binding.http.base_url.empty())
        throw Error("provider " + section + " is http but has no base_url");
    return binding;
}

}  // namespace detail

inline PipelineConfig parse_config(const std::string& toml_text) {
    toml::Table table = toml::parse(toml_text);
    detail::KeyReader reader(table);
    PipelineConfig config;

    config.workdir = reader.str("workdir", config.workdir.string());
    config.seed = static_cast<std::uint64_t>(reader.integer("seed", static_cast<std::int64_t>(config.seed)));
    config.jobs = static_cast<int>(reader.integer("jobs", config.jobs));
    if (config.jobs < 1) throw Error("jobs must be >= 1");

    config.describe = detail::read_provider(reader, "providers.describe");
    config.embed = detail::read_provider(reader, "providers.embed");
    config.generate = detail::read_provider(reader, "providers.generate");
    config.sentiment = detail::read_provider(reader, "providers.sentiment");
    config.transcribe = detail::read_provider(reader, "providers.transcribe");

    config.highlight.omega_audio = reader.num("highlight.omega_audio", config.highlight.omega_audio);
    config.highlight.omega_light = reader.num("highlight.omega_light", config.highlight.omega_light);
    if (reader.has("highlight.threshold_absolute")) {
        config.highlight.threshold =
            Threshold::absolute(reader.num("highlight.threshold_absolute", 0.0));
    } else if (reader.has("highlight.threshold_percentile")) {
        config.highlight.threshold =
            Threshold::percentile(reader.num("highlight.threshold_percentile", 90.0));
    }
    config.highlight.smooth_window_s =
        reader.num("highlight.smooth_window_s", config.highlight.smooth_window_s);
    config.highlight.min_window_s =
        reader.num("highlight.min_window_s", config.highlight.min_window_s);
    config.highlight.merge_gap_s =
        reader.num("highlight.merge_gap_s", config.highlight.merge_gap_s);
    config.highlight.resample_hz =
        reader.num("highlight.resample_hz", config.highlight.resample_hz);

    config.selection.pool_size = static_cast<std::size_t>(
        reader.integer("selection.pool_size", static_cast<std::int64_t>(config.selection.pool_size)));
    config.selection.group_count = static_cast<std::size_t>(reader.integer(
        "selection.group_count", static_cast<std::int64_t>(config.selection.group_count)));
    config.selection.alpha = reader.num("selection.alpha", config.selection.alpha);
    config.selection.beta = reader.num("selection.beta", config.selection.beta);
    config.selection.gamma = reader.num("selection.gamma", config.selection.gamma);
    std::string scorer = reader.str("selection.scorer", "heuristic");
    if (scorer == "heuristic") {
        config.selection.scorer_kind = ScorerKind::heuristic;
    } else if (scorer == "llm_judge") {
        config.selection.scorer_kind = ScorerKind::llm_judge;
    } else {
        throw Error("unknown selection scorer: " + scorer);
    }
    config.selection.seed = config.seed;
    validate(config.selection);

    if (reader.has("scoring.sigma")) config.scoring.sigma = reader.num("scoring.sigma", 0.0);
    config.scoring.sigma_floor = reader.num("scoring.sigma_floor", config.scoring.sigma_floor);
    if (config.scoring.sigma && *config.scoring.sigma <= 0.0)
        throw Error("scoring sigma must be positive");

    config.classify.fallback_threshold =
        reader.num("classify.fallback_threshold", config.classify.fallback_threshold);

    config.generation.max_retries = static_cast<int>(
        reader.integer("generate.max_retries", config.generation.max_retries));
    config.generation.length_ceiling = static_cast<std::size_t>(reader.integer(
        "generate.length_ceiling", static_cast<std::int64_t>(config.generation.length_ceiling)));
    config.generation.few_shot_k = static_cast<std::size_t>(
        reader.integer("generate.few_shot_k", static_cast<std::int64_t>(config.generation.few_shot_k)));
    config.describing.max_retries = static_cast<int>(
        reader.integer("describe.max_retries", config.describing.max_retries));

    config.decoder.series_command =
        reader.str("media.series_command", config.decoder.series_command);
    config.decoder.frame_command = reader.str("media.frame_command", config.decoder.frame_command);

    config.rate_limit.rate_per_s = reader.num("rate_limit.rate_per_s", config.rate_limit.rate_per_s);
    config.rate_limit.burst = reader.num("rate_limit.burst", config.rate_limit.burst);

    config.platform.kind = reader.str("platform.kind", config.platform.kind);
    if (config.platform.kind != "mock" && config.platform.kind != "api")
        throw Error("unknown platform client kind: " + config.platform.kind);
    config.platform.fixture_root =
        reader.str("platform.fixture_root", config.platform.fixture_root.string());
    config.platform.max_comments = static_cast<std::size_t>(reader.integer(
        "platform.max_comments", static_cast<std::int64_t>(config.platform.max_comments)));
    config.platform.top_k = static_cast<std::size_t>(
        reader.integer("platform.top_k", static_cast<std::int64_t>(config.platform.top_k)));
    config.platform.douyin.base_url = reader.str("platform.douyin_base_url", "");
    config.platform.youtube.base_url = reader.str("platform.youtube_base_url", "");
    config.platform.douyin.api_key_env =
        reader.str("platform.douyin_token_env", "DOUYIN_API_TOKEN");
    config.platform.youtube.api_key_env =
        reader.str("platform.youtube_key_env", "YOUTUBE_API_KEY");
    std::string download_command = reader.str("platform.download_command", "");
    config.platform.douyin.download_command = download_command;
    config.platform.youtube.download_command = download_command;
    double platform_timeout = reader.num("platform.timeout_s", 30.0);
    config.platform.douyin.timeout_s = platform_timeout;
    config.platform.youtube.timeout_s = platform_timeout;
    if (config.platform.kind == "api" && (config.platform.douyin.base_url.empty() ||
                                          config.platform.youtube.base_url.empty()))
        throw Error("platform kind is api but base urls are not configured");

    config.dataset_dir = reader.str("dataset_dir", "");

    config.generate_instruction =
        reader.str("prompt.generate_instruction", config.generate_instruction);
    config.describe_instruction_version =
        reader.str("prompt.describe_instruction", config.describe_instruction_version);
    if (!instruction_registry().count(config.generate_instruction))
        throw Error("unknown instruction version: " + config.generate_instruction);
    if (config.describe_instruction_version != kDescribeInstructionVersion)
        throw Error("unknown instruction version: " + config.describe_instruction_version);

    reader.finish();
    return config;
}

// Missing file at the default location falls back to built-in defaults; an
// explicitly requested config that does not exist is an error.
inline PipelineConfig load_config(const fs::path& path, bool explicit_path) {
    if (!fs::exists(path)) {
        if (explicit_path) throw Error("config file not found: " + path.string());
        return PipelineConfig{};
    }
    return parse_config(read_text_file(path));
}

}  // namespace stylecast
