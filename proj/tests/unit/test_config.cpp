#include <catch2/catch_amalgamated.hpp>

#include "stylecast/config.hpp"
#include "support/test_util.hpp"

using namespace stylecast;
using namespace stylecast::test;
using Catch::Matchers::StartsWith;
using Catch::Matchers::WithinAbs;

TEST_CASE("toml subset parses scalars, sections, comments") {
    auto table = toml::parse(R"(# top comment
title = "style # caster"   # trailing comment
count = 42
ratio = 0.75
neg = -3
flag = true
off = false

[section]
name = "inner"

[deep.nested]
value = 1.5
)");
    CHECK(table.get_string("title") == "style # caster");
    CHECK(table.get_int("count") == 42);
    CHECK(table.get_double("ratio") == 0.75);
    CHECK(table.get_int("neg") == -3);
    CHECK(table.get_bool("flag"));
    CHECK_FALSE(table.get_bool("off"));
    CHECK(table.get_string("section.name") == "inner");
    CHECK(table.get_double("deep.nested.value") == 1.5);
    CHECK(table.get_double("count") == 42.0);  // int promotes to double
}

TEST_CASE("toml string escapes") {
    auto table = toml::parse(R"(s = "a\"b\\c\nd\te")");
    CHECK(table.get_string("s") == "a\"b\\c\nd\te");
}

TEST_CASE("toml parse errors carry line numbers") {
    CHECK_THROWS_WITH(toml::parse("a = 1\nb ~ 2\n"),
                      "config parse error at line 2: expected key = value");
    CHECK_THROWS_WITH(toml::parse("a = \"unterminated\n"),
                      StartsWith("config parse error at line 1: unterminated string"));
    CHECK_THROWS_WITH(toml::parse("[bad section\n"),
                      "config parse error at line 1: unterminated section header");
    CHECK_THROWS_WITH(toml::parse("a = 1\na = 2\n"),
                      "config parse error at line 2: duplicate key: a");
    CHECK_THROWS_WITH(toml::parse("a = what\n"),
                      "config parse error at line 1: unparsable value: what");
    CHECK_THROWS_WITH(toml::parse("a = \"x\\q\"\n"),
                      StartsWith("config parse error at line 1: unsupported escape"));
    CHECK_THROWS_WITH(toml::parse("!bad = 1\n"),
                      "config parse error at line 1: invalid key: !bad");
}

TEST_CASE("toml accessors enforce types") {
    auto table = toml::parse("s = \"text\"\nn = 5\n");
    CHECK_THROWS_WITH(table.get_int("s"), "config key is not an integer: s");
    CHECK_THROWS_WITH(table.get_string("n"), "config key is not a string: n");
    CHECK_THROWS_WITH(table.get_bool("n"), "config key is not a boolean: n");
    CHECK(table.get_string("missing", "fallback") == "fallback");
}

TEST_CASE("defaults survive an empty config") {
    PipelineConfig config = parse_config("");
    CHECK(config.workdir == "work");
    CHECK(config.seed == 42);
    CHECK(config.jobs == 1);
    CHECK(config.describe.kind == ProviderKind::mock);
    CHECK(config.selection.pool_size == 100);
    CHECK(config.selection.group_count == 10);
    CHECK_THAT(config.selection.alpha + config.selection.beta + config.selection.gamma,
               WithinAbs(1.0, 1e-9));
    CHECK_FALSE(config.scoring.sigma.has_value());
    CHECK(config.generate_instruction == kGenerateInstructionVersion);
}

TEST_CASE("full config round trip") {
    PipelineConfig config = parse_config(R"(
workdir = "/tmp/stylecast-work"
seed = 7
jobs = 4

[providers.describe]
kind = "http"
base_url = "http://127.0.0.1:9001"
model = "desc-model"
api_key_env = "DESCRIBE_KEY"
timeout_s = 5.0

[providers.embed]
kind = "mock"

[highlight]
omega_audio = 0.7
omega_light = 0.3
threshold_percentile = 85.0
min_window_s = 1.0

[selection]
pool_size = 50
group_count = 5
alpha = 0.5
beta = 0.25
gamma = 0.25
scorer = "llm_judge"

[scoring]
sigma = 0.2
sigma_floor = 0.01

[classify]
fallback_threshold = 0.2

[generate]
max_retries = 5
length_ceiling = 150
few_shot_k = 2

[media]
series_command = "mydecoder {input}"

[rate_limit]
rate_per_s = 1.5
burst = 2
)");
    CHECK(config.workdir == "/tmp/stylecast-work");
    CHECK(config.seed == 7);
    CHECK(config.jobs == 4);
    CHECK(config.describe.kind == ProviderKind::http);
    CHECK(config.describe.http.base_url == "http://127.0.0.1:9001");
    CHECK(config.describe.http.model == "desc-model");
    CHECK(config.describe.http.api_key_env == "DESCRIBE_KEY");
    CHECK(config.describe.http.timeout_s == 5.0);
    CHECK(config.embed.kind == ProviderKind::mock);
    CHECK(config.highlight.omega_audio == 0.7);
    CHECK(config.highlight.threshold.kind == Threshold::Kind::percentile);
    CHECK(config.highlight.threshold.value == 85.0);
    CHECK(config.highlight.min_window_s == 1.0);
    CHECK(config.selection.pool_size == 50);
    CHECK(config.selection.scorer_kind == ScorerKind::llm_judge);
    CHECK(config.selection.seed == 7);
    REQUIRE(config.scoring.sigma.has_value());
    CHECK(*config.scoring.sigma == 0.2);
    CHECK(config.classify.fallback_threshold == 0.2);
    CHECK(config.generation.max_retries == 5);
    CHECK(config.generation.length_ceiling == 150);
    CHECK(config.generation.few_shot_k == 2);
    CHECK(config.decoder.series_command == "mydecoder {input}");
    CHECK(config.rate_limit.rate_per_s == 1.5);
    CHECK(config.rate_limit.burst == 2.0);
}

TEST_CASE("absolute threshold wins over percentile default") {
    PipelineConfig config = parse_config("[highlight]\nthreshold_absolute = 0.33\n");
    CHECK(config.highlight.threshold.kind == Threshold::Kind::absolute);
    CHECK(config.highlight.threshold.value == 0.33);
}

TEST_CASE("config validation errors") {
    CHECK_THROWS_WITH(parse_config("unknown_key = 1\n"), "unknown config key: unknown_key");
    CHECK_THROWS_WITH(parse_config("[providers.embed]\nkind = \"quantum\"\n"),
                      "unknown provider kind for providers.embed: quantum");
    CHECK_THROWS_WITH(parse_config("[providers.generate]\nkind = \"http\"\n"),
                      "provider providers.generate is http but has no base_url");
    CHECK_THROWS_WITH(parse_config("[selection]\nalpha = 0.9\nbeta = 0.9\ngamma = 0.9\n"),
                      "selection weights must sum to 1");
    CHECK_THROWS_WITH(parse_config("[selection]\nscorer = \"dice\"\n"),
                      "unknown selection scorer: dice");
    CHECK_THROWS_WITH(parse_config("[scoring]\nsigma = -1.0\n"),
                      "scoring sigma must be positive");
    CHECK_THROWS_WITH(parse_config("jobs = 0\n"), "jobs must be >= 1");
    CHECK_THROWS_WITH(parse_config("[prompt]\ngenerate_instruction = \"v99\"\n"),
                      "unknown instruction version: v99");
    CHECK_THROWS_WITH(parse_config("[prompt]\ndescribe_instruction = \"v99\"\n"),
                      "unknown instruction version: v99");
}

TEST_CASE("load_config path handling") {
    TempDir tmp;
    SECTION("missing default path falls back to defaults") {
        PipelineConfig config = load_config(tmp.path() / "stylecast.toml", false);
        CHECK(config.workdir == "work");
    }
    SECTION("missing explicit path is an error") {
        CHECK_THROWS_WITH(load_config(tmp.path() / "gone.toml", true),
                          StartsWith("config file not found"));
    }
    SECTION("existing file is parsed") {
        write_file(tmp.path() / "stylecast.toml", "seed = 99\n");
        PipelineConfig config = load_config(tmp.path() / "stylecast.toml", false);
        CHECK(config.seed == 99);
    }
}
