#include <catch2/catch_amalgamated.hpp>

#include "stylecast/generate.hpp"
#include "support/test_util.hpp"

using namespace stylecast;
using namespace stylecast::test;

namespace {

GenerationRequest fixture_request() {
    GenerationRequest r;
    r.video_description = "A corgi repeatedly fails to climb onto a couch, then succeeds.";
    r.style_template.comment_id = "tpl";
    r.style_template.text = "Tried 5 times, failed 5 times... story of my Mondays!";
    r.style_template.style_label = StyleLabel::sarcasm_irony;
    r.style = StyleLabel::sarcasm_irony;
    r.language = Language::en;
    r.few_shot = {{"Desc A", "Comment A!"}, {"Desc B", "Comment B?"}};
    return r;
}

}  // namespace

TEST_CASE("prompt template files match the embedded registry") {
    fs::path root = fs::path(STYLECAST_SOURCE_DIR) / "prompts";
    for (const auto& [version, text] : instruction_registry())
        CHECK(read_file(root / (version + ".txt")) == text);
    CHECK(read_file(root / "describe_v1.txt") == describe_instruction());
}

TEST_CASE("prompt renders the documented layout") {
    PromptDocument doc = build_prompt(fixture_request());
    CHECK_FALSE(doc.zero_shot);
    CHECK(doc.fingerprint.size() == 16);

    CHECK(doc.text.find("[instruction generate_v1]") == 0);
    CHECK(doc.text.find("[STYLE:sarcasm_irony]") != std::string::npos);
    CHECK(doc.text.find("[example 1]\nvideo: Desc A\ncomment: Comment A!") != std::string::npos);
    CHECK(doc.text.find("[example 2]") != std::string::npos);
    CHECK(doc.text.find("structure reference only") != std::string::npos);
    CHECK(doc.text.find(fixture_request().style_template.text) != std::string::npos);
    CHECK(doc.text.find("[video description]\nA corgi repeatedly fails") != std::string::npos);
    CHECK(doc.text.find("Write the comment in English.") != std::string::npos);

    // Layout ordering: instruction < style marker < examples < template < description.
    CHECK(doc.text.find("[STYLE:") < doc.text.find("[example 1]"));
    CHECK(doc.text.find("[example 1]") < doc.text.find("[style template"));
    CHECK(doc.text.find("[style template") < doc.text.find("[video description]"));
}

TEST_CASE("prompt golden bytes") {
    PromptDocument doc = build_prompt(fixture_request());
    fs::path golden = fs::path(STYLECAST_SOURCE_DIR) / "tests" / "golden" / "prompt_fixture.txt";
    if (std::getenv("STYLECAST_REGEN_GOLDEN")) {
        fs::create_directories(golden.parent_path());
        write_file(golden, doc.text);
    }
    REQUIRE(fs::exists(golden));
    CHECK(doc.text == read_file(golden));
}

TEST_CASE("zero-shot variant replaces examples with a notice") {
    GenerationRequest r = fixture_request();
    r.few_shot.clear();
    PromptDocument doc = build_prompt(r);
    CHECK(doc.zero_shot);
    CHECK(doc.text.find("[no style examples available") != std::string::npos);
    CHECK(doc.text.find("[example") == std::string::npos);
}

TEST_CASE("identical requests give identical fingerprints") {
    PromptDocument a = build_prompt(fixture_request());
    PromptDocument b = build_prompt(fixture_request());
    CHECK(a.fingerprint == b.fingerprint);
    CHECK(a.text == b.text);

    GenerationRequest changed = fixture_request();
    changed.style = StyleLabel::rhyming;
    CHECK(build_prompt(changed).fingerprint != a.fingerprint);
}

TEST_CASE("prompt validation") {
    GenerationRequest r = fixture_request();
    r.video_description.clear();
    REQUIRE_THROWS_WITH(build_prompt(r), "empty video description");

    r = fixture_request();
    r.style_template.text.clear();
    REQUIRE_THROWS_WITH(build_prompt(r), "empty style template");

    r = fixture_request();
    r.instruction_version = "generate_v999";
    REQUIRE_THROWS_WITH(build_prompt(r), "unknown instruction version: generate_v999");
}

TEST_CASE("trimming strips whitespace and balanced quotes") {
    CHECK(trim_generated("  plain text  ") == "plain text");
    CHECK(trim_generated("\"quoted text\"") == "quoted text");
    CHECK(trim_generated(" \" spaced quote \" ") == "spaced quote");
    CHECK(trim_generated("“smart quotes”") == "smart quotes");
    CHECK(trim_generated("「日式引号」") == "日式引号");
    CHECK(trim_generated("'nested \"inner\" quotes'") == "nested \"inner\" quotes");
    CHECK(trim_generated("don't strip interior quotes") == "don't strip interior quotes");
    CHECK(trim_generated("") == "");
    CHECK(trim_generated("   ") == "");
}

TEST_CASE("scalar length counts code points") {
    CHECK(scalar_length("abc") == 3);
    CHECK(scalar_length("三个字") == 3);
    CHECK(scalar_length("a三c") == 3);
}

TEST_CASE("sentence truncation prefers a boundary") {
    std::string text = "First sentence. Second sentence! Third runs long without end";
    std::string cut = truncate_at_sentence(text, 40);
    CHECK(cut == "First sentence. Second sentence!");
    CHECK(truncate_at_sentence(text, 500) == text);

    std::string no_boundary(50, 'x');
    CHECK(scalar_length(truncate_at_sentence(no_boundary, 20)) == 20);
}

TEST_CASE("mock generation round trip") {
    MockGenerateProvider provider;
    provider.script = {"A canned comment, exactly as scripted."};
    GeneratedComment g = generate_comment(fixture_request(), provider);
    CHECK(g.text == "A canned comment, exactly as scripted.");
    CHECK(g.style == StyleLabel::sarcasm_irony);
    CHECK(g.provider_id == "mock-generate-v1");
    CHECK(g.request_fingerprint == build_prompt(fixture_request()).fingerprint);
}

TEST_CASE("overlong output triggers one re-ask then truncation") {
    MockGenerateProvider provider;
    std::string long_text;
    for (int i = 0; i < 50; ++i) long_text += "Padding sentence " + std::to_string(i) + ". ";
    provider.script = {long_text, long_text};  // still long after the re-ask

    GeneratedComment g = generate_comment(fixture_request(), provider);
    CHECK(provider.calls == 2);
    CHECK(scalar_length(g.text) <= 200);
    CHECK(g.text.back() == '.');
    CHECK(provider.last_prompt.find("too long") != std::string::npos);

    // A compliant re-ask answer is kept verbatim.
    MockGenerateProvider provider2;
    provider2.script = {long_text, "Short and sweet."};
    GeneratedComment g2 = generate_comment(fixture_request(), provider2);
    CHECK(g2.text == "Short and sweet.");
    CHECK(provider2.calls == 2);
}

TEST_CASE("provider outage errors with the fingerprint") {
    MockGenerateProvider provider;
    provider.script = {"<fail>", "<fail>", "<fail>"};
    try {
        generate_comment(fixture_request(), provider);
        FAIL("expected error");
    } catch (const ProviderError& e) {
        std::string msg = e.what();
        CHECK(msg.find("3 attempts") != std::string::npos);
        CHECK(msg.find(build_prompt(fixture_request()).fingerprint) != std::string::npos);
    }
}

TEST_CASE("generated jsonl appends one line per call") {
    TempDir tmp;
    fs::path path = tmp.path() / "v" / "generated.jsonl";
    GeneratedComment g;
    g.text = "first";
    g.style = StyleLabel::rhyming;
    g.language = Language::en;
    g.request_fingerprint = "abcd";
    g.provider_id = "p";
    append_generated(path, g);
    g.text = "second";
    append_generated(path, g);

    std::string content = read_file(path);
    CHECK(std::count(content.begin(), content.end(), '\n') == 2);
    auto first_line = content.substr(0, content.find('\n'));
    json j = json::parse(first_line);
    CHECK(j["text"] == "first");
    CHECK(j["style"] == "rhyming");
}
