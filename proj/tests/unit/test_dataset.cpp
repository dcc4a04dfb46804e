#include <catch2/catch_amalgamated.hpp>

#include "stylecast/dataset.hpp"
#include "support/test_util.hpp"

using namespace stylecast;
using namespace stylecast::test;

namespace {

VideoManifestEntry make_entry(const std::string& id, Platform p, VideoCategory c) {
    VideoManifestEntry e;
    e.video_id = id;
    e.platform = p;
    e.language = default_language(p);
    e.category = c;
    e.semantic_description = "description for " + id;
    e.duration_s = 30.0;
    return e;
}

CommentRecord make_comment(const std::string& id, const std::string& video_id,
                           const std::string& text, long long likes,
                           std::optional<StyleLabel> style = std::nullopt) {
    CommentRecord c;
    c.comment_id = id;
    c.video_id = video_id;
    c.text = text;
    c.like_count = likes;
    c.language = Language::en;
    c.style_label = style;
    return c;
}

// One video per curated category on a single platform: balanced with per_cell=1.
std::vector<VideoManifestEntry> balanced_entries(Platform p) {
    std::vector<VideoManifestEntry> out;
    int i = 0;
    for (VideoCategory c : kCuratedCategories)
        out.push_back(make_entry(to_string(p) + "_" + std::to_string(i++), p, c));
    return out;
}

}  // namespace

TEST_CASE("balanced dataset assembles") {
    auto entries = balanced_entries(Platform::youtube);
    std::vector<CommentRecord> comments = {
        make_comment("c1", entries[0].video_id, "Great! Loved it.", 10),
        make_comment("c2", entries[1].video_id, "haha no way?", 5),
    };
    DatasetBundle b = assemble_dataset(entries, comments);
    CHECK(b.videos.size() == kCuratedCategories.size());
    CHECK(b.find_video(entries[0].video_id)->comments.size() == 1);
    CHECK(b.find_video(entries[2].video_id)->comments.empty());
    CHECK(b.all_comments().size() == 2);
    CHECK(b.category_profiles.size() == kCuratedCategories.size());
}

TEST_CASE("two platforms balance independently") {
    auto entries = balanced_entries(Platform::youtube);
    auto zh = balanced_entries(Platform::douyin);
    entries.insert(entries.end(), zh.begin(), zh.end());
    CHECK_NOTHROW(assemble_dataset(entries, {}));
}

TEST_CASE("empty dataset is rejected") {
    REQUIRE_THROWS_WITH(assemble_dataset({}, {}), "empty dataset");
}

TEST_CASE("imbalance names the offending cell") {
    auto entries = balanced_entries(Platform::youtube);
    entries.push_back(make_entry("extra", Platform::youtube, VideoCategory::funny_animal));
    try {
        assemble_dataset(entries, {});
        FAIL("expected balance failure");
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("balance check failed") != std::string::npos);
        CHECK(msg.find("funny_animal") != std::string::npos);
        CHECK(msg.find("count=2") != std::string::npos);
        CHECK(msg.find("expected=1") != std::string::npos);
    }
}

TEST_CASE("explicit per_cell overrides the modal inference") {
    auto entries = balanced_entries(Platform::youtube);
    AssembleParams params;
    params.per_cell = 2;
    try {
        assemble_dataset(entries, {}, params);
        FAIL("expected balance failure");
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("expected=2") != std::string::npos);
    }
}

TEST_CASE("missing category or description is rejected") {
    auto entries = balanced_entries(Platform::youtube);
    SECTION("no category") {
        entries[0].category.reset();
        REQUIRE_THROWS_WITH(assemble_dataset(entries, {}),
                            Catch::Matchers::StartsWith("uncategorized video"));
    }
    SECTION("other category") {
        entries[0].category = VideoCategory::other;
        REQUIRE_THROWS_AS(assemble_dataset(entries, {}), Error);
    }
    SECTION("no description") {
        entries[0].semantic_description.clear();
        REQUIRE_THROWS_WITH(assemble_dataset(entries, {}),
                            Catch::Matchers::StartsWith("missing semantic description"));
    }
}

TEST_CASE("comment pointing at unknown video is rejected") {
    auto entries = balanced_entries(Platform::youtube);
    auto comments = std::vector<CommentRecord>{make_comment("c", "ghost", "x", 0)};
    REQUIRE_THROWS_WITH(assemble_dataset(entries, comments),
                        "comment references unknown video: ghost");
}

TEST_CASE("category profiles reflect member comments") {
    auto entries = balanced_entries(Platform::youtube);
    std::vector<CommentRecord> comments = {
        make_comment("c1", entries[0].video_id, "Wild! Crazy! Wow!", 1),
        make_comment("c2", entries[1].video_id, "calm words here", 1),
    };
    DatasetBundle b = assemble_dataset(entries, comments);
    FeatureVector talk = b.category_profiles.at(VideoCategory::talk_show);
    FeatureVector humor = b.category_profiles.at(VideoCategory::humorous_commentary);
    CHECK(talk[2] == 3.0);   // exclaim marks from c1
    CHECK(humor[2] == 0.0);
    FeatureVector animal = b.category_profiles.at(VideoCategory::funny_animal);
    for (double v : animal) CHECK(v == 0.0);  // no comments -> zero profile
}

TEST_CASE("few shot selection filters style and language deterministically") {
    auto entries = balanced_entries(Platform::youtube);
    std::vector<CommentRecord> comments = {
        make_comment("c1", entries[0].video_id, "first", 9, StyleLabel::meme_application),
        make_comment("c2", entries[0].video_id, "wrong style", 9, StyleLabel::puns_homophones),
        make_comment("c3", entries[1].video_id, "second", 9, StyleLabel::meme_application),
        make_comment("c4", entries[2].video_id, "third", 9, StyleLabel::meme_application),
    };
    DatasetBundle b = assemble_dataset(entries, comments);

    auto pairs = select_few_shot(b, StyleLabel::meme_application, Language::en, 2);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].comment == "first");
    CHECK(pairs[0].description == entries[0].semantic_description);
    CHECK(pairs[1].comment == "second");

    CHECK(select_few_shot(b, StyleLabel::meme_application, Language::zh, 2).empty());
    CHECK(select_few_shot(b, StyleLabel::meme_application, Language::en, 10).size() == 3);
}

TEST_CASE("dataset persistence round trip") {
    TempDir tmp;
    auto entries = balanced_entries(Platform::youtube);
    std::vector<CommentRecord> comments = {
        make_comment("c1", entries[0].video_id, "Hey! Nice.", 3, StyleLabel::rhyming),
    };
    DatasetBundle b = assemble_dataset(entries, comments);
    save_dataset(tmp.path() / "dataset", b);

    CHECK(fs::exists(tmp.path() / "dataset" / "index.json"));
    CHECK(fs::exists(tmp.path() / "dataset" / (entries[0].video_id + ".json")));

    DatasetBundle back = load_dataset(tmp.path() / "dataset");
    REQUIRE(back.videos.size() == b.videos.size());
    CHECK(back.videos[0].video_id == b.videos[0].video_id);
    CHECK(back.videos[0].category == b.videos[0].category);
    REQUIRE(back.videos[0].comments.size() == 1);
    CHECK(back.videos[0].comments[0].style_label == StyleLabel::rhyming);
    CHECK(back.category_profiles.at(VideoCategory::talk_show) ==
          b.category_profiles.at(VideoCategory::talk_show));
}
