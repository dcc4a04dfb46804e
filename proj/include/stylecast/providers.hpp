#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "stylecast/hash.hpp"
#include "stylecast/manifest.hpp"
#include "stylecast/unicode.hpp"

namespace stylecast {

enum class Sentiment { positive, negative };

inline std::string to_string(Sentiment s) {
    return s == Sentiment::positive ? "positive" : "negative";
}

struct Embedding {
    std::vector<double> values;
    std::string provider_id;

    std::size_t dim() const { return values.size(); }
};

// Everything a describe backend sees for one video. describe_video enforces
// max_frames by uniform subsampling before the provider call.
struct DescribeRequest {
    std::string title;
    std::string description_text;
    double duration_s = 0.0;
    Language language = Language::en;
    std::vector<TranscriptSegment> transcript;
    std::vector<std::string> frame_paths;
    std::size_t max_frames = 32;

    json to_json() const {
        json t = json::array();
        for (const auto& seg : transcript)
            t.push_back({{"start_s", seg.start_s}, {"end_s", seg.end_s}, {"text", seg.text}});
        return json{{"title", title},
                    {"description_text", description_text},
                    {"duration_s", duration_s},
                    {"language", stylecast::to_string(language)},
                    {"transcript", t},
                    {"frame_paths", frame_paths},
                    {"max_frames", max_frames}};
    }
};

class TranscribeProvider {
public:
    virtual ~TranscribeProvider() = default;
    virtual std::string provider_id() const = 0;
    virtual std::vector<TranscriptSegment> transcribe(const std::string& media_path) = 0;
};

class DescribeProvider {
public:
    virtual ~DescribeProvider() = default;
    virtual std::string provider_id() const = 0;
    virtual std::string describe(const DescribeRequest& request) = 0;
};

class EmbedProvider {
public:
    virtual ~EmbedProvider() = default;
    virtual std::string provider_id() const = 0;
    virtual Embedding embed(const std::string& text) = 0;
};

class GenerateProvider {
public:
    virtual ~GenerateProvider() = default;
    virtual std::string provider_id() const = 0;
    virtual std::string generate(const std::string& prompt, Language language) = 0;
};

class SentimentProvider {
public:
    virtual ~SentimentProvider() = default;
    virtual std::string provider_id() const = 0;
    virtual Sentiment classify(const std::string& text, Language language) = 0;
};

// ---- deterministic mocks (offline test backends) ----

// Returns the same canned segments for every media path; a per-path map can
// override. Missing path with no default -> provider error.
class MockTranscribeProvider : public TranscribeProvider {
public:
    explicit MockTranscribeProvider(std::vector<TranscriptSegment> default_segments = {})
        : default_segments_(std::move(default_segments)) {}

    std::string provider_id() const override { return "mock-transcribe-v1"; }

    void set_for_path(const std::string& media_path, std::vector<TranscriptSegment> segments) {
        by_path_[media_path] = std::move(segments);
    }

    std::vector<TranscriptSegment> transcribe(const std::string& media_path) override {
        ++calls;
        auto it = by_path_.find(media_path);
        if (it != by_path_.end()) return it->second;
        return default_segments_;
    }

    int calls = 0;

private:
    std::vector<TranscriptSegment> default_segments_;
    std::map<std::string, std::vector<TranscriptSegment>> by_path_;
};

// Canonical template output so downstream goldens are stable:
//   [mock-describe v1] title=<t>; first=<first transcript text>;
//   last=<last transcript text>; frames=<n>
class MockDescribeProvider : public DescribeProvider {
public:
    std::string provider_id() const override { return "mock-describe-v1"; }

    std::string describe(const DescribeRequest& request) override {
        ++calls;
        if (!script.empty()) {
            std::string next = script.front();
            script.pop_front();
            if (next == "<fail>") throw ProviderError("scripted describe failure", true);
            return next;
        }
        std::string first = request.transcript.empty() ? "" : request.transcript.front().text;
        std::string last = request.transcript.empty() ? "" : request.transcript.back().text;
        return "[mock-describe v1] title=" + request.title + "; first=" + first +
               "; last=" + last + "; frames=" + std::to_string(request.frame_paths.size());
    }

    // Optional response script; "<fail>" entries throw a retryable error.
    std::deque<std::string> script;
    int calls = 0;
};

// Hash-of-token-counts vector: tokens are lowercased ASCII word runs plus
// individual CJK characters; each token increments values[fnv1a64(token) % dim].
// Same text always embeds identically; similar texts land near each other.
class MockEmbedProvider : public EmbedProvider {
public:
    explicit MockEmbedProvider(std::size_t dim = 16) : dim_(dim) {}

    std::string provider_id() const override { return "mock-embed-v1"; }

    Embedding embed(const std::string& text) override {
        ++calls;
        if (fail_texts.count(text)) throw ProviderError("scripted embed failure", true);
        Embedding e;
        e.provider_id = provider_id();
        e.values.assign(dim_, 0.0);
        for (const auto& token : tokenize(text))
            e.values[fnv1a64(token) % dim_] += 1.0;
        return e;
    }

    static std::vector<std::string> tokenize(const std::string& text) {
        std::vector<std::string> tokens;
        std::string word;
        auto flush = [&] {
            if (!word.empty()) tokens.push_back(word);
            word.clear();
        };
        for (char32_t cp : decode_utf8(text)) {
            if ((cp >= U'a' && cp <= U'z') || (cp >= U'0' && cp <= U'9')) {
                word += static_cast<char>(cp);
            } else if (cp >= U'A' && cp <= U'Z') {
                word += static_cast<char>(cp - U'A' + U'a');
            } else if (cp >= 0x3400 && cp <= 0x9FFF) {
                flush();
                tokens.push_back(encode_utf8({cp}));
            } else {
                flush();
            }
        }
        flush();
        return tokens;
    }

    std::set<std::string> fail_texts;
    int calls = 0;

private:
    std::size_t dim_;
};

// Scripted responses first; afterwards a deterministic template derived from
// the prompt fingerprint.
class MockGenerateProvider : public GenerateProvider {
public:
    std::string provider_id() const override { return "mock-generate-v1"; }

    std::string generate(const std::string& prompt, Language language) override {
        ++calls;
        last_prompt = prompt;
        if (!script.empty()) {
            std::string next = script.front();
            script.pop_front();
            if (next == "<fail>") throw ProviderError("scripted generate failure", true);
            return next;
        }
        std::string fp = fingerprint(prompt).substr(0, 8);
        if (language == Language::zh) return "模拟评论" + fp + "，有点意思。";
        return "mock comment " + fp + ", quite a moment.";
    }

    std::deque<std::string> script;  // "<fail>" entries throw
    std::string last_prompt;
    int calls = 0;
};

// Keyword lexicon, binary output. Ties and neutral text read positive, so the
// mock never refuses.
class LexiconSentimentProvider : public SentimentProvider {
public:
    std::string provider_id() const override { return "mock-sentiment-v1"; }

    Sentiment classify(const std::string& text, Language) override {
        ++calls;
        static const std::vector<std::string> positive = {
            "good",  "great", "love", "funny", "best", "nice", "laugh", "happy",
            "haha",  "cool",  "wow",  "好",    "笑",   "赞",   "爱",    "棒",
            "妙",    "喜欢",  "开心", "哈哈",
        };
        static const std::vector<std::string> negative = {
            "bad",  "hate", "awful", "boring", "worst", "terrible", "sad",  "cringe",
            "ugly", "差",   "烂",    "讨厌",   "无聊",  "哭",       "失望", "糟",
        };
        std::string lower;
        lower.reserve(text.size());
        for (char c : text)
            lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        long long score = 0;
        for (const auto& w : positive)
            if (lower.find(w) != std::string::npos) ++score;
        for (const auto& w : negative)
            if (lower.find(w) != std::string::npos) --score;
        return score >= 0 ? Sentiment::positive : Sentiment::negative;
    }

    int calls = 0;
};

}  // namespace stylecast
