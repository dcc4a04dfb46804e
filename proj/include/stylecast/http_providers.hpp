#pragma once

#include <cstdlib>
#include <string>

#include "httplib.h"
#include "stylecast/describe.hpp"
#include "stylecast/providers.hpp"

namespace stylecast {

// One remote endpoint binding. The wire contract (documented in
// docs/providers.md): chat-style calls POST {model, messages} and the response
// carries a single "text" field; embedding calls POST {model, input} and the
// response carries "values". Transient failures (transport, 429, 5xx,
// malformed body) surface as retryable provider errors; the calling stage owns
// the retry loop.
struct HttpProviderConfig {
    std::string base_url;  // e.g. "http://127.0.0.1:8080"
    std::string path = "/v1/complete";
    std::string model;
    std::string api_key_env;  // env var holding the bearer token; empty = no auth
    double timeout_s = 30.0;
};

namespace detail {

class HttpJsonClient {
public:
    explicit HttpJsonClient(HttpProviderConfig config) : config_(std::move(config)) {
        if (config_.base_url.rfind("https://", 0) == 0)
            throw Error("https endpoints need an SSL build; point base_url at an http gateway");
        if (config_.base_url.empty()) throw Error("provider base_url is empty");
    }

    json post(const json& body) const {
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(static_cast<time_t>(config_.timeout_s), 0);
        client.set_read_timeout(static_cast<time_t>(config_.timeout_s), 0);
        httplib::Headers headers;
        if (!config_.api_key_env.empty()) {
            const char* key = std::getenv(config_.api_key_env.c_str());
            if (!key || !*key)
                throw ProviderError("missing API key env: " + config_.api_key_env, false);
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
        httplib::Result res =
            client.Post(config_.path, headers, body.dump(), "application/json");
        if (!res)
            throw ProviderError("provider transport error: " + httplib::to_string(res.error()),
                                true);
        if (res->status == 429 || res->status >= 500)
            throw ProviderError("provider unavailable (status " + std::to_string(res->status) +
                                    ")",
                                true);
        if (res->status < 200 || res->status >= 300)
            throw ProviderError("provider rejected request (status " +
                                    std::to_string(res->status) + "): " + res->body,
                                false);
        try {
            return json::parse(res->body);
        } catch (const json::parse_error&) {
            throw ProviderError("provider returned malformed JSON", true);
        }
    }

    std::string post_for_text(const json& body) const {
        json doc = post(body);
        if (!doc.contains("text") || !doc["text"].is_string())
            throw ProviderError("provider response missing text field", true);
        return doc["text"].get<std::string>();
    }

    const HttpProviderConfig& config() const { return config_; }

private:
    HttpProviderConfig config_;
};

inline json chat_body(const std::string& model, const json& content) {
    return json{{"model", model},
                {"messages", json::array({json{{"role", "user"}, {"content", content}}})}};
}

inline json text_part(const std::string& text) {
    return json{{"type", "text"}, {"text", text}};
}

}  // namespace detail

class HttpDescribeProvider : public DescribeProvider {
public:
    explicit HttpDescribeProvider(HttpProviderConfig config) : client_(std::move(config)) {}

    std::string provider_id() const override {
        return "http-describe:" + client_.config().model;
    }

    std::string describe(const DescribeRequest& request) override {
        std::string text = describe_instruction();
        text += "\n\n[title]\n" + request.title;
        if (!request.description_text.empty())
            text += "\n\n[uploader description]\n" + request.description_text;
        text += "\n\n[duration] " + std::to_string(request.duration_s) + "s";
        text += "\n\n[transcript]";
        for (const auto& seg : request.transcript)
            text += "\n" + std::to_string(seg.start_s) + "-" + std::to_string(seg.end_s) + ": " +
                    seg.text;
        json content = json::array({detail::text_part(text)});
        for (const auto& frame : request.frame_paths)
            content.push_back(json{{"type", "image"}, {"path", frame}});
        return client_.post_for_text(detail::chat_body(client_.config().model, content));
    }

private:
    detail::HttpJsonClient client_;
};

class HttpGenerateProvider : public GenerateProvider {
public:
    explicit HttpGenerateProvider(HttpProviderConfig config) : client_(std::move(config)) {}

    std::string provider_id() const override {
        return "http-generate:" + client_.config().model;
    }

    std::string generate(const std::string& prompt, Language) override {
        json content = json::array({detail::text_part(prompt)});
        return client_.post_for_text(detail::chat_body(client_.config().model, content));
    }

private:
    detail::HttpJsonClient client_;
};

class HttpSentimentProvider : public SentimentProvider {
public:
    explicit HttpSentimentProvider(HttpProviderConfig config) : client_(std::move(config)) {}

    std::string provider_id() const override {
        return "http-sentiment:" + client_.config().model;
    }

    Sentiment classify(const std::string& text, Language language) override {
        std::string ask = "Classify the overall sentiment of the following ";
        ask += language == Language::zh ? "Chinese" : "English";
        ask += " text as positive or negative. Reply with exactly one word.\n\n";
        ask += text;
        json content = json::array({detail::text_part(ask)});
        std::string reply = client_.post_for_text(detail::chat_body(client_.config().model,
                                                                    content));
        std::string lower;
        for (char c : reply)
            lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        bool pos = lower.find("positive") != std::string::npos;
        bool neg = lower.find("negative") != std::string::npos;
        if (pos == neg)
            throw ProviderError("sentiment response unparsable: " + reply, true);
        return pos ? Sentiment::positive : Sentiment::negative;
    }

private:
    detail::HttpJsonClient client_;
};

class HttpEmbedProvider : public EmbedProvider {
public:
    explicit HttpEmbedProvider(HttpProviderConfig config) : client_(std::move(config)) {}

    std::string provider_id() const override { return "http-embed:" + client_.config().model; }

    Embedding embed(const std::string& text) override {
        json doc = client_.post(json{{"model", client_.config().model}, {"input", text}});
        if (!doc.contains("values") || !doc["values"].is_array())
            throw ProviderError("embed response missing values array", true);
        Embedding e;
        e.provider_id = provider_id();
        for (const auto& v : doc["values"]) e.values.push_back(v.get<double>());
        if (e.values.empty()) throw ProviderError("embed response empty", true);
        return e;
    }

private:
    detail::HttpJsonClient client_;
};

}  // namespace stylecast
