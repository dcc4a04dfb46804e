#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stylecast/dataset.hpp"
#include "stylecast/describe.hpp"
#include "stylecast/providers.hpp"

namespace stylecast {

inline double cosine_similarity(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim())
        throw Error("embedding dim mismatch: " + std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()));
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (!std::isfinite(a.values[i]) || !std::isfinite(b.values[i]))
            throw Error("non-finite embedding value");
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) throw Error("degenerate embedding");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

struct IndexedDescription {
    std::string video_id;
    VideoCategory category = VideoCategory::other;
    Embedding embedding;
};

struct DatasetEmbeddingIndex {
    std::vector<IndexedDescription> entries;
    std::string provider_id;
    // video_ids whose embedding call failed; any entry here makes the index
    // unusable for classification.
    std::vector<std::string> failed_video_ids;

    bool complete() const { return failed_video_ids.empty(); }
};

struct CategoryDecision {
    VideoCategory category = VideoCategory::other;
    std::map<VideoCategory, double> per_category_scores;  // summed similarities
    double margin = 0.0;                                  // best sum - second best sum
    bool fallback_applied = false;
};

struct ClassifyParams {
    double fallback_threshold = 0.15;  // on the argmax category's mean similarity
};

// Cache layout: <cache_dir>/<fnv1a64(provider_id + '\n' + text)>.json holding
// {"provider_id", "text_hash", "values"}.
inline fs::path embedding_cache_path(const fs::path& cache_dir, const std::string& provider_id,
                                     const std::string& text) {
    return cache_dir / (fingerprint(provider_id + "\n" + text) + ".json");
}

inline std::optional<Embedding> load_cached_embedding(const fs::path& cache_dir,
                                                      const std::string& provider_id,
                                                      const std::string& text) {
    fs::path p = embedding_cache_path(cache_dir, provider_id, text);
    if (!fs::exists(p)) return std::nullopt;
    json j = read_json_file(p);
    Embedding e;
    e.provider_id = j.value("provider_id", provider_id);
    e.values = j.at("values").get<std::vector<double>>();
    return e;
}

inline void store_cached_embedding(const fs::path& cache_dir, const std::string& provider_id,
                                   const std::string& text, const Embedding& e) {
    fs::create_directories(cache_dir);
    write_json_file(embedding_cache_path(cache_dir, provider_id, text),
                    json{{"provider_id", provider_id},
                         {"text_hash", fingerprint(text)},
                         {"values", e.values}});
}

// Embeds every dataset description, consulting the content-addressed cache
// first. Provider failures do not abort the build; they mark the index
// partial, and classify_video refuses partial indexes.
inline DatasetEmbeddingIndex build_embedding_index(const DatasetBundle& dataset,
                                                   EmbedProvider& provider,
                                                   const fs::path& cache_dir) {
    if (dataset.videos.empty()) throw Error("empty dataset");
    DatasetEmbeddingIndex index;
    index.provider_id = provider.provider_id();
    for (const auto& v : dataset.videos) {
        IndexedDescription entry;
        entry.video_id = v.video_id;
        entry.category = v.category;
        if (auto cached = load_cached_embedding(cache_dir, index.provider_id,
                                                v.semantic_description)) {
            entry.embedding = std::move(*cached);
        } else {
            try {
                entry.embedding = provider.embed(v.semantic_description);
                store_cached_embedding(cache_dir, index.provider_id, v.semantic_description,
                                       entry.embedding);
            } catch (const ProviderError&) {
                index.failed_video_ids.push_back(v.video_id);
                continue;
            }
        }
        index.entries.push_back(std::move(entry));
    }
    return index;
}

// Sum of similarities per category ranks; the winner additionally needs its
// mean similarity at or above the fallback threshold, else `other`.
inline CategoryDecision classify_video(const SemanticDescription& target,
                                       const DatasetEmbeddingIndex& index,
                                       EmbedProvider& provider,
                                       const ClassifyParams& params = {}) {
    if (index.entries.empty()) throw Error("empty embedding index");
    if (!index.complete())
        throw Error("embedding index is partial (" +
                    std::to_string(index.failed_video_ids.size()) +
                    " failed entries); rebuild before classifying");

    Embedding target_vec = provider.embed(target.text);

    CategoryDecision decision;
    std::map<VideoCategory, int> counts;
    for (VideoCategory c : kCuratedCategories) {
        decision.per_category_scores[c] = 0.0;
        counts[c] = 0;
    }
    for (const auto& entry : index.entries) {
        double sim = cosine_similarity(target_vec, entry.embedding);
        decision.per_category_scores[entry.category] += sim;
        counts[entry.category] += 1;
    }

    VideoCategory best = kCuratedCategories[0];
    double best_sum = decision.per_category_scores[best];
    double second_sum = -std::numeric_limits<double>::infinity();
    for (VideoCategory c : kCuratedCategories) {
        double sum = decision.per_category_scores[c];
        if (sum > best_sum) {
            second_sum = best_sum;
            best = c;
            best_sum = sum;
        } else if (c != best && sum > second_sum) {
            second_sum = sum;
        }
    }
    decision.margin = std::isinf(second_sum) ? 0.0 : best_sum - second_sum;

    double mean = counts[best] > 0 ? best_sum / counts[best] : 0.0;
    if (mean < params.fallback_threshold) {
        decision.category = VideoCategory::other;
        decision.fallback_applied = true;
    } else {
        decision.category = best;
    }
    return decision;
}

}  // namespace stylecast
