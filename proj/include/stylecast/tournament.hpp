#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "stylecast/rng.hpp"
#include "stylecast/style_score.hpp"

namespace stylecast {

struct GroupRange {
    std::size_t begin = 0;  // pool indices [begin, end)
    std::size_t end = 0;
};

struct TournamentTrace {
    std::vector<GroupRange> groups;
    std::vector<std::size_t> group_winner_indices;  // pool index per group
    std::size_t winner_index = 0;                   // pool index of the template
    bool subsampled = false;
    std::vector<std::string> notes;
};

struct TournamentResult {
    CommentRecord style_template;
    std::vector<CommentRecord> group_winners;
    std::vector<StyleScore> score_table;  // parallel to the pool
    std::vector<CommentRecord> pool;      // post-subsample, order defines indices
    TournamentTrace trace;
};

// Keeps the pool_size highest-liked comments. Ties on like_count are ordered
// by a seed-keyed shuffle so equal-liked comments rotate across seeds, while
// the sort itself stays stable.
inline std::vector<CommentRecord> subsample_pool(std::vector<CommentRecord> pool,
                                                 std::size_t pool_size, std::uint64_t seed) {
    if (pool.size() <= pool_size) return pool;
    std::mt19937_64 rng(seed);
    deterministic_shuffle(pool, rng);
    std::stable_sort(pool.begin(), pool.end(),
                     [](const CommentRecord& a, const CommentRecord& b) {
                         return a.like_count > b.like_count;
                     });
    pool.resize(pool_size);
    return pool;
}

// Contiguous chunks of ceil(pool_size/group_count) comments; the last chunk
// may be short. A 23-comment pool under defaults partitions 10/10/3.
inline std::vector<GroupRange> partition_groups(std::size_t n, const SelectionParams& params) {
    std::size_t capacity = (params.pool_size + params.group_count - 1) / params.group_count;
    std::vector<GroupRange> groups;
    for (std::size_t begin = 0; begin < n; begin += capacity)
        groups.push_back({begin, std::min(begin + capacity, n)});
    return groups;
}

// Two-round selection: argmax inside each contiguous group, then argmax over
// the group winners. All ties resolve to the lowest pool index.
inline TournamentResult run_tournament(const std::vector<CommentRecord>& category_pool,
                                       const VideoContext& video, const SelectionParams& params,
                                       StyleScorer& scorer) {
    validate(params);
    if (category_pool.empty()) throw Error("empty comment pool");

    TournamentResult result;
    result.trace.subsampled = category_pool.size() > params.pool_size;
    result.pool = subsample_pool(category_pool, params.pool_size, params.seed);

    result.score_table.reserve(result.pool.size());
    for (const auto& comment : result.pool)
        result.score_table.push_back(scorer.score(comment, video, params));
    result.trace.notes = scorer.drain_notes();

    result.trace.groups = partition_groups(result.pool.size(), params);
    for (const GroupRange& g : result.trace.groups) {
        std::size_t best = g.begin;
        for (std::size_t i = g.begin + 1; i < g.end; ++i)
            if (result.score_table[i].total > result.score_table[best].total) best = i;
        result.trace.group_winner_indices.push_back(best);
        result.group_winners.push_back(result.pool[best]);
    }

    std::size_t champion = result.trace.group_winner_indices.front();
    for (std::size_t idx : result.trace.group_winner_indices)
        if (result.score_table[idx].total > result.score_table[champion].total) champion = idx;
    result.trace.winner_index = champion;
    result.style_template = result.pool[champion];
    return result;
}

inline json to_json(const StyleScore& s) {
    return json{{"total", s.total},
                {"s_struct", s.s_struct},
                {"s_tone", s.s_tone},
                {"s_length", s.s_length}};
}

inline json to_json(const TournamentResult& r) {
    json groups = json::array();
    for (const auto& g : r.trace.groups) groups.push_back({{"begin", g.begin}, {"end", g.end}});
    json scores = json::array();
    for (std::size_t i = 0; i < r.pool.size(); ++i) {
        json row = to_json(r.score_table[i]);
        row["pool_index"] = i;
        row["comment_id"] = r.pool[i].comment_id;
        scores.push_back(row);
    }
    json winners = json::array();
    for (std::size_t idx : r.trace.group_winner_indices) winners.push_back(idx);
    return json{{"template", to_json(r.style_template)},
                {"winner_index", r.trace.winner_index},
                {"group_winner_indices", winners},
                {"groups", groups},
                {"score_table", scores},
                {"subsampled", r.trace.subsampled},
                {"notes", r.trace.notes}};
}

inline void save_selection(const fs::path& path, const TournamentResult& r) {
    write_json_file(path, to_json(r));
}

}  // namespace stylecast
