#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stylecast/error.hpp"
#include "stylecast/json_util.hpp"
#include "stylecast/rng.hpp"

namespace stylecast {

struct QuestionnaireVideo {
    std::string video_id;
    std::string title;
};

struct QuestionnaireOption {
    std::string letter;
    std::string comment_text;
};

struct QuestionnaireItem {
    std::string item_id;
    std::string video_id;
    std::string title;
    std::vector<QuestionnaireOption> options;
};

struct QuestionnairePacket {
    std::uint64_t seed = 0;
    std::vector<QuestionnaireItem> items;
    // item_id -> letter -> system name; kept out of the respondent file.
    std::map<std::string, std::map<std::string, std::string>> answer_key;
};

// Builds one item per video with every system's comment shuffled behind
// letters. The respondent-facing items never mention system names.
inline QuestionnairePacket export_questionnaire(
    const std::vector<QuestionnaireVideo>& videos,
    const std::map<std::string, std::map<std::string, std::string>>& per_system_comments,
    std::uint64_t seed) {
    if (videos.empty()) throw Error("no videos to export");
    if (per_system_comments.empty()) throw Error("no systems to export");
    if (per_system_comments.size() > 26) throw Error("too many systems for letter labels");

    QuestionnairePacket packet;
    packet.seed = seed;
    std::mt19937_64 rng(seed);
    std::size_t item_number = 1;
    for (const auto& video : videos) {
        QuestionnaireItem item;
        item.item_id = "q" + std::to_string(item_number++);
        item.video_id = video.video_id;
        item.title = video.title;

        std::vector<std::pair<std::string, std::string>> entries;  // system, comment
        for (const auto& [system, by_video] : per_system_comments) {
            auto it = by_video.find(video.video_id);
            if (it == by_video.end())
                throw Error("missing output from system '" + system + "' for video: " +
                            video.video_id);
            entries.emplace_back(system, it->second);
        }
        deterministic_shuffle(entries, rng);

        for (std::size_t i = 0; i < entries.size(); ++i) {
            std::string letter(1, static_cast<char>('A' + i));
            item.options.push_back({letter, entries[i].second});
            packet.answer_key[item.item_id][letter] = entries[i].first;
        }
        packet.items.push_back(std::move(item));
    }
    return packet;
}

inline json respondent_json(const QuestionnairePacket& packet) {
    json items = json::array();
    for (const auto& item : packet.items) {
        json options = json::array();
        for (const auto& o : item.options)
            options.push_back(json{{"letter", o.letter}, {"comment", o.comment_text}});
        items.push_back(json{{"item_id", item.item_id},
                             {"video_id", item.video_id},
                             {"title", item.title},
                             {"options", options}});
    }
    return json{{"instructions",
                 "For each video, pick the comment you like best and record its letter."},
                {"items", items}};
}

inline json answer_key_json(const QuestionnairePacket& packet) {
    json items = json::object();
    for (const auto& [item_id, assignments] : packet.answer_key) {
        json m = json::object();
        for (const auto& [letter, system] : assignments) m[letter] = system;
        items[item_id] = m;
    }
    return json{{"seed", packet.seed}, {"items", items}};
}

inline void write_questionnaire(const QuestionnairePacket& packet, const fs::path& dir) {
    fs::create_directories(dir);
    write_json_file(dir / "questionnaire.json", respondent_json(packet));
    write_json_file(dir / "answer_key.json", answer_key_json(packet));
}

struct TallyResult {
    std::map<std::string, std::size_t> votes;
    std::map<std::string, double> percentages;
    std::size_t total = 0;
};

// Ingests filled responses as CSV lines "item_id,letter" (an optional
// "item,choice" header is skipped) and unblinds them with the answer key.
inline TallyResult tally_responses(const QuestionnairePacket& packet, const std::string& csv) {
    TallyResult result;
    for (const auto& [item_id, assignments] : packet.answer_key)
        for (const auto& [letter, system] : assignments) result.votes[system];  // zero-init

    std::istringstream in(csv);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
        if (trimmed.empty()) continue;
        auto comma = trimmed.find(',');
        if (comma == std::string::npos) throw Error("malformed response line: " + line);
        std::string item_id = trimmed.substr(0, comma);
        std::string letter = trimmed.substr(comma + 1);
        item_id.erase(item_id.find_last_not_of(" \t") + 1);
        letter.erase(0, letter.find_first_not_of(" \t"));
        letter.erase(letter.find_last_not_of(" \t") + 1);
        if (first && item_id == "item") {
            first = false;
            continue;
        }
        first = false;
        auto item_it = packet.answer_key.find(item_id);
        if (item_it == packet.answer_key.end()) throw Error("unknown item: " + item_id);
        for (auto& ch : letter) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        auto letter_it = item_it->second.find(letter);
        if (letter_it == item_it->second.end())
            throw Error("unknown option '" + letter + "' for item: " + item_id);
        ++result.votes[letter_it->second];
        ++result.total;
    }
    if (result.total == 0) throw Error("no responses to tally");
    for (const auto& [system, count] : result.votes)
        result.percentages[system] =
            100.0 * static_cast<double>(count) / static_cast<double>(result.total);
    return result;
}

inline QuestionnairePacket load_answer_key(const fs::path& path) {
    json doc = read_json_file(path);
    QuestionnairePacket packet;
    packet.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& [item_id, assignments] : doc.at("items").items())
        for (const auto& [letter, system] : assignments.items())
            packet.answer_key[item_id][letter] = system.get<std::string>();
    return packet;
}

}  // namespace stylecast
