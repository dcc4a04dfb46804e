#pragma once

#include <map>
#include <string>
#include <vector>

#include "stylecast/dataset.hpp"
#include "stylecast/hash.hpp"
#include "stylecast/providers.hpp"

namespace stylecast {

inline constexpr const char* kGenerateInstructionVersion = "generate_v1";

// Versioned instruction texts. Copies live under prompts/<id>.txt for
// audit; a test keeps file and constant in sync.
inline const std::map<std::string, std::string>& instruction_registry() {
    static const std::map<std::string, std::string> registry = {
        {"generate_v1",
         "You are an expert short-video commenter.\n"
         "Imitate the STRUCTURE of the style template: its sentence rhythm, punctuation\n"
         "habits, emoji usage, interjections, and overall length. Do not copy its words,\n"
         "phrases, or subject matter. Your comment must be semantically original and\n"
         "grounded only in the video description below.\n"},
    };
    return registry;
}

struct GenerationRequest {
    std::string video_description;
    CommentRecord style_template;
    StyleLabel style = StyleLabel::plain_humor;
    Language language = Language::en;
    std::vector<FewShotPair> few_shot;
    std::string instruction_version = kGenerateInstructionVersion;
};

struct PromptDocument {
    std::string text;
    std::string fingerprint;
    bool zero_shot = false;  // no few-shot examples were available
};

// Renders the full style-conditioned prompt. Pure: identical requests give
// identical bytes and fingerprints. Empty few_shot produces the documented
// zero-shot variant rather than failing.
inline PromptDocument build_prompt(const GenerationRequest& request) {
    if (request.video_description.empty()) throw Error("empty video description");
    if (request.style_template.text.empty()) throw Error("empty style template");
    auto it = instruction_registry().find(request.instruction_version);
    if (it == instruction_registry().end())
        throw Error("unknown instruction version: " + request.instruction_version);

    PromptDocument doc;
    doc.zero_shot = request.few_shot.empty();

    std::string language_name = request.language == Language::zh ? "Chinese" : "English";
    std::string out;
    out += "[instruction " + request.instruction_version + "]\n";
    out += it->second;
    out += "Write the comment in " + language_name + ".\n";
    out += "\n[STYLE:" + to_string(request.style) + "]\n";

    if (doc.zero_shot) {
        out += "\n[no style examples available; rely on the style template's structure]\n";
    } else {
        for (std::size_t i = 0; i < request.few_shot.size(); ++i) {
            out += "\n[example " + std::to_string(i + 1) + "]\n";
            out += "video: " + request.few_shot[i].description + "\n";
            out += "comment: " + request.few_shot[i].comment + "\n";
        }
    }

    out += "\n[style template | structure reference only, never reuse its content]\n";
    out += request.style_template.text + "\n";
    out += "\n[video description]\n";
    out += request.video_description + "\n";
    out += "\n[reply with the comment text only]\n";

    doc.text = std::move(out);
    doc.fingerprint = stylecast::fingerprint(doc.text);
    return doc;
}

}  // namespace stylecast
