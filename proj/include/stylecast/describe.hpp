#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "stylecast/providers.hpp"

namespace stylecast {

inline constexpr const char* kDescribeInstructionVersion = "describe_v1";

// Instruction text sent to real describe backends alongside the structured
// request; bundled verbatim under prompts/ for inspection.
inline std::string describe_instruction() {
    return "You are given a short video's metadata, transcript segments, and sampled frames.\n"
           "Write one cohesive paragraph describing what happens in the video: the setting,\n"
           "the people or animals involved, the key actions in order, and the comedic or\n"
           "emotional beats. Mention on-screen text if any. Do not speculate beyond the\n"
           "provided material and do not address the viewer.\n";
}

struct SemanticDescription {
    std::string text;
    std::string provider_id;
    std::string prompt_fingerprint;
};

// Sorts by start, truncates each segment at the next start, drops segments
// that end up empty. Result is sorted and disjoint.
inline std::vector<TranscriptSegment> normalize_transcript(std::vector<TranscriptSegment> segments) {
    std::stable_sort(segments.begin(), segments.end(),
                     [](const TranscriptSegment& a, const TranscriptSegment& b) {
                         return a.start_s < b.start_s;
                     });
    for (std::size_t i = 0; i + 1 < segments.size(); ++i)
        segments[i].end_s = std::min(segments[i].end_s, segments[i + 1].start_s);
    std::vector<TranscriptSegment> out;
    for (auto& seg : segments)
        if (seg.end_s > seg.start_s) out.push_back(std::move(seg));
    return out;
}

// Attaches to each segment the indices of frames whose timestamps land in
// [start, end). Frame times come from the extraction schedule.
inline void link_frames(std::vector<TranscriptSegment>& segments,
                        const std::vector<double>& frame_times_s) {
    for (auto& seg : segments) {
        seg.linked_frame_indices.clear();
        for (std::size_t i = 0; i < frame_times_s.size(); ++i)
            if (frame_times_s[i] >= seg.start_s && frame_times_s[i] < seg.end_s)
                seg.linked_frame_indices.push_back(i);
    }
}

inline std::vector<TranscriptSegment> transcribe_audio(const std::string& media_path,
                                                       TranscribeProvider& provider,
                                                       const std::vector<double>& frame_times_s = {}) {
    auto segments = normalize_transcript(provider.transcribe(media_path));
    link_frames(segments, frame_times_s);
    return segments;
}

// Uniform subsample keeping order; first and last survive whenever the cap
// allows two or more frames. Index k maps to floor(k * (n-1) / (m-1)).
inline std::vector<std::string> subsample_frames(const std::vector<std::string>& frames,
                                                 std::size_t max_frames) {
    if (frames.size() <= max_frames) return frames;
    std::vector<std::string> out;
    if (max_frames == 0) return out;
    if (max_frames == 1) {
        out.push_back(frames.front());
        return out;
    }
    std::size_t n = frames.size();
    for (std::size_t k = 0; k < max_frames; ++k)
        out.push_back(frames[k * (n - 1) / (max_frames - 1)]);
    return out;
}

struct DescribeParams {
    int max_retries = 2;  // retryable provider failures before giving up
};

inline SemanticDescription describe_video(DescribeRequest request, DescribeProvider& provider,
                                          const DescribeParams& params = {}) {
    if (request.transcript.empty() && request.frame_paths.empty())
        throw Error("describe request needs a transcript or frames");
    if (request.max_frames < 1) throw Error("max_frames must be >= 1");

    request.frame_paths = subsample_frames(request.frame_paths, request.max_frames);
    std::string fp = fingerprint(std::string(kDescribeInstructionVersion) + "\n" +
                                 dump_json(request.to_json()));

    std::string last_error;
    for (int attempt = 0; attempt <= params.max_retries; ++attempt) {
        try {
            std::string text = provider.describe(request);
            if (text.empty()) {
                last_error = "provider returned empty description";
                continue;
            }
            SemanticDescription d;
            d.text = std::move(text);
            d.provider_id = provider.provider_id();
            d.prompt_fingerprint = fp;
            return d;
        } catch (const ProviderError& e) {
            if (!e.retryable()) throw;
            last_error = e.what();
        }
    }
    throw ProviderError("describe failed after " + std::to_string(params.max_retries + 1) +
                            " attempts: " + last_error + " (fingerprint " + fp + ")",
                        false);
}

}  // namespace stylecast
