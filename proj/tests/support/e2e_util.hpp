#pragma once

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "stylecast/pipeline.hpp"

// Helpers for tests that drive the pipeline against the bundled end-to-end
// fixtures. The fixture "videos" are plain JSON signal series, so the decoder
// commands are just cat/cp and no codec is involved.

namespace stylecast::test {

inline fs::path e2e_root() {
    return fs::path(STYLECAST_SOURCE_DIR) / "tests" / "fixtures" / "e2e";
}

// Stable path wiped per call; unlike TempDir it survives the test for
// debugging and reuse within a run.
inline fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "stylecast-e2e" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

inline PipelineConfig mock_config(const fs::path& workdir) {
    PipelineConfig config;
    config.workdir = workdir;
    config.decoder.series_command = "cat {input}";
    config.decoder.frame_command = "cp {input} {output}";
    config.platform.fixture_root = e2e_root() / "platform";
    config.selection.seed = config.seed;
    return config;
}

// The platform fixtures carry unlabeled comments, as a real dump would. The
// curated corpus needs labels on each one, so this stands in for the human
// annotation pass. Labeling only unlabeled comments keeps it idempotent.
inline void annotate_workdir_comments(const fs::path& workdir) {
    for (const auto& dirent : fs::directory_iterator(workdir)) {
        if (!dirent.is_directory()) continue;
        fs::path p = dirent.path() / "comments.json";
        if (!fs::exists(p)) continue;
        json out = json::array();
        std::size_t i = 0;
        for (const auto& cj : read_json_file(p)) {
            CommentRecord c = comment_from_json(cj);
            if (!c.style_label)
                c = annotate_style(c, kAllStyles[i % kAllStyles.size()], "fixture-annotator");
            out.push_back(to_json(c));
            ++i;
        }
        write_json_file(p, out);
    }
}

inline void build_corpus(const fs::path& workdir, const fs::path& dataset_dir) {
    PipelineConfig config = mock_config(workdir);
    config.dataset_dir = dataset_dir;
    Pipeline pipeline(config);
    auto check = [](const StageReport& report) {
        if (!report.ok())
            throw std::runtime_error("corpus build failed in stage " + report.stage);
    };
    check(pipeline.ingest(e2e_root() / "corpus_manifest.json"));
    annotate_workdir_comments(workdir);
    check(pipeline.preprocess());
    check(pipeline.describe());
    check(pipeline.dataset_build(false, 1));
}

struct CorpusWorld {
    fs::path workdir;
    fs::path dataset_dir;
};

// Built once per test binary; users must leave both directories untouched.
inline const CorpusWorld& shared_corpus() {
    static CorpusWorld world = [] {
        CorpusWorld w{fresh_dir("shared-corpus"), fresh_dir("shared-dataset")};
        build_corpus(w.workdir, w.dataset_dir);
        return w;
    }();
    return world;
}

inline std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    if (!fs::exists(root)) return out;
    for (const auto& dirent : fs::recursive_directory_iterator(root)) {
        if (!dirent.is_regular_file()) continue;
        out[fs::relative(dirent.path(), root).generic_string()] =
            read_text_file(dirent.path());
    }
    return out;
}

inline std::vector<json> read_jsonl(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<json> out;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(json::parse(line));
    return out;
}

inline void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    for (const auto& line : lines) out << line << "\n";
}

}  // namespace stylecast::test
