#pragma once

#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stylecast/pipeline.hpp"

namespace stylecast {

// Process exit codes; see ExitCode for the mapping rationale.
inline constexpr int kExitOk = static_cast<int>(ExitCode::ok);
inline constexpr int kExitUsage = static_cast<int>(ExitCode::usage);
inline constexpr int kExitStageFailure = static_cast<int>(ExitCode::stage);
inline constexpr int kExitProviderFailure = static_cast<int>(ExitCode::provider);

namespace detail {

inline void print_report(std::ostream& out, const StageReport& report, bool dry_run) {
    out << "[" << report.stage << "]";
    if (dry_run) {
        out << " planned=" << report.count(StageStatus::planned);
    } else {
        out << " done=" << report.count(StageStatus::done)
            << " skipped=" << report.count(StageStatus::skipped)
            << " failed=" << report.count(StageStatus::failed);
    }
    out << "\n";
    for (const auto& o : report.outcomes) {
        out << "  " << o.id << ": ";
        if (o.status == StageStatus::failed) out << "FAILED: ";
        out << o.detail << "\n";
    }
}

inline int report_exit(const StageReport& report) {
    if (report.ok()) return kExitOk;
    return report.had_provider_failure() ? kExitProviderFailure : kExitStageFailure;
}

inline int worst_exit(int a, int b) { return std::max(a, b); }

inline void print_aggregate(std::ostream& out, const json& aggregate) {
    out << std::left << std::setw(16) << "system" << std::right << std::setw(12)
        << "originality" << std::setw(11) << "relevance" << std::setw(8) << "style"
        << std::setw(8) << "total" << std::setw(7) << "n" << "\n";
    out << std::fixed << std::setprecision(2);
    for (const auto& [system, row] : aggregate.items())
        out << std::left << std::setw(16) << system << std::right << std::setw(12)
            << row.value("originality", 0.0) << std::setw(11) << row.value("relevance", 0.0)
            << std::setw(8) << row.value("style", 0.0) << std::setw(8)
            << row.value("total", 0.0) << std::setw(7)
            << row.value("count", std::size_t{0}) << "\n";
    out.unsetf(std::ios::floatfield);
    out << std::setprecision(6);
}

inline std::optional<StyleLabel> parse_style_flag(const std::string& text) {
    if (text == "auto") return std::nullopt;
    auto label = style_from_string(text);
    if (!label) throw UsageError("unknown style: " + text);
    return label;
}

}  // namespace detail

// Parses arguments, loads configuration, and dispatches one subcommand.
// Streams are injected so tests can run the CLI in-process.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"stylecast: highlight-aware short-video comment pipeline"};
    app.require_subcommand(1);

    std::string config_path = "stylecast.toml";
    std::string workdir_override;
    std::string dataset_override;
    std::optional<int> jobs_override;
    std::optional<std::uint64_t> seed_override;
    RunOptions opts;

    app.add_option("--config", config_path, "TOML config file")->capture_default_str();
    app.add_option("--workdir", workdir_override, "override the configured workdir");
    app.add_option("--dataset-dir", dataset_override, "override the curated dataset directory");
    app.add_option("--jobs", jobs_override, "worker pool size")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed_override, "override the configured seed");
    app.add_flag("--force", opts.force, "redo completed work");
    app.add_flag("--dry-run", opts.dry_run, "print the plan, touch nothing");

    std::string manifest;
    std::vector<std::string> ids;
    std::string style_text = "auto";
    bool per_style = false;
    std::string candidates;
    std::string bench;
    std::string train;
    bool check_balance = false;
    std::optional<int> per_cell;
    std::string answer_key;
    std::string responses;

    CLI::App* cmd_ingest = app.add_subcommand("ingest", "fetch manifest videos into the workdir");
    cmd_ingest->add_option("manifest", manifest, "seed manifest JSON")->required();

    CLI::App* cmd_preprocess =
        app.add_subcommand("preprocess", "decode signals, detect highlights, extract frames");
    cmd_preprocess->add_option("ids", ids, "video ids (default: all)");

    CLI::App* cmd_describe =
        app.add_subcommand("describe", "transcribe and produce semantic descriptions");
    cmd_describe->add_option("ids", ids, "video ids (default: all)");

    CLI::App* cmd_classify =
        app.add_subcommand("classify", "assign curated categories by embedding similarity");
    cmd_classify->add_option("ids", ids, "video ids (default: all)");

    CLI::App* cmd_generate =
        app.add_subcommand("generate", "select style templates and generate comments");
    cmd_generate->add_option("ids", ids, "video ids (default: all)");
    cmd_generate->add_option("--style", style_text, "style label or 'auto'")
        ->capture_default_str();
    cmd_generate->add_flag("--per-style", per_style, "one comment per style");

    CLI::App* cmd_run = app.add_subcommand("run", "full flow: ingest through generate");
    cmd_run->add_option("manifest", manifest, "seed manifest JSON")->required();
    cmd_run->add_option("--style", style_text, "style label or 'auto'")->capture_default_str();
    cmd_run->add_flag("--per-style", per_style, "one comment per style");

    CLI::App* cmd_score = app.add_subcommand("score", "score candidate comments on three dimensions");
    cmd_score->add_option("candidates", candidates, "candidates JSONL")->required();
    cmd_score->add_option("--bench", bench, "benchmark comment corpus JSON")->required();
    cmd_score->add_option("--train", train, "optional training comment corpus JSON");

    CLI::App* cmd_questionnaire =
        app.add_subcommand("questionnaire", "export a blinded evaluation packet");
    cmd_questionnaire->add_option("candidates", candidates, "candidates JSONL")->required();

    CLI::App* cmd_dataset =
        app.add_subcommand("dataset-build", "assemble the curated dataset from the workdir");
    cmd_dataset->add_flag("--check-balance", check_balance, "validate balance, write nothing");
    cmd_dataset->add_option("--per-cell", per_cell, "expected videos per (platform, category) cell")
        ->check(CLI::PositiveNumber);

    CLI::App* cmd_tally =
        app.add_subcommand("tally", "unblind filled questionnaires and tally preferences");
    cmd_tally->add_option("answer_key", answer_key, "answer key JSON")->required();
    cmd_tally->add_option("responses", responses, "responses CSV (item_id,letter)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::optional<StyleLabel> style;
    PipelineConfig config;
    try {
        style = detail::parse_style_flag(style_text);
        bool explicit_config = app.count("--config") > 0;
        config = load_config(config_path, explicit_config);
        if (!workdir_override.empty()) config.workdir = workdir_override;
        if (!dataset_override.empty()) config.dataset_dir = dataset_override;
        if (jobs_override) config.jobs = *jobs_override;
        if (seed_override) {
            config.seed = *seed_override;
            config.selection.seed = *seed_override;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (cmd_tally->parsed()) {
            QuestionnairePacket packet = load_answer_key(answer_key);
            TallyResult tally = tally_responses(packet, read_text_file(responses));
            out << "responses: " << tally.total << "\n";
            for (const auto& [system, votes] : tally.votes)
                out << std::left << std::setw(16) << system << votes << " ("
                    << std::fixed << std::setprecision(1) << tally.percentages.at(system)
                    << "%)\n";
            out << std::setprecision(6);
            out.unsetf(std::ios::floatfield);
            return kExitOk;
        }

        Pipeline pipeline = [&] {
            try {
                return Pipeline(config);
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
        }();

        if (cmd_ingest->parsed()) {
            StageReport report = pipeline.ingest(manifest, opts);
            detail::print_report(out, report, opts.dry_run);
            return detail::report_exit(report);
        }
        if (cmd_preprocess->parsed()) {
            StageReport report = pipeline.preprocess(ids, opts);
            detail::print_report(out, report, opts.dry_run);
            return detail::report_exit(report);
        }
        if (cmd_describe->parsed()) {
            StageReport report = pipeline.describe(ids, opts);
            detail::print_report(out, report, opts.dry_run);
            return detail::report_exit(report);
        }
        if (cmd_classify->parsed()) {
            StageReport report = pipeline.classify(ids, opts);
            detail::print_report(out, report, opts.dry_run);
            return detail::report_exit(report);
        }
        if (cmd_generate->parsed()) {
            StageReport report = pipeline.generate(ids, style, per_style, opts);
            detail::print_report(out, report, opts.dry_run);
            return detail::report_exit(report);
        }
        if (cmd_run->parsed()) {
            int exit_code = kExitOk;
            StageReport report = pipeline.ingest(manifest, opts);
            detail::print_report(out, report, opts.dry_run);
            exit_code = detail::worst_exit(exit_code, detail::report_exit(report));
            if (opts.dry_run && pipeline.entries().empty()) {
                out << "(later stages can be planned once ingest has run)\n";
                return exit_code;
            }
            if (exit_code == kExitOk || opts.dry_run) {
                report = pipeline.preprocess({}, opts);
                detail::print_report(out, report, opts.dry_run);
                exit_code = detail::worst_exit(exit_code, detail::report_exit(report));
            }
            if (exit_code == kExitOk || opts.dry_run) {
                report = pipeline.describe({}, opts);
                detail::print_report(out, report, opts.dry_run);
                exit_code = detail::worst_exit(exit_code, detail::report_exit(report));
            }
            if (exit_code == kExitOk || opts.dry_run) {
                report = pipeline.classify({}, opts);
                detail::print_report(out, report, opts.dry_run);
                exit_code = detail::worst_exit(exit_code, detail::report_exit(report));
            }
            if (exit_code == kExitOk || opts.dry_run) {
                report = pipeline.generate({}, style, per_style, opts);
                detail::print_report(out, report, opts.dry_run);
                exit_code = detail::worst_exit(exit_code, detail::report_exit(report));
            }
            return exit_code;
        }
        if (cmd_score->parsed()) {
            ScoreRun run = pipeline.score(candidates, bench, train, opts);
            detail::print_report(out, run.report, opts.dry_run);
            if (!opts.dry_run) detail::print_aggregate(out, run.aggregate);
            return detail::report_exit(run.report);
        }
        if (cmd_questionnaire->parsed()) {
            QuestionnaireRun run = pipeline.questionnaire(candidates, config.seed, opts);
            detail::print_report(out, run.report, opts.dry_run);
            if (!opts.dry_run)
                out << "wrote " << (run.output_dir / "questionnaire.json").generic_string()
                    << " and " << (run.output_dir / "answer_key.json").generic_string() << "\n";
            return detail::report_exit(run.report);
        }
        if (cmd_dataset->parsed()) {
            StageReport report = pipeline.dataset_build(check_balance, per_cell, opts);
            detail::print_report(out, report, opts.dry_run);
            if (!opts.dry_run)
                out << (check_balance
                            ? "balance ok"
                            : "dataset written to " +
                                  pipeline.config().resolved_dataset_dir().generic_string())
                    << "\n";
            return detail::report_exit(report);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ProviderError& e) {
        err << "error: " << e.what() << "\n";
        return kExitProviderFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitStageFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitStageFailure;
    }
    return kExitUsage;
}

}  // namespace stylecast
