#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "weatlab/runner.hpp"

namespace {

int run_command(const std::string& config_path, weatlab::RunConfig overrides,
                bool has_config, const std::string& out_path) {
    weatlab::RunConfig config =
        has_config ? weatlab::load_config(config_path) : weatlab::RunConfig{};

    // CLI overrides win over config-file values.
    if (!overrides.lexicon_path.empty()) config.lexicon_path = overrides.lexicon_path;
    if (!overrides.embeddings.empty())
        config.embeddings.insert(config.embeddings.end(), overrides.embeddings.begin(),
                                 overrides.embeddings.end());
    if (!overrides.align_jobs.empty())
        config.align_jobs.insert(config.align_jobs.end(), overrides.align_jobs.begin(),
                                 overrides.align_jobs.end());
    if (!overrides.tests.empty()) config.tests = overrides.tests;
    if (!overrides.metrics.empty()) config.metrics = overrides.metrics;
    if (overrides.alpha >= 0) config.alpha = overrides.alpha;
    if (overrides.coverage_threshold >= 0)
        config.coverage_threshold = overrides.coverage_threshold;
    if (overrides.permutations) config.permutations = overrides.permutations;
    if (overrides.exact_threshold) config.exact_threshold = overrides.exact_threshold;
    if (overrides.seed) config.seed = overrides.seed;
    if (overrides.workers) config.workers = overrides.workers;
    if (overrides.max_vocab) config.max_vocab = overrides.max_vocab;
    config.policy = overrides.policy;
    if (overrides.format != weatlab::ReportFormat::Json)
        config.format = overrides.format;

    weatlab::RunResult result = weatlab::run(config);

    weatlab::EmitOptions options;
    options.format = config.format;
    if (out_path.empty() || out_path == "-") {
        weatlab::emit(result.rows, result.aggregates, options, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw weatlab::Error("cannot write report to " + out_path);
        weatlab::emit(result.rows, result.aggregates, options, out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"WEAT/XWEAT bias measurement over word embedding spaces"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run bias tests and emit a report");

    std::string config_path, out_path, metric_str, format_str = "json";
    std::string case_str = "exact-then-lowercase", normalize_str = "none";
    std::vector<std::string> embedding_args, align_args, test_ids;
    std::string dict_path, src_emb, tgt_emb, src_lang = "src", tgt_lang = "tgt";
    weatlab::RunConfig overrides;
    overrides.permutations = 0;
    overrides.exact_threshold = 0;
    overrides.alpha = -1;
    overrides.coverage_threshold = -1;
    overrides.workers = 0;

    run_cmd->add_option("--config", config_path, "Flat key-value config file");
    run_cmd->add_option("--lexicon", overrides.lexicon_path, "XWEAT lexicon file");
    run_cmd->add_option("--embedding", embedding_args,
                        "Embedding space as LANG:PATH (repeatable)");
    run_cmd->add_option("--align", align_args,
                        "Alignment job as SRC:TGT:DICT_PATH (repeatable)");
    run_cmd->add_option("--tests", test_ids, "Test ids to run (default: all)");
    run_cmd->add_option("--metric", metric_str, "cosine, euclidean, or both comma-separated");
    run_cmd->add_option("--permutations", overrides.permutations,
                        "Monte Carlo sample count");
    run_cmd->add_option("--exact-threshold", overrides.exact_threshold,
                        "Max partition count for exact p-values");
    run_cmd->add_option("--seed", overrides.seed, "Monte Carlo seed");
    run_cmd->add_option("--alpha", overrides.alpha, "Significance level (default 0.05)");
    run_cmd->add_option("--coverage-threshold", overrides.coverage_threshold,
                        "Coverage filter threshold (default 0.20)");
    run_cmd->add_option("--max-vocab", [&overrides](const CLI::results_t& res) {
        overrides.max_vocab = std::stoull(res[0]);
        return true;
    }, "Load at most N vectors per space");
    run_cmd->add_option("--workers", overrides.workers, "Worker thread count");
    run_cmd->add_option("--case", case_str, "exact-only or exact-then-lowercase");
    run_cmd->add_option("--normalize-before-fit", normalize_str,
                        "none, unit, center, or center+unit");
    run_cmd->add_option("--format", format_str, "json or tsv");
    run_cmd->add_option("--out", out_path, "Report path (default: stdout)");

    // Single-pair alignment shorthand.
    run_cmd->add_option("--dict", dict_path, "Bilingual dictionary (with --src-emb/--tgt-emb)");
    run_cmd->add_option("--src-emb", src_emb, "Source embedding as LANG:PATH");
    run_cmd->add_option("--tgt-emb", tgt_emb, "Target embedding as LANG:PATH");

    CLI11_PARSE(app, argc, argv);

    try {
        auto parse_lang_path = [](const std::string& arg, const char* what) {
            std::size_t colon = arg.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == arg.size())
                throw weatlab::Error(std::string(what) + " must be LANG:PATH, got '" +
                                     arg + "'");
            return std::make_pair(arg.substr(0, colon), arg.substr(colon + 1));
        };

        for (const std::string& arg : embedding_args) {
            auto [lang, path] = parse_lang_path(arg, "--embedding");
            overrides.embeddings.push_back({lang, path});
        }
        for (const std::string& arg : align_args) {
            std::size_t c1 = arg.find(':');
            std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                                     : arg.find(':', c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos)
                throw weatlab::Error("--align must be SRC:TGT:DICT_PATH, got '" + arg + "'");
            weatlab::AlignJob job;
            job.source_language = arg.substr(0, c1);
            job.target_language = arg.substr(c1 + 1, c2 - c1 - 1);
            job.dict_path = arg.substr(c2 + 1);
            job.normalization = weatlab::parse_fit_normalization(normalize_str);
            overrides.align_jobs.push_back(std::move(job));
        }
        if (!dict_path.empty()) {
            if (src_emb.empty() || tgt_emb.empty())
                throw weatlab::Error("--dict requires --src-emb and --tgt-emb");
            auto [sl, sp] = parse_lang_path(src_emb, "--src-emb");
            auto [tl, tp] = parse_lang_path(tgt_emb, "--tgt-emb");
            overrides.embeddings.push_back({sl, sp});
            overrides.embeddings.push_back({tl, tp});
            weatlab::AlignJob job;
            job.source_language = sl;
            job.target_language = tl;
            job.dict_path = dict_path;
            job.normalization = weatlab::parse_fit_normalization(normalize_str);
            overrides.align_jobs.push_back(std::move(job));
        }

        overrides.tests = test_ids;
        if (!metric_str.empty()) {
            overrides.metrics.clear();
            std::istringstream in(metric_str);
            std::string m;
            while (std::getline(in, m, ','))
                if (!m.empty()) overrides.metrics.push_back(weatlab::parse_metric(m));
        } else {
            overrides.metrics.clear();
        }
        overrides.policy.case_strategy = case_str == "exact-only"
                                             ? weatlab::CaseStrategy::ExactOnly
                                             : weatlab::CaseStrategy::ExactThenLowercase;
        overrides.format = weatlab::parse_report_format(format_str);

        return run_command(config_path, std::move(overrides), !config_path.empty(),
                           out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
