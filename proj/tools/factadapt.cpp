// Command-line front end: evaluation-set construction, threshold search,
// metrics, augmentation, contrastive mapping and dataset filtering over
// JSONL files. Every subcommand reads an optional JSON config (flags win),
// writes its outputs plus a manifest, and exits 0 on success, 1 on a fatal
// error, 2 on a config/usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "factadapt/augmentation.hpp"
#include "factadapt/codec.hpp"
#include "factadapt/construction.hpp"
#include "factadapt/dataset_io.hpp"
#include "factadapt/doubles.hpp"
#include "factadapt/hash.hpp"
#include "factadapt/http_scorer.hpp"
#include "factadapt/manifest.hpp"
#include "factadapt/metrics.hpp"
#include "factadapt/pool.hpp"
#include "factadapt/score_cache.hpp"
#include "factadapt/text.hpp"

namespace {

using namespace factadapt;

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// Flag-over-config resolution: an option given on the command line wins,
// then the config file, then the built-in default already in `value`.
struct Resolver {
    const CLI::App* cmd = nullptr;
    Json config = Json::object();

    template <typename T>
    void apply(const std::string& flag, const std::string& key, T& value) const {
        const auto* option = cmd->get_option_no_throw(flag);
        if (option != nullptr && option->count() > 0) return;
        if (!config.contains(key)) return;
        try {
            value = config.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config key " + key + ": " + e.what());
        }
    }

    void require(const std::string& flag, const std::string& name, const std::string& value) const {
        if (value.empty()) {
            throw ConfigError("missing required " + flag + " (or config key \"" + name + "\")");
        }
    }
};

struct ScorerHandle {
    std::unique_ptr<LikelihoodScorer> base;
    std::unique_ptr<ScoreCache> cache;
    std::unique_ptr<CachedScorer> cached;
    const LikelihoodScorer& get() const { return cached ? *cached : *base; }
};

// Scorer specs: hashed:<seed> | table:<config.json> | http:<url>
ScorerHandle make_scorer(const std::string& spec, const std::string& cache_path) {
    ScorerHandle handle;
    const auto colon = spec.find(':');
    const std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "hashed") {
        handle.base = std::make_unique<HashedScorer>(arg.empty() ? 0 : std::stoull(arg));
    } else if (kind == "table") {
        if (arg.empty()) throw ConfigError("table scorer needs a config path: table:<path>");
        handle.base = std::make_unique<TableScorer>(table_scorer_from_config(load_json_file(arg)));
    } else if (kind == "http") {
        RemoteScorerConfig config;
        config.url = arg;
        handle.base = std::make_unique<RemoteScorer>(std::move(config));
    } else {
        throw ConfigError("unknown scorer spec: " + spec + " (expected hashed:|table:|http:)");
    }
    if (!cache_path.empty()) {
        handle.cache = std::make_unique<ScoreCache>(cache_path);
        handle.cached = std::make_unique<CachedScorer>(*handle.base, *handle.cache);
    }
    return handle;
}

// Recognizer specs: regex:<patterns.json>
std::unique_ptr<EntityRecognizer> make_recognizer(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "regex") {
        if (arg.empty()) throw ConfigError("regex recognizer needs a pattern file: regex:<path>");
        return std::make_unique<RegexEntityRecognizer>(
            regex_recognizer_from_config(load_json_file(arg)));
    }
    throw ConfigError("unknown recognizer spec: " + spec + " (expected regex:<path>)");
}

std::unique_ptr<SummaryGenerator> make_generator(const std::string& spec) {
    if (spec == "lead-sentence") return std::make_unique<LeadSentenceGenerator>();
    throw ConfigError("unknown generator spec: " + spec + " (expected lead-sentence)");
}

std::unique_ptr<ConsistencyScorer> make_consistency(const std::string& spec) {
    if (spec == "lexical") return std::make_unique<LexicalOverlapScorer>();
    throw ConfigError("unknown consistency spec: " + spec + " (expected lexical)");
}

std::set<std::string> parse_excluded(const std::vector<std::string>& flags) {
    if (flags.empty()) return default_excluded_categories();
    std::set<std::string> out(flags.begin(), flags.end());
    return out;
}

void write_report(const MetricsReport& report, const std::string& output, const std::string& csv) {
    std::ofstream out(output);
    if (!out) throw IoError("cannot write " + output);
    out << to_json(report).dump(2) << '\n';
    if (!csv.empty()) {
        std::ofstream csv_out(csv);
        if (!csv_out) throw IoError("cannot write " + csv);
        csv_out << report_to_csv(report);
    }
}

struct CommonArgs {
    std::string config_path;
    std::string dataset;
    std::string pool;
    std::string scorer = "hashed:0";
    std::string ner;
    std::string cache;
    std::string output;
    std::string scenario = "s1";
    std::string group = "mid";
    double threshold = 0.0;
    std::uint64_t seed = 0;
    int workers = 1;
    std::vector<std::string> excluded;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file; flags override its keys");
    cmd->add_option("--scenario", args.scenario, "validation scenario: s1|s1-masked|s2")
        ->check(CLI::IsMember({"s1", "s1-masked", "s2"}));
    cmd->add_option("--group", args.group, "candidate group: top|mid|bot")
        ->check(CLI::IsMember({"top", "mid", "bot"}));
    cmd->add_option("--threshold", args.threshold, "validation threshold");
    cmd->add_option("--seed", args.seed, "run seed; all randomness derives from it");
    cmd->add_option("--scorer", args.scorer, "likelihood scorer: hashed:<seed>|table:<path>|http:<url>");
    cmd->add_option("--cache", args.cache, "likelihood cache file (JSONL)");
    cmd->add_option("--workers", args.workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--exclude", args.excluded, "entity categories to exclude")->delimiter(',');
}

Resolver make_resolver(const CLI::App* cmd, const CommonArgs& args) {
    Resolver resolver;
    resolver.cmd = cmd;
    if (!args.config_path.empty()) {
        resolver.config = load_json_file(args.config_path);
        if (!resolver.config.is_object()) throw ConfigError("config root must be an object");
    }
    return resolver;
}

void resolve_common(const Resolver& r, CommonArgs& args) {
    r.apply("--dataset", "dataset", args.dataset);
    r.apply("--pool", "pool", args.pool);
    r.apply("--scorer", "scorer", args.scorer);
    r.apply("--ner", "ner", args.ner);
    r.apply("--cache", "cache", args.cache);
    if (args.cache.empty()) {
        if (const char* env = std::getenv("FACTADAPT_CACHE")) args.cache = env;
    }
    r.apply("--output", "output", args.output);
    r.apply("--scenario", "scenario", args.scenario);
    r.apply("--group", "group", args.group);
    r.apply("--threshold", "threshold", args.threshold);
    r.apply("--seed", "seed", args.seed);
    r.apply("--workers", "workers", args.workers);
    r.apply("--exclude", "excluded_categories", args.excluded);
}

RunManifest start_manifest(const std::string& command, const CommonArgs& args) {
    RunManifest manifest;
    manifest.command = command;
    manifest.scorer_id = args.scorer;
    manifest.dataset = std::filesystem::path(args.dataset).filename().string();
    manifest.group = args.group;
    manifest.scenario = args.scenario;
    manifest.seeds = {args.seed};
    manifest.started_at = iso8601_utc_now();
    manifest.config = Json{{"scenario", args.scenario}, {"group", args.group},
                           {"threshold", args.threshold}, {"seed", args.seed},
                           {"workers", args.workers}, {"scorer", args.scorer}};
    return manifest;
}

void finish_manifest(RunManifest manifest, const std::vector<std::string>& outputs) {
    manifest.outputs = outputs;
    manifest.finished_at = iso8601_utc_now();
    if (outputs.empty()) return;
    write_manifest_atomic(manifest, outputs.front() + ".manifest.json");
}

// ---- subcommands ----

int run_build_pool(const CLI::App* cmd, CommonArgs& args, const std::string& fields_flag,
                   std::uint64_t min_freq) {
    Resolver r = make_resolver(cmd, args);
    resolve_common(r, args);
    std::string fields = fields_flag;
    r.apply("--pool-fields", "pool_fields", fields);
    r.require("--dataset", "dataset", args.dataset);
    r.require("--ner", "ner", args.ner);
    r.require("--output", "output", args.output);

    const auto dataset = ingest_dataset(args.dataset);
    const auto ner = make_recognizer(args.ner);
    const auto pool = build_pool(dataset, *ner, parse_excluded(args.excluded),
                                 pool_fields_from_string(fields), min_freq);
    save_pool_jsonl(pool, args.output);

    auto manifest = start_manifest("build-pool", args);
    manifest.input_fingerprints[args.dataset] = file_fingerprint(args.dataset);
    finish_manifest(std::move(manifest), {args.output});
    std::size_t entries = 0;
    for (const auto& [_, bucket] : pool.by_category) entries += bucket.size();
    std::cout << "pool entries " << entries << " categories " << pool.by_category.size() << '\n';
    return 0;
}

EvalSetOptions eval_options_from(const CommonArgs& args, std::size_t fan_out, int max_per_sample) {
    EvalSetOptions options;
    options.validation.scenario = scenario_from_string(args.scenario);
    options.validation.threshold = args.threshold;
    options.group.group = group_from_string(args.group);
    options.seed = args.seed;
    options.fan_out = fan_out;
    options.max_per_sample = max_per_sample;
    options.excluded_categories = parse_excluded(args.excluded);
    options.workers = args.workers;
    return options;
}

int run_build_eval_set(const CLI::App* cmd, CommonArgs& args, std::size_t fan_out,
                       int max_per_sample, std::string reason_log) {
    Resolver r = make_resolver(cmd, args);
    resolve_common(r, args);
    r.apply("--reason-log", "reason_log", reason_log);
    r.require("--dataset", "dataset", args.dataset);
    r.require("--pool", "pool", args.pool);
    r.require("--ner", "ner", args.ner);
    r.require("--output", "output", args.output);

    const auto dataset = ingest_dataset(args.dataset);
    const auto pool = load_pool_jsonl(args.pool);
    const auto ner = make_recognizer(args.ner);
    const auto scorer = make_scorer(args.scorer, args.cache);
    WhitespaceTokenizer tokenizer;

    const auto options = eval_options_from(args, fan_out, max_per_sample);
    const auto result = build_eval_set(dataset, pool, scorer.get(), options, *ner, tokenizer);
    if (result.short_draws > 0) {
        std::cerr << "warning: " << result.short_draws
                  << " entities had fewer group candidates than --fan-out requested\n";
    }
    write_counterfactuals_jsonl(result.samples, args.output);
    if (reason_log.empty()) reason_log = args.output + ".reasons.jsonl";
    write_reason_log_jsonl(result.reasons, reason_log);

    auto manifest = start_manifest("build-eval-set", args);
    manifest.input_fingerprints[args.dataset] = file_fingerprint(args.dataset);
    manifest.input_fingerprints[args.pool] = file_fingerprint(args.pool);
    finish_manifest(std::move(manifest), {args.output, reason_log});
    std::cout << "counterfactual samples " << result.samples.size() << " of " << dataset.size()
              << " inputs\n";
    return 0;
}

int run_search_threshold(const CLI::App* cmd, CommonArgs& args, ThresholdSearch search) {
    Resolver r = make_resolver(cmd, args);
    resolve_common(r, args);
    r.apply("--target", "target_fraction", search.target_fraction);
    r.apply("--tolerance", "tolerance", search.tolerance);
    r.apply("--grid-step", "grid_step", search.grid_step);
    r.require("--dataset", "dataset", args.dataset);
    r.require("--pool", "pool", args.pool);
    r.require("--ner", "ner", args.ner);

    const auto dataset = ingest_dataset(args.dataset);
    const auto pool = load_pool_jsonl(args.pool);
    const auto ner = make_recognizer(args.ner);
    const auto scorer = make_scorer(args.scorer, args.cache);
    WhitespaceTokenizer tokenizer;

    const auto options = eval_options_from(args, 1, -1);
    const double tau =
        search_threshold(dataset, pool, scorer.get(), options, search, *ner, tokenizer);
    std::cout << "tau " << Json(tau).dump() << '\n';
    if (!args.output.empty()) {
        std::ofstream out(args.output);
        if (!out) throw IoError("cannot write " + args.output);
        out << Json{{"tau", tau},
                    {"target_fraction", search.target_fraction},
                    {"tolerance", search.tolerance},
                    {"grid_step", search.grid_step}}
                   .dump(2)
            << '\n';
        auto manifest = start_manifest("search-threshold", args);
        manifest.input_fingerprints[args.dataset] = file_fingerprint(args.dataset);
        manifest.input_fingerprints[args.pool] = file_fingerprint(args.pool);
        finish_manifest(std::move(manifest), {args.output});
    }
    return 0;
}

int run_score_mcl(const CLI::App* cmd, CommonArgs& args, std::string eval_set, std::string csv) {
    Resolver r = make_resolver(cmd, args);
    resolve_common(r, args);
    r.apply("--eval-set", "eval_set", eval_set);
    r.apply("--csv", "csv", csv);
    r.require("--dataset", "dataset", args.dataset);
    r.require("--eval-set", "eval_set", eval_set);
    r.require("--output", "output", args.output);

    const auto dataset = ingest_dataset(args.dataset);
    const auto counterfactuals = read_counterfactuals_jsonl(eval_set);
    const auto scorer = make_scorer(args.scorer, args.cache);
    WhitespaceTokenizer tokenizer;

    std::map<std::string, const Sample*> by_id;
    for (const auto& s : dataset) by_id[s.id] = &s;

    std::vector<PerSampleMetrics> rows;
    std::size_t skipped = 0;
    for (const auto& cf : counterfactuals) {
        auto it = by_id.find(cf.source_id);
        if (it == by_id.end()) {
            ++skipped;
            std::cerr << "skip " << cf.source_id << ": not in dataset\n";
            continue;
        }
        PerSampleMetrics row;
        row.source_id = cf.source_id;
        try {
            row.m_cl = m_cl(scorer.get(), *it->second, cf, tokenizer);
        } catch (const Error& e) {
            ++skipped;
            std::cerr << "skip " << cf.source_id << ": " << e.what() << '\n';
            continue;
        }
        rows.push_back(std::move(row));
    }

    ReportMetadata metadata;
    metadata.dataset = std::filesystem::path(args.dataset).filename().string();
    metadata.scorer_id = scorer.get().id();
    if (!counterfactuals.empty()) {
        metadata.scenario = to_string(counterfactuals.front().scenario);
        metadata.group = to_string(counterfactuals.front().group);
    }
    if (cmd->count("--seed") > 0 || r.config.contains("seed")) metadata.seeds = {args.seed};
    const std::size_t scored = rows.size();
    write_report(make_report(std::move(rows), std::move(metadata)), args.output, csv);

    auto manifest = start_manifest("score-mcl", args);
    manifest.input_fingerprints[args.dataset] = file_fingerprint(args.dataset);
    manifest.input_fingerprints[eval_set] = file_fingerprint(eval_set);
    finish_manifest(std::move(manifest), {args.output});
    std::cout << "scored " << scored << " skipped " << skipped << '\n';
    return 0;
}

int run_score_mfc(const CLI::App* cmd, CommonArgs& args, std::string eval_set,
                  std::string generator_spec, std::string consistency_spec, std::string csv) {
    Resolver r = make_resolver(cmd, args);
    resolve_common(r, args);
    r.apply("--eval-set", "eval_set", eval_set);
    r.apply("--generator", "generator", generator_spec);
    r.apply("--consistency", "consistency", consistency_spec);
    r.apply("--csv", "csv", csv);
    r.require("--dataset", "dataset", args.dataset);
    r.require("--eval-set", "eval_set", eval_set);
    r.require("--output", "output", args.output);

    const auto dataset = ingest_dataset(args.dataset);
    const auto counterfactuals = read_counterfactuals_jsonl(eval_set);
    const auto generator = make_generator(generator_spec);
    const auto consistency = make_consistency(consistency_spec);

    std::map<std::string, const Sample*> by_id;
    for (const auto& s : dataset) by_id[s.id] = &s;

    std::vector<PerSampleMetrics> rows;
    std::size_t skipped = 0;
    for (const auto& cf : counterfactuals) {
        auto it = by_id.find(cf.source_id);
        if (it == by_id.end()) {
            ++skipped;
            std::cerr << "skip " << cf.source_id << ": not in dataset\n";
            continue;
        }
        PerSampleMetrics row;
        row.source_id = cf.source_id;
        try {
            row.m_fc = m_fc(*generator, *consistency, it->second->document, cf.document);
        } catch (const Error& e) {
            ++skipped;
            std::cerr << "skip " << cf.source_id << ": " << e.what() << '\n';
            continue;
        }
        rows.push_back(std::move(row));
    }

    ReportMetadata metadata;
    metadata.dataset = std::filesystem::path(args.dataset).filename().string();
    metadata.scorer_id = generator->id() + "+" + consistency->id();
    if (!counterfactuals.empty()) {
        metadata.scenario = to_string(counterfactuals.front().scenario);
        metadata.group = to_string(counterfactuals.front().group);
    }
    if (cmd->count("--seed") > 0 || r.config.contains("seed")) metadata.seeds = {args.seed};
    const std::string scorer_label = metadata.scorer_id;
    const std::size_t scored = rows.size();
    write_report(make_report(std::move(rows), std::move(metadata)), args.output, csv);

    auto manifest = start_manifest("score-mfc", args);
    manifest.scorer_id = scorer_label;
    manifest.input_fingerprints[args.dataset] = file_fingerprint(args.dataset);
    manifest.input_fingerprints[eval_set] = file_fingerprint(eval_set);
    finish_manifest(std::move(manifest), {args.output});
    std::cout << "scored " << scored << " skipped " << skipped << '\n';
    return 0;
}

int run_replacement_rate(const CLI::App* cmd, CommonArgs& args, std::string eval_set,
                         std::string generated, bool full_surface_only) {
    Resolver r = make_resolver(cmd, args);
    resolve_common(r, args);
    r.apply("--eval-set", "eval_set", eval_set);
    r.apply("--generated", "generated", generated);
    r.require("--eval-set", "eval_set", eval_set);
    r.require("--generated", "generated", generated);
    r.require("--output", "output", args.output);

    const auto counterfactuals = read_counterfactuals_jsonl(eval_set);
    std::vector<std::string> summaries;
    {
        std::ifstream in(generated);
        if (!in) throw IoError("cannot read " + generated);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            try {
                summaries.push_back(Json::parse(line).at("summary").get<std::string>());
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(line_no, e.what());
            }
        }
    }
    if (summaries.size() != counterfactuals.size()) {
        throw Error("generated summaries (" + std::to_string(summaries.size()) +
                    ") and eval set (" + std::to_string(counterfactuals.size()) +
                    ") differ in length");
    }
    std::vector<std::pair<CounterfactualSample, std::string>> pairs;
    pairs.reserve(summaries.size());
    std::vector<PerSampleMetrics> rows;
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        pairs.emplace_back(counterfactuals[i], summaries[i]);
        PerSampleMetrics row;
        row.source_id = counterfactuals[i].source_id;
        const std::span<const std::pair<CounterfactualSample, std::string>> one(&pairs.back(), 1);
        row.replaced = replacement_rate(one, full_surface_only) > 0.5;
        rows.push_back(std::move(row));
    }
    const double rate = replacement_rate(pairs, full_surface_only);

    ReportMetadata metadata;
    metadata.dataset = std::filesystem::path(eval_set).filename().string();
    metadata.scorer_id = "replacement-rate";
    if (!counterfactuals.empty()) {
        metadata.scenario = to_string(counterfactuals.front().scenario);
        metadata.group = to_string(counterfactuals.front().group);
    }
    write_report(make_report(std::move(rows), std::move(metadata)), args.output, "");
    std::cout << "replacement_rate " << Json(rate).dump() << '\n';

    auto manifest = start_manifest("replacement-rate", args);
    manifest.input_fingerprints[eval_set] = file_fingerprint(eval_set);
    manifest.input_fingerprints[generated] = file_fingerprint(generated);
    finish_manifest(std::move(manifest), {args.output});
    return 0;
}

int run_build_augmentation(const CLI::App* cmd, CommonArgs& args, double ratio,
                           std::size_t negatives, std::string reason_log) {
    Resolver r = make_resolver(cmd, args);
    resolve_common(r, args);
    r.apply("--ratio", "ratio", ratio);
    r.apply("--negatives", "negatives_per_sample", negatives);
    r.apply("--reason-log", "reason_log", reason_log);
    r.require("--dataset", "dataset", args.dataset);
    r.require("--pool", "pool", args.pool);
    r.require("--ner", "ner", args.ner);
    r.require("--output", "output", args.output);

    const auto train = ingest_dataset(args.dataset);
    const auto pool = load_pool_jsonl(args.pool);
    const auto ner = make_recognizer(args.ner);
    const auto scorer = make_scorer(args.scorer, args.cache);
    WhitespaceTokenizer tokenizer;

    AugmentationConfig config;
    config.ratio = ratio;
    config.group = group_from_string(args.group);
    config.scenario = scenario_from_string(args.scenario);
    config.threshold = args.threshold;
    config.negatives_per_sample = negatives;
    config.seed = args.seed;

    const auto result =
        build_augmentation_set(train, pool, scorer.get(), config, *ner, tokenizer, args.workers);
    if (result.truncated) {
        std::cerr << "warning: only " << result.samples.size() << " counterfactuals available for "
                  << result.requested << " requested\n";
    }
    write_counterfactuals_jsonl(result.samples, args.output);
    if (reason_log.empty()) reason_log = args.output + ".reasons.jsonl";
    write_reason_log_jsonl(result.reasons, reason_log);

    auto manifest = start_manifest("build-augmentation", args);
    manifest.config["ratio"] = ratio;
    manifest.input_fingerprints[args.dataset] = file_fingerprint(args.dataset);
    manifest.input_fingerprints[args.pool] = file_fingerprint(args.pool);
    finish_manifest(std::move(manifest), {args.output, reason_log});
    std::cout << "augmentation samples " << result.samples.size() << " requested "
              << result.requested << '\n';
    return 0;
}

int run_map_contrastive(const CLI::App* cmd, CommonArgs& args, std::string eval_set,
                        std::string records_path, std::size_t negatives) {
    Resolver r = make_resolver(cmd, args);
    resolve_common(r, args);
    r.apply("--eval-set", "eval_set", eval_set);
    r.apply("--records", "records", records_path);
    r.apply("--negatives", "negatives_per_sample", negatives);
    r.require("--eval-set", "eval_set", eval_set);
    r.require("--output", "output", args.output);
    if (records_path.empty() && args.dataset.empty()) {
        throw ConfigError("map-contrastive needs --records or --dataset");
    }

    const auto counterfactuals = read_counterfactuals_jsonl(eval_set);

    // Records may come from an explicit contrastive file or be seeded from
    // the dataset (document + reference summary as the only positive).
    std::map<std::string, ContrastiveRecord> records;
    if (!records_path.empty()) {
        for (auto& record : read_contrastive_jsonl(records_path)) {
            records[record.provenance.source_id] = std::move(record);
        }
    } else {
        for (const auto& sample : ingest_dataset(args.dataset)) {
            ContrastiveRecord record;
            record.document = sample.document;
            record.positives = {sample.summary};
            record.provenance.source_id = sample.id;
            records[sample.id] = std::move(record);
        }
    }

    const bool can_synthesize = !args.pool.empty() && !args.scorer.empty();
    std::optional<CandidatePool> pool;
    ScorerHandle scorer;
    if (can_synthesize) {
        pool = load_pool_jsonl(args.pool);
        scorer = make_scorer(args.scorer, args.cache);
    }
    WhitespaceTokenizer tokenizer;

    std::vector<ContrastiveRecord> mapped;
    std::size_t skipped = 0;
    for (const auto& cf : counterfactuals) {
        auto it = records.find(cf.source_id);
        if (it == records.end()) {
            ++skipped;
            std::cerr << "skip " << cf.source_id << ": no contrastive record\n";
            continue;
        }
        ContrastiveRecord record = it->second;
        if (record.negatives.empty() && can_synthesize) {
            // Draw one extra so dropping the counterfactual itself still
            // leaves enough distinct negatives.
            SplitMix64 rng(derive_seed(args.seed, cf.source_id + "#negatives"));
            GroupSpec spec;
            spec.group = cf.group;
            try {
                const auto drafts = synthesize_negatives(
                    record.positives.front(), cf.original_entity, *pool, spec, scorer.get(),
                    record.document, negatives + 1, rng, tokenizer);
                for (const auto& negative : drafts) {
                    if (record.negatives.size() >= negatives) break;
                    if (negative.find(cf.counterfactual_surface) != std::string::npos) continue;
                    record.negatives.push_back(negative);
                }
            } catch (const Error& e) {
                std::cerr << "skip " << cf.source_id << ": negatives: " << e.what() << '\n';
            }
        }
        if (record.negatives.empty()) {
            ++skipped;
            std::cerr << "skip " << cf.source_id << ": no negatives\n";
            continue;
        }
        try {
            std::vector<std::string> warnings;
            auto out = map_contrastive_pairs(record, cf.original_entity.surface,
                                             cf.counterfactual_surface, 2, &warnings);
            out.provenance.source_id = cf.source_id;
            for (const auto& w : warnings) std::cerr << cf.source_id << ": " << w << '\n';
            mapped.push_back(std::move(out));
        } catch (const Error& e) {
            ++skipped;
            std::cerr << "skip " << cf.source_id << ": " << e.what() << '\n';
        }
    }
    write_contrastive_jsonl(mapped, args.output);

    auto manifest = start_manifest("map-contrastive", args);
    manifest.input_fingerprints[eval_set] = file_fingerprint(eval_set);
    if (!records_path.empty()) {
        manifest.input_fingerprints[records_path] = file_fingerprint(records_path);
    }
    finish_manifest(std::move(manifest), {args.output});
    std::cout << "mapped " << mapped.size() << " skipped " << skipped << '\n';
    return 0;
}

int run_filter(const CLI::App* cmd, CommonArgs& args, std::string dropped_report) {
    Resolver r = make_resolver(cmd, args);
    resolve_common(r, args);
    r.apply("--dropped-report", "dropped_report", dropped_report);
    r.require("--dataset", "dataset", args.dataset);
    r.require("--ner", "ner", args.ner);
    r.require("--output", "output", args.output);

    const auto dataset = ingest_dataset(args.dataset);
    const auto ner = make_recognizer(args.ner);
    const auto result = filter_dataset(dataset, *ner, parse_excluded(args.excluded));
    write_samples_jsonl(result.kept, args.output);
    if (dropped_report.empty()) dropped_report = args.output + ".dropped.jsonl";
    {
        std::ofstream out(dropped_report);
        if (!out) throw IoError("cannot write " + dropped_report);
        for (const auto& [sample, offending] : result.dropped) {
            Json entities = Json::array();
            for (const auto& m : offending) {
                entities.push_back({{"surface", m.surface}, {"category", m.category}});
            }
            out << Json{{"sample_id", sample.id}, {"offending", std::move(entities)}}.dump() << '\n';
        }
    }

    auto manifest = start_manifest("filter", args);
    manifest.input_fingerprints[args.dataset] = file_fingerprint(args.dataset);
    finish_manifest(std::move(manifest), {args.output, dropped_report});
    std::cout << "kept " << result.kept.size() << " dropped " << result.dropped.size() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"counterfactual evaluation-set construction and factual-adaptiveness metrics"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string eval_set, generated, records_path, csv, generator_spec = "lead-sentence",
                             consistency_spec = "lexical", fields = "both", reason_log,
                             dropped_report;
    std::size_t fan_out = 1, negatives = 1;
    std::uint64_t min_freq = 1;
    int max_per_sample = -1;
    double ratio = 0.1;
    bool full_surface_only = false;
    ThresholdSearch search;

    auto* build_pool_cmd = app.add_subcommand("build-pool", "build the candidate entity pool");
    add_common_flags(build_pool_cmd, args);
    build_pool_cmd->add_option("--dataset", args.dataset, "training corpus (JSONL)");
    build_pool_cmd->add_option("--ner", args.ner, "entity recognizer: regex:<patterns.json>");
    build_pool_cmd->add_option("--output", args.output, "pool output (JSONL)");
    build_pool_cmd->add_option("--pool-fields", fields, "count entities from: doc|summary|both")
        ->check(CLI::IsMember({"doc", "summary", "both"}));
    build_pool_cmd->add_option("--min-freq", min_freq, "drop entities rarer than this");

    auto* build_eval_cmd = app.add_subcommand("build-eval-set", "construct an evaluation set");
    add_common_flags(build_eval_cmd, args);
    build_eval_cmd->add_option("--dataset", args.dataset, "samples to perturb (JSONL)");
    build_eval_cmd->add_option("--pool", args.pool, "candidate pool (JSONL)");
    build_eval_cmd->add_option("--ner", args.ner, "entity recognizer: regex:<patterns.json>");
    build_eval_cmd->add_option("--output", args.output, "counterfactual samples (JSONL)");
    build_eval_cmd->add_option("--fan-out", fan_out, "counterfactuals drawn per accepted entity");
    build_eval_cmd->add_option("--max-per-sample", max_per_sample,
                               "cap emitted counterfactuals per sample (-1 = all)");
    build_eval_cmd->add_option("--reason-log", reason_log, "skip-reason log (JSONL)");

    auto* search_cmd = app.add_subcommand("search-threshold",
                                          "find the threshold hitting a target extraction fraction");
    add_common_flags(search_cmd, args);
    search_cmd->add_option("--dataset", args.dataset, "validation split (JSONL)");
    search_cmd->add_option("--pool", args.pool, "candidate pool (JSONL)");
    search_cmd->add_option("--ner", args.ner, "entity recognizer: regex:<patterns.json>");
    search_cmd->add_option("--output", args.output, "result JSON (optional)");
    search_cmd->add_option("--target", search.target_fraction, "target extraction fraction");
    search_cmd->add_option("--tolerance", search.tolerance, "allowed shortfall below target");
    search_cmd->add_option("--grid-step", search.grid_step, "threshold grid step");

    auto* mcl_cmd = app.add_subcommand("score-mcl", "conditional-likelihood adaptiveness metric");
    add_common_flags(mcl_cmd, args);
    mcl_cmd->add_option("--dataset", args.dataset, "original samples (JSONL)");
    mcl_cmd->add_option("--eval-set", eval_set, "counterfactual samples (JSONL)");
    mcl_cmd->add_option("--output", args.output, "metrics report (JSON)");
    mcl_cmd->add_option("--csv", csv, "also export per-sample rows as CSV");

    auto* mfc_cmd = app.add_subcommand("score-mfc", "factual-consistency adaptiveness metric");
    add_common_flags(mfc_cmd, args);
    mfc_cmd->add_option("--dataset", args.dataset, "original samples (JSONL)");
    mfc_cmd->add_option("--eval-set", eval_set, "counterfactual samples (JSONL)");
    mfc_cmd->add_option("--output", args.output, "metrics report (JSON)");
    mfc_cmd->add_option("--generator", generator_spec, "summary generator: lead-sentence");
    mfc_cmd->add_option("--consistency", consistency_spec, "consistency scorer: lexical");
    mfc_cmd->add_option("--csv", csv, "also export per-sample rows as CSV");

    auto* rate_cmd = app.add_subcommand("replacement-rate",
                                        "fraction of generated summaries that switched entity");
    add_common_flags(rate_cmd, args);
    rate_cmd->add_option("--eval-set", eval_set, "counterfactual samples (JSONL)");
    rate_cmd->add_option("--generated", generated,
                         "generated summaries (JSONL {\"summary\"}; aligned by line)");
    rate_cmd->add_option("--output", args.output, "metrics report (JSON)");
    rate_cmd->add_flag("--full-surface-only", full_surface_only,
                       "count only the full original surface as leakage");

    auto* aug_cmd = app.add_subcommand("build-augmentation", "counterfactual training-set slice");
    add_common_flags(aug_cmd, args);
    aug_cmd->add_option("--dataset", args.dataset, "training split (JSONL)");
    aug_cmd->add_option("--pool", args.pool, "candidate pool (JSONL)");
    aug_cmd->add_option("--ner", args.ner, "entity recognizer: regex:<patterns.json>");
    aug_cmd->add_option("--output", args.output, "sampled counterfactuals (JSONL)");
    aug_cmd->add_option("--ratio", ratio, "augmentation size relative to the training set");
    aug_cmd->add_option("--negatives", negatives, "negatives per sample for synthesis");
    aug_cmd->add_option("--reason-log", reason_log, "skip-reason log (JSONL)");

    auto* map_cmd = app.add_subcommand("map-contrastive",
                                       "carry entity replacements into contrastive records");
    add_common_flags(map_cmd, args);
    map_cmd->add_option("--eval-set", eval_set, "counterfactual samples (JSONL)");
    map_cmd->add_option("--records", records_path, "contrastive records (JSONL)");
    map_cmd->add_option("--dataset", args.dataset,
                        "fallback: build records from this dataset's reference summaries");
    map_cmd->add_option("--pool", args.pool, "pool for negative synthesis (optional)");
    map_cmd->add_option("--output", args.output, "mapped records (JSONL)");
    map_cmd->add_option("--negatives", negatives, "negatives to synthesize when missing");

    auto* filter_cmd = app.add_subcommand("filter", "drop samples with unsupported summary entities");
    add_common_flags(filter_cmd, args);
    filter_cmd->add_option("--dataset", args.dataset, "samples to filter (JSONL)");
    filter_cmd->add_option("--ner", args.ner, "entity recognizer: regex:<patterns.json>");
    filter_cmd->add_option("--output", args.output, "kept samples (JSONL)");
    filter_cmd->add_option("--dropped-report", dropped_report, "dropped samples + offenders (JSONL)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (build_pool_cmd->parsed()) return run_build_pool(build_pool_cmd, args, fields, min_freq);
        if (build_eval_cmd->parsed()) {
            return run_build_eval_set(build_eval_cmd, args, fan_out, max_per_sample, reason_log);
        }
        if (search_cmd->parsed()) return run_search_threshold(search_cmd, args, search);
        if (mcl_cmd->parsed()) return run_score_mcl(mcl_cmd, args, eval_set, csv);
        if (mfc_cmd->parsed()) {
            return run_score_mfc(mfc_cmd, args, eval_set, generator_spec, consistency_spec, csv);
        }
        if (rate_cmd->parsed()) {
            return run_replacement_rate(rate_cmd, args, eval_set, generated, full_surface_only);
        }
        if (aug_cmd->parsed()) return run_build_augmentation(aug_cmd, args, ratio, negatives, reason_log);
        if (map_cmd->parsed()) return run_map_contrastive(map_cmd, args, eval_set, records_path, negatives);
        if (filter_cmd->parsed()) return run_filter(filter_cmd, args, dropped_report);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
