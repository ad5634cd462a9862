#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "factadapt/dataset_io.hpp"
#include "factadapt/doubles.hpp"
#include "factadapt/manifest.hpp"
#include "factadapt/score_cache.hpp"
#include "support.hpp"

using namespace factadapt;

namespace {

std::filesystem::path tmp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("factadapt_io_" + name);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("ingest_dataset reads valid lines and tags errors with line numbers") {
    const auto path = tmp_file("ok.jsonl");
    write_text(path,
               R"({"id":"a","document":"da.","summary":"sa."})" "\n"
               R"({"id":"b","document":"db.","summary":"sb.","split":"test"})" "\n"
               "\n"
               R"({"id":"c","document":"dc.","summary":"sc."})" "\n");
    const auto samples = ingest_dataset(path);
    REQUIRE(samples.size() == 3);
    CHECK(samples[1].split == Split::Test);

    const auto bad = tmp_file("bad.jsonl");
    write_text(bad,
               R"({"id":"a","document":"d.","summary":"s."})" "\n"
               "{not json\n");
    try {
        ingest_dataset(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }

    const auto missing = tmp_file("missing.jsonl");
    write_text(missing, R"({"id":"a","summary":"s."})" "\n");
    try {
        ingest_dataset(missing);
        FAIL("expected MissingField");
    } catch (const MissingField& e) {
        CHECK(e.field == "document");
        CHECK(e.line == 1);
    }

    std::filesystem::remove(path);
    std::filesystem::remove(bad);
    std::filesystem::remove(missing);
}

TEST_CASE("ingest_dataset lists every line of a duplicated id") {
    const auto path = tmp_file("dup.jsonl");
    write_text(path,
               R"({"id":"a","document":"d.","summary":"s."})" "\n"
               R"({"id":"b","document":"d.","summary":"s."})" "\n"
               R"({"id":"c","document":"d.","summary":"s."})" "\n"
               R"({"id":"a","document":"d2.","summary":"s2."})" "\n");
    try {
        ingest_dataset(path);
        FAIL("expected DuplicateId");
    } catch (const DuplicateId& e) {
        const std::string what = e.what();
        CHECK(what.find("\"a\"") != std::string::npos);
        CHECK(what.find('1') != std::string::npos);
        CHECK(what.find('4') != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("counterfactual JSONL files round-trip") {
    const auto corpus = fixtures::synthetic_corpus(15);
    const auto pool = fixtures::vocab_pool();
    const HashedScorer scorer(6);
    const WhitespaceTokenizer tok;
    const auto options = fixtures::base_options(Scenario::S2, Group::Mid, 0.0, 4);
    const auto built = build_eval_set(corpus, pool, scorer, options, fixtures::vocab_ner(), tok);
    REQUIRE_FALSE(built.samples.empty());

    const auto path = tmp_file("cf.jsonl");
    write_counterfactuals_jsonl(built.samples, path);
    CHECK(read_counterfactuals_jsonl(path) == built.samples);
    std::filesystem::remove(path);
}

TEST_CASE("contrastive JSONL files round-trip") {
    std::vector<ContrastiveRecord> records;
    ContrastiveRecord r;
    r.document = "Alda runs the office.";
    r.positives = {"Alda is in charge."};
    r.negatives = {"Alda quit.", "Nothing happened."};
    r.provenance = {"src-1", "Alda", {"Brin"}};
    records.push_back(r);
    const auto path = tmp_file("contrastive.jsonl");
    write_contrastive_jsonl(records, path);
    CHECK(read_contrastive_jsonl(path) == records);
    std::filesystem::remove(path);
}

TEST_CASE("score cache hits are bit-identical to the original call") {
    const auto path = tmp_file("cache.jsonl");
    std::filesystem::remove(path);
    const HashedScorer inner(77);
    std::vector<double> firsts;
    {
        ScoreCache cache(path);
        const CachedScorer cached(inner, cache);
        SplitMix64 rng(1);
        for (int i = 0; i < 200; ++i) {
            const std::string doc = "doc" + std::to_string(rng.bounded(20));
            const std::vector<std::string> prefix{"p" + std::to_string(rng.bounded(10))};
            const std::string token = "t" + std::to_string(rng.bounded(30));
            firsts.push_back(cached.first_token_likelihood(doc, prefix, token));
        }
        CHECK(cache.size() > 0);
    }
    {
        // Reload from disk; replayed queries must return identical bits even
        // though the inner scorer is never consulted.
        ScoreCache cache(path);
        const TableScorer wrong_inner(0.123, inner.id());  // would give different values
        const CachedScorer cached(wrong_inner, cache);
        SplitMix64 rng(1);
        for (int i = 0; i < 200; ++i) {
            const std::string doc = "doc" + std::to_string(rng.bounded(20));
            const std::vector<std::string> prefix{"p" + std::to_string(rng.bounded(10))};
            const std::string token = "t" + std::to_string(rng.bounded(30));
            CHECK(cached.first_token_likelihood(doc, prefix, token) == firsts[static_cast<std::size_t>(i)]);
        }
    }
    std::filesystem::remove(path);
}

TEST_CASE("pipeline outputs are identical with and without the cache") {
    const auto corpus = fixtures::synthetic_corpus(20);
    const auto pool = fixtures::vocab_pool();
    const HashedScorer plain(31);
    const WhitespaceTokenizer tok;
    const auto options = fixtures::base_options(Scenario::S2, Group::Bot, 0.0, 9);

    const auto without =
        build_eval_set(corpus, pool, plain, options, fixtures::vocab_ner(), tok);

    const auto path = tmp_file("cache2.jsonl");
    std::filesystem::remove(path);
    ScoreCache cache(path);
    const CachedScorer cached(plain, cache);
    const auto with_cold = build_eval_set(corpus, pool, cached, options, fixtures::vocab_ner(), tok);
    const auto with_warm = build_eval_set(corpus, pool, cached, options, fixtures::vocab_ner(), tok);

    CHECK(without.samples == with_cold.samples);
    CHECK(without.samples == with_warm.samples);
    std::filesystem::remove(path);
}

TEST_CASE("manifest writes are atomic and carry the eval-set tuple") {
    RunManifest manifest;
    manifest.command = "build-eval-set";
    manifest.scorer_id = "hashed-1";
    manifest.dataset = "val.jsonl";
    manifest.group = "mid";
    manifest.scenario = "s2";
    manifest.seeds = {7};
    manifest.outputs = {"out.jsonl"};
    manifest.started_at = iso8601_utc_now();
    manifest.finished_at = iso8601_utc_now();

    const auto path = tmp_file("manifest.json");
    write_manifest_atomic(manifest, path);
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    const auto parsed = Json::parse(read_text(path));
    CHECK(parsed.at("eval_set").at("scorer") == "hashed-1");
    CHECK(parsed.at("eval_set").at("dataset") == "val.jsonl");
    CHECK(parsed.at("eval_set").at("group") == "mid");
    CHECK(parsed.at("eval_set").at("scenario") == "s2");
    std::filesystem::remove(path);
}

TEST_CASE("file fingerprints depend on exact bytes") {
    const auto a = tmp_file("fp_a");
    const auto b = tmp_file("fp_b");
    write_text(a, "identical");
    write_text(b, "identical");
    CHECK(file_fingerprint(a) == file_fingerprint(b));
    write_text(b, "different!");
    CHECK(file_fingerprint(a) != file_fingerprint(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}
