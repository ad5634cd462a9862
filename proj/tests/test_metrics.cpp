#include <doctest.h>

#include <cmath>
#include <map>

#include "factadapt/codec.hpp"
#include "factadapt/construction.hpp"
#include "factadapt/doubles.hpp"
#include "factadapt/metrics.hpp"
#include "support.hpp"

using namespace factadapt;

namespace {

const WhitespaceTokenizer kTok;

// A counterfactual that changes nothing: same document, same summary, same
// entity on both sides. Built directly; the construction pipeline would
// reject it as degenerate.
std::pair<Sample, CounterfactualSample> identity_fixture(std::uint64_t salt) {
    Sample s;
    s.id = "ident-" + std::to_string(salt);
    s.document = "Alda stood in Arbel d" + std::to_string(salt) + ".";
    s.summary = "Alda waited w" + std::to_string(salt) + ".";
    CounterfactualSample cf;
    cf.source_id = s.id;
    cf.document = s.document;
    cf.summary = s.summary;
    cf.original_entity.surface = "Alda";
    cf.original_entity.category = "PERSON";
    cf.original_entity.doc_spans = {{0, 4}};
    cf.original_entity.summary_spans = {{0, 4}};
    cf.original_entity.first_token_pos = 0;
    cf.counterfactual_surface = "Alda";
    cf.counterfactual_first_token_pos = 0;
    return {std::move(s), std::move(cf)};
}

}  // namespace

TEST_CASE("m_cl vanishes on identity counterfactuals for any scorer") {
    for (std::uint64_t salt = 0; salt < 100; ++salt) {
        const auto [s, cf] = identity_fixture(salt);
        const HashedScorer scorer(salt * 31 + 7);
        CHECK(std::abs(m_cl(scorer, s, cf, kTok)) <= 1e-12);
    }
}

TEST_CASE("m_cl reproduces an engineered likelihood gap") {
    Sample s;
    s.id = "gap";
    s.document = "Alda stood by.";
    s.summary = "Alda waited.";
    CounterfactualSample cf;
    cf.source_id = s.id;
    cf.document = "Brin stood by.";
    cf.summary = "Brin waited.";
    cf.original_entity.surface = "Alda";
    cf.original_entity.category = "PERSON";
    cf.original_entity.doc_spans = {{0, 4}};
    cf.original_entity.summary_spans = {{0, 4}};
    cf.original_entity.first_token_pos = 0;
    cf.counterfactual_surface = "Brin";
    cf.counterfactual_first_token_pos = 0;

    TableScorer scorer(0.0);
    const double p_c = 0.111;
    scorer.add(s.document, {}, "Alda", 0.734 + p_c);
    scorer.add(cf.document, {}, "Brin", p_c);
    CHECK(m_cl(scorer, s, cf, kTok) == doctest::Approx(0.734).epsilon(1e-12));

    TableScorer negative(0.0);
    negative.add(s.document, {}, "Alda", 0.2);
    negative.add(cf.document, {}, "Brin", 0.5);
    CHECK(m_cl(negative, s, cf, kTok) == doctest::Approx(-0.3).epsilon(1e-12));
}

TEST_CASE("m_cl stays within [-1,1] across randomized scorers") {
    const auto corpus = fixtures::synthetic_corpus(10);
    const auto pool = fixtures::vocab_pool();
    const auto options = fixtures::base_options(Scenario::S2, Group::Mid, -1.0, 13);
    const HashedScorer builder(5);
    const auto result =
        build_eval_set(corpus, pool, builder, options, fixtures::vocab_ner(), kTok);
    REQUIRE_FALSE(result.samples.empty());
    std::map<std::string, Sample> by_id;
    for (const auto& s : corpus) by_id[s.id] = s;
    int evaluations = 0;
    for (std::uint64_t seed = 0; evaluations < 1000; ++seed) {
        const HashedScorer scorer(seed);
        for (const auto& cf : result.samples) {
            const double v = m_cl(scorer, by_id.at(cf.source_id), cf, kTok);
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
            ++evaluations;
        }
    }
}

TEST_CASE("m_cl rejects token positions beyond the summary") {
    auto [s, cf] = identity_fixture(0);
    cf.original_entity.first_token_pos = 99;
    const HashedScorer scorer(1);
    CHECK_THROWS_AS(m_cl(scorer, s, cf, kTok), PositionMismatch);
}

TEST_CASE("m_fc vanishes when the two documents coincide") {
    const LeadSentenceGenerator gen;
    const LexicalOverlapScorer consistency;
    const std::string doc = "Alda spoke in Arbel. More text follows.";
    CHECK(m_fc(gen, consistency, doc, doc) == 0.0);
}

TEST_CASE("m_fc is zero when replacement preserves lead-sentence containment") {
    const LeadSentenceGenerator gen;
    const LexicalOverlapScorer consistency;
    const std::string original = "Alda reached Arbel early. The rest is detail.";
    const std::string counterfactual = "Alda reached Kosta early. The rest is detail.";
    // Each generated lead sentence is fully contained in its own document.
    CHECK(m_fc(gen, consistency, original, counterfactual) == doctest::Approx(0.0));
}

namespace {

// Always emits the same summary, mimicking a model stuck on its memorized
// entity: consistent with the original document, wrong for the replaced one.
class StuckGenerator final : public SummaryGenerator {
public:
    std::string id() const override { return "stuck"; }
    std::string generate(const std::string&) const override { return "Alda reached Arbel"; }
};

class ThrowingGenerator final : public SummaryGenerator {
public:
    std::string id() const override { return "throwing"; }
    std::string generate(const std::string&) const override { throw std::runtime_error("boom"); }
};

}  // namespace

TEST_CASE("m_fc is positive when generation ignores the replaced entity") {
    const StuckGenerator gen;
    const LexicalOverlapScorer consistency;
    const std::string original = "Alda reached Arbel early.";
    const std::string counterfactual = "Alda reached Kosta early.";
    // Original: all three words present -> 100. Counterfactual: "Arbel"
    // missing -> 66.67. Difference is one word out of three.
    const double v = m_fc(gen, consistency, original, counterfactual);
    CHECK(v == doctest::Approx(100.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("m_fc wraps generator exceptions") {
    const ThrowingGenerator gen;
    const LexicalOverlapScorer consistency;
    CHECK_THROWS_AS(m_fc(gen, consistency, "a", "b"), GeneratorFailure);
}

namespace {

CounterfactualSample arrest_counterfactual() {
    CounterfactualSample cf;
    cf.source_id = "arrest";
    cf.document = "Ece Heper, 50, was arrested on 30 December in the north-eastern town of "
                  "Kars. Portballintrae's penal code states that anybody who insults the "
                  "president can face up to four years in prison.";
    cf.summary = "A Canadian woman has been charged with insulting the president of "
                 "Portballintrae, her lawyer says.";
    cf.original_entity.surface = "Turkey";
    cf.original_entity.category = "GPE";
    cf.original_entity.doc_spans = {{75, 81}};
    cf.original_entity.summary_spans = {{66, 72}};
    cf.original_entity.first_token_pos = 11;
    cf.counterfactual_surface = "Portballintrae";
    cf.counterfactual_first_token_pos = 11;
    return cf;
}

}  // namespace

TEST_CASE("replacement_rate counts switched summaries only") {
    const auto cf = arrest_counterfactual();
    const std::vector<std::string> generated{
        "A Canadian woman has been charged with insulting the president of Turkey, her lawyer "
        "says.",
        "A Canadian woman has been charged with insulting the president of Turkey, her lawyer "
        "says.",
        "A Canadian woman has been arrested in Turkey for allegedly insulting the president of "
        "the Portballintrae province, her lawyer says.",
        "A Canadian woman has been arrested in Turkey on suspicion of insulting the president, "
        "her lawyer says.",
        "A Canadian woman has been arrested in Portballintrae on suspicion of insulting the "
        "president, her lawyer says.",
    };
    std::vector<std::pair<CounterfactualSample, std::string>> pairs;
    for (const auto& g : generated) pairs.emplace_back(cf, g);
    CHECK(replacement_rate(pairs) == doctest::Approx(0.2).epsilon(1e-12));

    // Neither entity present.
    std::vector<std::pair<CounterfactualSample, std::string>> neither{
        {cf, "A woman was arrested, her lawyer says."}};
    CHECK(replacement_rate(neither) == 0.0);

    CHECK_THROWS_AS(replacement_rate({}), EmptyInput);
}

TEST_CASE("replacement_rate is 1 on echoed counterfactual summaries and 0 on originals") {
    const auto corpus = fixtures::synthetic_corpus(30);
    const auto pool = fixtures::vocab_pool();
    const HashedScorer scorer(3);
    const auto options = fixtures::base_options(Scenario::S2, Group::Mid, 0.0, 2);
    const auto result =
        build_eval_set(corpus, pool, scorer, options, fixtures::vocab_ner(), kTok);
    REQUIRE_FALSE(result.samples.empty());
    std::map<std::string, Sample> by_id;
    for (const auto& s : corpus) by_id[s.id] = s;

    std::vector<std::pair<CounterfactualSample, std::string>> echoed, originals;
    for (const auto& cf : result.samples) {
        echoed.emplace_back(cf, cf.summary);
        originals.emplace_back(cf, by_id.at(cf.source_id).summary);
    }
    CHECK(replacement_rate(echoed) == 1.0);
    CHECK(replacement_rate(originals) == 0.0);
}

TEST_CASE("leakage checks partial word regurgitation, not just the full surface") {
    CounterfactualSample cf;
    cf.source_id = "p";
    cf.document = "Rupert Grint arrived.";
    cf.summary = "Rupert Grint stars.";
    cf.original_entity.surface = "Daniel Radcliffe";
    cf.original_entity.category = "PERSON";
    cf.original_entity.doc_spans = {{0, 16}};
    cf.original_entity.summary_spans = {{0, 16}};
    cf.counterfactual_surface = "Rupert Grint";

    std::vector<std::pair<CounterfactualSample, std::string>> pairs{
        {cf, "Rupert Grint stars while Daniel smiled."}};
    CHECK(replacement_rate(pairs) == 0.0);
    CHECK(replacement_rate(pairs, /*full_surface_only=*/true) == 1.0);
}

TEST_CASE("aggregate reproduces hand arithmetic over three seeds") {
    std::vector<MetricsReport> reports;
    const double values[3] = {2.14, 2.43, 2.55};
    for (int i = 0; i < 3; ++i) {
        MetricsReport r;
        r.metadata = {"data.jsonl", "scorer-x", "s2", "top", {static_cast<std::uint64_t>(i)}};
        r.per_sample.push_back({"a", std::nullopt, values[i], std::nullopt});
        r.aggregate["m_fc"] = {values[i], 0.0, 1};
        reports.push_back(std::move(r));
    }
    const auto combined = aggregate_reports(reports);
    REQUIRE(combined.aggregate.count("m_fc") == 1);
    CHECK(combined.aggregate.at("m_fc").mean ==
          doctest::Approx(2.3733333333333335).epsilon(1e-12));
    CHECK(combined.aggregate.at("m_fc").stddev ==
          doctest::Approx(0.21079215671683157).epsilon(1e-9));
    CHECK(combined.aggregate.at("m_fc").n == 3);
    CHECK(combined.metadata.seeds == std::vector<std::uint64_t>{0, 1, 2});

    // Recomputable from the per-seed rows.
    std::vector<double> again;
    for (const auto& row : combined.per_sample) again.push_back(*row.m_fc);
    const auto direct = aggregate_values(again);
    CHECK(direct.mean == combined.aggregate.at("m_fc").mean);
    CHECK(direct.stddev == combined.aggregate.at("m_fc").stddev);
}

TEST_CASE("aggregate flags single seeds and rejects mismatched runs") {
    MetricsReport r;
    r.metadata = {"data.jsonl", "scorer-x", "s2", "top", {7}};
    r.aggregate["m_cl"] = {0.5, 0.0, 4};
    const auto combined = aggregate_reports({r});
    CHECK(combined.aggregate.at("m_cl").stddev == 0.0);
    CHECK(combined.aggregate.at("m_cl").n == 1);
    CHECK(to_json(combined).at("metadata").value("single_seed", false));

    MetricsReport other = r;
    other.metadata.scorer_id = "scorer-y";
    CHECK_THROWS_AS(aggregate_reports({r, other}), MetadataMismatch);
}

TEST_CASE("aggregate_values matches a brute-force mean") {
    SplitMix64 rng(17);
    for (int round = 0; round < 20; ++round) {
        std::vector<double> values;
        const std::size_t n = 1 + rng.bounded(30);
        for (std::size_t i = 0; i < n; ++i) values.push_back(rng.unit() * 10.0 - 5.0);
        double sum = 0.0;
        for (const double v : values) sum += v;
        const auto agg = aggregate_values(values);
        CHECK(std::abs(agg.mean - sum / static_cast<double>(n)) <= 1e-12);
    }
}
