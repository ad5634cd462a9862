#include <doctest.h>

#include "factadapt/replacement.hpp"
#include "factadapt/doubles.hpp"
#include "factadapt/rng.hpp"
#include "factadapt/text.hpp"
#include "support.hpp"

using namespace factadapt;

TEST_CASE("word_map pairs words proportionally by position") {
    using Pairs = std::vector<std::pair<std::string, std::string>>;
    CHECK(word_map("Daniel Radcliffe", "Rupert Grint") ==
          Pairs{{"Daniel", "Rupert"}, {"Radcliffe", "Grint"}});
    CHECK(word_map("Paris", "Paris") == Pairs{});
    CHECK(word_map("A B C", "X Y") == Pairs{{"A", "X"}, {"B", "X"}, {"C", "Y"}});
    CHECK(word_map("A", "X Y Z") == Pairs{{"A", "X"}});
    CHECK_THROWS_AS(word_map("", "X"), EmptyEntity);
    CHECK_THROWS_AS(word_map("A", "  "), EmptyEntity);
}

TEST_CASE("apply_replacement rewrites possessives and every occurrence") {
    const WhitespaceTokenizer tok;
    Sample s;
    s.id = "turkey";
    s.document = "Turkey's penal code states that anybody who insults the president of Turkey "
                 "can face prison.";
    s.summary = "A woman was charged with insulting the president of Turkey, her lawyer says.";
    EntityMention entity;
    entity.surface = "Turkey";
    entity.category = "GPE";
    entity.doc_spans = {{0, 6}};
    entity.summary_spans = {{51, 57}};
    entity.first_token_pos = 9;

    const auto result = apply_replacement(s, entity, "Portballintrae", tok);
    CHECK(result.document.find("Portballintrae's penal code") == 0);
    CHECK(result.document.find("Turkey") == std::string::npos);
    CHECK(result.summary.find("president of Portballintrae,") != std::string::npos);
    CHECK(result.summary.find("Turkey") == std::string::npos);
    CHECK(result.first_token_pos == 9);
}

TEST_CASE("apply_replacement carries word-level substitutions to stray words") {
    const WhitespaceTokenizer tok;
    Sample s;
    s.id = "dr";
    s.document = "Daniel Radcliffe arrived. Daniel waved to fans.";
    s.summary = "Daniel Radcliffe stars. Daniel smiled.";
    EntityMention entity;
    entity.surface = "Daniel Radcliffe";
    entity.category = "PERSON";
    entity.doc_spans = {{0, 16}};
    entity.summary_spans = {{0, 16}};
    entity.first_token_pos = 0;

    const auto result = apply_replacement(s, entity, "Rupert Grint", tok);
    CHECK(result.summary == "Rupert Grint stars. Rupert smiled.");
    CHECK(result.document == "Rupert Grint arrived. Rupert waved to fans.");
    CHECK(result.first_token_pos == 0);
}

TEST_CASE("apply_replacement reports missing and degenerate entities") {
    const WhitespaceTokenizer tok;
    Sample s{"x", "No entity here.", "Alda spoke.", Split::Train};
    EntityMention entity;
    entity.surface = "Alda";
    entity.category = "PERSON";
    entity.summary_spans = {{0, 4}};
    CHECK_THROWS_AS(apply_replacement(s, entity, "Brin", tok), EntityNotFound);

    Sample both{"y", "Alda was here.", "Alda spoke.", Split::Train};
    CHECK_THROWS_AS(apply_replacement(both, entity, "Aldan", tok), DegenerateReplacement);
    CHECK_THROWS_AS(apply_replacement(both, entity, "Alda", tok), DegenerateReplacement);
}

TEST_CASE("locate_first_token finds the earliest word-bounded occurrence") {
    const WhitespaceTokenizer tok;
    CHECK(locate_first_token("John runs", "John", tok) == 0);
    CHECK(locate_first_token("Big John runs", "John", tok) == 1);
    CHECK(locate_first_token("He met John then John left", "John", tok) == 2);
    CHECK(locate_first_token("Johnson met John", "John", tok) == 2);
    CHECK_THROWS_AS(locate_first_token("nothing here", "John", tok), EntityNotFound);
}

TEST_CASE("short words are left alone by the word-level pass") {
    // Single-letter words would corrupt unrelated text, so they are skipped.
    const auto out = replace_entity_text("J Smith met J.", "J Smith", "A Brown");
    CHECK(out == "A Brown met J.");
}

TEST_CASE("words shared between the two surfaces stay put") {
    const auto once = replace_entity_text("Alda Brin spoke. Alda waved. Brin sat.", "Alda Brin",
                                          "Brin Alda");
    const auto twice = replace_entity_text(once, "Alda Brin", "Brin Alda");
    CHECK(once == twice);
    CHECK(count_word_bounded(once, "Alda Brin") == 0);
}

namespace {

struct RandomCase {
    std::string original;
    std::string counterfactual;
    Sample sample;
    EntityMention mention;
};

// Original entities use person names, counterfactuals use place names, so
// the two word sets never collide.
RandomCase make_case(SplitMix64& rng) {
    const auto& from_vocab = fixtures::person_names();
    const auto& to_vocab = fixtures::place_names();
    auto pick_words = [&](const std::vector<std::string>& vocab, std::size_t count) {
        std::string out;
        for (std::size_t i = 0; i < count; ++i) {
            if (i > 0) out += ' ';
            out += vocab[rng.bounded(vocab.size())];
        }
        return out;
    };
    RandomCase c;
    c.original = pick_words(from_vocab, 1 + rng.bounded(3));
    c.counterfactual = pick_words(to_vocab, 1 + rng.bounded(3));
    const auto original_words = split_whitespace(c.original);

    auto build_text = [&](bool with_full) {
        std::string text = "Report";
        const std::size_t chunks = 1 + rng.bounded(4);
        for (std::size_t i = 0; i < chunks; ++i) {
            switch (rng.bounded(3)) {
                case 0: text += " " + c.original + "."; break;
                case 1: text += " " + original_words[rng.bounded(original_words.size())] + ","; break;
                default: text += " filler" + std::to_string(rng.bounded(100)); break;
            }
        }
        if (with_full) text += " " + c.original + " closed.";
        return text;
    };
    c.sample.id = "r";
    c.sample.document = build_text(true);
    c.sample.summary = build_text(true);
    c.mention.surface = c.original;
    c.mention.category = "PERSON";
    const auto doc_hits = find_word_bounded(c.sample.document, c.original);
    const auto sum_hits = find_word_bounded(c.sample.summary, c.original);
    for (const auto h : doc_hits) c.mention.doc_spans.push_back({h, h + c.original.size()});
    for (const auto h : sum_hits) c.mention.summary_spans.push_back({h, h + c.original.size()});
    const WhitespaceTokenizer tok;
    c.mention.first_token_pos = tok.char_to_token(c.sample.summary, sum_hits.front());
    return c;
}

}  // namespace

TEST_CASE("replacement invariants hold over 500 randomized samples") {
    const WhitespaceTokenizer tok;
    SplitMix64 rng(4242);
    for (int i = 0; i < 500; ++i) {
        const auto c = make_case(rng);
        const auto result = apply_replacement(c.sample, c.mention, c.counterfactual, tok);

        // No word-bounded trace of the original surface anywhere.
        CHECK(count_word_bounded(result.document, c.original) == 0);
        CHECK(count_word_bounded(result.summary, c.original) == 0);

        // The word-level pass can only add occurrences of the counterfactual.
        CHECK(find_all(result.summary, c.counterfactual).size() >=
              find_all(c.sample.summary, c.original).size());

        // Idempotence of the substitution steps.
        CHECK(replace_entity_text(result.document, c.original, c.counterfactual) ==
              result.document);
        CHECK(replace_entity_text(result.summary, c.original, c.counterfactual) == result.summary);
    }
}

TEST_CASE("character growth matches the occurrence count when no stray words exist") {
    const std::string text = "Alda Brin spoke and Alda Brin left quietly qq17.";
    const std::string replaced = replace_entity_text(text, "Alda Brin", "Kosta");
    const auto occurrences = find_all(text, "Alda Brin").size();
    const long long delta = static_cast<long long>(std::string("Kosta").size()) -
                            static_cast<long long>(std::string("Alda Brin").size());
    CHECK(static_cast<long long>(replaced.size()) ==
          static_cast<long long>(text.size()) + delta * static_cast<long long>(occurrences));
}
