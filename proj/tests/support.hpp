#pragma once

// Shared fixtures: deterministic vocabularies, a regex recognizer over them,
// and synthetic corpora sized for desk-scale pipeline tests.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "factadapt/adapters.hpp"
#include "factadapt/construction.hpp"
#include "factadapt/doubles.hpp"
#include "factadapt/pool.hpp"
#include "factadapt/rng.hpp"
#include "factadapt/types.hpp"

namespace fixtures {

inline const std::vector<std::string>& person_names() {
    static const std::vector<std::string> names{
        "Alda", "Brin", "Cale", "Dorn", "Elva", "Finn", "Gera", "Hale", "Iver", "Jora",
        "Kath", "Lorn", "Mira", "Nolo", "Orin", "Pell", "Quid", "Rosk", "Sena", "Tovi"};
    return names;
}

inline const std::vector<std::string>& place_names() {
    static const std::vector<std::string> names{
        "Arbel", "Belgo", "Cardo", "Drome", "Elsin", "Fargo", "Goren", "Halma", "Istra", "Jelka",
        "Kosta", "Lumen", "Marga", "Norva", "Ostia", "Palto", "Quona", "Rivas", "Selto", "Ulmen"};
    return names;
}

inline const std::vector<std::string>& date_words() {
    static const std::vector<std::string> names{"Monday", "Tuesday", "Friday", "Sunday"};
    return names;
}

inline std::map<std::string, std::vector<std::string>> vocab_patterns() {
    std::map<std::string, std::vector<std::string>> patterns;
    for (const auto& n : person_names()) patterns["PERSON"].push_back("\\b" + n + "\\b");
    for (const auto& n : place_names()) patterns["GPE"].push_back("\\b" + n + "\\b");
    for (const auto& n : date_words()) patterns["DATE"].push_back("\\b" + n + "\\b");
    return patterns;
}

inline const factadapt::RegexEntityRecognizer& vocab_ner() {
    static const factadapt::RegexEntityRecognizer ner(vocab_patterns());
    return ner;
}

// Braced pattern maps are ambiguous at the constructor; route them through
// an explicit parameter type.
inline factadapt::RegexEntityRecognizer make_recognizer(
    const std::map<std::string, std::vector<std::string>>& patterns) {
    return factadapt::RegexEntityRecognizer(patterns);
}

// Corpus of document/summary pairs where sample i mentions one person and
// one place in both fields. Every vocab entity lands in the pool when the
// corpus is big enough.
inline std::vector<factadapt::Sample> synthetic_corpus(std::size_t n) {
    std::vector<factadapt::Sample> corpus;
    const auto& people = person_names();
    const auto& places = place_names();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& person = people[i % people.size()];
        const auto& place = places[(i * 7 + 3) % places.size()];
        factadapt::Sample s;
        s.id = "sample-" + std::to_string(i);
        s.document = person + " visited " + place + " on a grey morning i" + std::to_string(i) +
                     ". Officials in " + place + " said " + person + " spoke briefly.";
        s.summary = "Visit i" + std::to_string(i) + " saw " + person + " speak in " + place + ".";
        corpus.push_back(std::move(s));
    }
    return corpus;
}

inline factadapt::CandidatePool vocab_pool() {
    factadapt::CandidatePool pool;
    std::uint64_t f = 1;
    for (const auto& n : person_names()) pool.by_category["PERSON"].push_back({n, 1 + (f++ % 5)});
    f = 1;
    for (const auto& n : place_names()) pool.by_category["GPE"].push_back({n, 1 + (f++ % 5)});
    return pool;
}

inline factadapt::EvalSetOptions base_options(factadapt::Scenario scenario, factadapt::Group group,
                                              double threshold, std::uint64_t seed) {
    factadapt::EvalSetOptions options;
    options.validation.scenario = scenario;
    options.validation.threshold = threshold;
    options.group.group = group;
    options.seed = seed;
    return options;
}

}  // namespace fixtures
