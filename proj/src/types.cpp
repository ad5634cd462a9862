#include "factadapt/types.hpp"

#include "factadapt/text.hpp"

namespace factadapt {

std::string to_string(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Validation: return "validation";
        case Split::Test: return "test";
    }
    return "train";
}

std::string to_string(Group g) {
    switch (g) {
        case Group::Top: return "top";
        case Group::Mid: return "mid";
        case Group::Bot: return "bot";
    }
    return "mid";
}

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::S1: return "s1";
        case Scenario::S1Masked: return "s1-masked";
        case Scenario::S2: return "s2";
    }
    return "s1";
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "validation") return Split::Validation;
    if (s == "test") return Split::Test;
    throw ConfigError("unknown split: " + s);
}

Group group_from_string(const std::string& s) {
    if (s == "top") return Group::Top;
    if (s == "mid") return Group::Mid;
    if (s == "bot") return Group::Bot;
    throw ConfigError("unknown group: " + s + " (expected top|mid|bot)");
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "s1") return Scenario::S1;
    if (s == "s1-masked" || s == "s1_masked") return Scenario::S1Masked;
    if (s == "s2") return Scenario::S2;
    throw ConfigError("unknown scenario: " + s + " (expected s1|s1-masked|s2)");
}

void check(const GroupBoundaries& b) {
    if (!(0.0 < b.exclude_top && b.exclude_top < b.top_end && b.top_end < b.mid_end &&
          b.mid_end < 1.0)) {
        throw ConfigError("group boundaries must satisfy 0 < exclude_top < top_end < mid_end < 1");
    }
}

void check(const ValidationConfig& c) {
    const double lo = c.scenario == Scenario::S2 ? -1.0 : 0.0;
    if (c.threshold < lo || c.threshold > 1.0) {
        throw ConfigError("threshold " + std::to_string(c.threshold) + " outside [" +
                          std::to_string(lo) + ",1] for scenario " + to_string(c.scenario));
    }
}

void check_sample(const Sample& s) {
    if (s.id.empty()) throw MissingField("id");
    if (trim(s.document).empty()) throw EmptyText("document");
    if (trim(s.summary).empty()) throw EmptyText("summary");
}

void check_counterfactual(const CounterfactualSample& cf) {
    const std::string& original = cf.original_entity.surface;
    if (original.empty() || cf.counterfactual_surface.empty()) throw EmptyEntity();
    if (contains_word_bounded(cf.document, original)) {
        throw Error("counterfactual document still contains \"" + original + "\"");
    }
    if (contains_word_bounded(cf.summary, original)) {
        throw Error("counterfactual summary still contains \"" + original + "\"");
    }
    if (!contains_word_bounded(cf.summary, cf.counterfactual_surface)) {
        throw Error("counterfactual summary lacks \"" + cf.counterfactual_surface + "\"");
    }
}

bool same_run_metadata(const ReportMetadata& a, const ReportMetadata& b) {
    return a.dataset == b.dataset && a.scorer_id == b.scorer_id && a.scenario == b.scenario &&
           a.group == b.group;
}

}  // namespace factadapt
