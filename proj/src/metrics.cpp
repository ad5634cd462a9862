#include "factadapt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "factadapt/replacement.hpp"
#include "factadapt/text.hpp"

namespace factadapt {

namespace {

double checked_probability(double p) {
    if (p < 0.0 || p > 1.0 || !std::isfinite(p)) throw InvalidProbability(p);
    return p;
}

}  // namespace

double m_cl(const LikelihoodScorer& model, const Sample& original, const CounterfactualSample& cf,
            const Tokenizer& tokenizer) {
    const auto tokens_original = tokenizer.tokenize(original.summary);
    const auto tokens_counterfactual = tokenizer.tokenize(cf.summary);
    const std::size_t t_original = cf.original_entity.first_token_pos;
    const std::size_t t_counterfactual = cf.counterfactual_first_token_pos;
    if (t_original >= tokens_original.size()) {
        throw PositionMismatch("token position " + std::to_string(t_original) +
                               " exceeds original summary length " +
                               std::to_string(tokens_original.size()));
    }
    if (t_counterfactual >= tokens_counterfactual.size()) {
        throw PositionMismatch("token position " + std::to_string(t_counterfactual) +
                               " exceeds counterfactual summary length " +
                               std::to_string(tokens_counterfactual.size()));
    }
    const std::span<const std::string> original_prefix(tokens_original.data(), t_original);
    const std::span<const std::string> counterfactual_prefix(tokens_counterfactual.data(),
                                                             t_counterfactual);
    const double p_original = checked_probability(model.first_token_likelihood(
        original.document, original_prefix, first_token(cf.original_entity.surface, tokenizer)));
    const double p_counterfactual = checked_probability(model.first_token_likelihood(
        cf.document, counterfactual_prefix, first_token(cf.counterfactual_surface, tokenizer)));
    return p_original - p_counterfactual;
}

double m_fc(const SummaryGenerator& generator, const ConsistencyScorer& consistency,
            const std::string& original_document, const std::string& counterfactual_document) {
    auto generate = [&](const std::string& document) {
        try {
            return generator.generate(document);
        } catch (const std::exception& e) {
            throw GeneratorFailure(std::string(generator.id()) + ": " + e.what());
        }
    };
    const double score_original = consistency.score(original_document, generate(original_document));
    const double score_counterfactual =
        consistency.score(counterfactual_document, generate(counterfactual_document));
    if (!std::isfinite(score_original) || !std::isfinite(score_counterfactual)) {
        throw Error("consistency scorer " + consistency.id() + " returned a non-finite value");
    }
    return score_original - score_counterfactual;
}

double replacement_rate(std::span<const std::pair<CounterfactualSample, std::string>> pairs,
                        bool full_surface_only, std::size_t min_word_len) {
    if (pairs.empty()) throw EmptyInput("replacement_rate needs at least one pair");
    std::size_t counted = 0;
    for (const auto& [cf, generated] : pairs) {
        if (!contains_word_bounded(generated, cf.counterfactual_surface)) continue;
        bool leaked = contains_word_bounded(generated, cf.original_entity.surface);
        if (!leaked && !full_surface_only) {
            for (const auto& word : replaced_words(cf.original_entity.surface,
                                                   cf.counterfactual_surface, min_word_len)) {
                if (contains_word_bounded(generated, word)) {
                    leaked = true;
                    break;
                }
            }
        }
        if (!leaked) ++counted;
    }
    return static_cast<double>(counted) / static_cast<double>(pairs.size());
}

MetricAggregate aggregate_values(std::span<const double> values) {
    MetricAggregate agg;
    agg.n = values.size();
    if (values.empty()) return agg;
    double sum = 0.0;
    for (const double v : values) sum += v;
    agg.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double squares = 0.0;
        for (const double v : values) squares += (v - agg.mean) * (v - agg.mean);
        agg.stddev = std::sqrt(squares / static_cast<double>(values.size() - 1));
    }
    return agg;
}

MetricsReport make_report(std::vector<PerSampleMetrics> per_sample, ReportMetadata metadata) {
    MetricsReport report;
    report.per_sample = std::move(per_sample);
    report.metadata = std::move(metadata);
    std::vector<double> cl, fc, replaced;
    for (const auto& row : report.per_sample) {
        if (row.m_cl) cl.push_back(*row.m_cl);
        if (row.m_fc) fc.push_back(*row.m_fc);
        if (row.replaced) replaced.push_back(*row.replaced ? 1.0 : 0.0);
    }
    if (!cl.empty()) report.aggregate["m_cl"] = aggregate_values(cl);
    if (!fc.empty()) report.aggregate["m_fc"] = aggregate_values(fc);
    if (!replaced.empty()) report.aggregate["replacement_rate"] = aggregate_values(replaced);
    return report;
}

MetricsReport aggregate_reports(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw EmptyInput("no reports to aggregate");
    for (const auto& report : reports) {
        if (!same_run_metadata(reports.front().metadata, report.metadata)) {
            throw MetadataMismatch("reports describe different runs (dataset/scorer/scenario/group)");
        }
    }
    MetricsReport out;
    out.metadata = reports.front().metadata;
    out.metadata.seeds.clear();

    std::map<std::string, std::vector<double>> values;
    for (const auto& report : reports) {
        for (const auto seed : report.metadata.seeds) {
            if (std::find(out.metadata.seeds.begin(), out.metadata.seeds.end(), seed) ==
                out.metadata.seeds.end()) {
                out.metadata.seeds.push_back(seed);
            }
        }
        std::string label = "seed:";
        for (std::size_t i = 0; i < report.metadata.seeds.size(); ++i) {
            if (i > 0) label += ',';
            label += std::to_string(report.metadata.seeds[i]);
        }
        PerSampleMetrics row;
        row.source_id = label;
        for (const auto& [name, agg] : report.aggregate) {
            values[name].push_back(agg.mean);
            if (name == "m_cl") row.m_cl = agg.mean;
            if (name == "m_fc") row.m_fc = agg.mean;
        }
        out.per_sample.push_back(std::move(row));
    }
    for (const auto& [name, vals] : values) {
        out.aggregate[name] = aggregate_values(vals);
    }
    return out;
}

std::string report_to_csv(const MetricsReport& report) {
    std::ostringstream csv;
    csv << "source_id,m_cl,m_fc,replaced\n";
    csv.precision(17);
    for (const auto& row : report.per_sample) {
        csv << row.source_id << ',';
        if (row.m_cl) csv << *row.m_cl;
        csv << ',';
        if (row.m_fc) csv << *row.m_fc;
        csv << ',';
        if (row.replaced) csv << (*row.replaced ? "true" : "false");
        csv << '\n';
    }
    return csv.str();
}

}  // namespace factadapt
