#include "factadapt/codec.hpp"

namespace factadapt {

namespace {

Json spans_to_json(const std::vector<CharSpan>& spans) {
    Json arr = Json::array();
    for (const auto& s : spans) arr.push_back({s.begin, s.end});
    return arr;
}

std::vector<CharSpan> spans_from_json(const Json& j) {
    std::vector<CharSpan> out;
    for (const auto& e : j) out.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
    return out;
}

}  // namespace

Json to_json(const Sample& s) {
    return Json{{"id", s.id},
                {"document", s.document},
                {"summary", s.summary},
                {"split", to_string(s.split)}};
}

Sample sample_from_json(const Json& j) {
    Sample s;
    s.id = j.at("id").get<std::string>();
    s.document = j.at("document").get<std::string>();
    s.summary = j.at("summary").get<std::string>();
    if (j.contains("split")) s.split = split_from_string(j.at("split").get<std::string>());
    return s;
}

Json to_json(const EntityMention& m) {
    return Json{{"surface", m.surface},
                {"category", m.category},
                {"doc_spans", spans_to_json(m.doc_spans)},
                {"summary_spans", spans_to_json(m.summary_spans)},
                {"first_token_pos", m.first_token_pos}};
}

EntityMention mention_from_json(const Json& j) {
    EntityMention m;
    m.surface = j.at("surface").get<std::string>();
    m.category = j.at("category").get<std::string>();
    m.doc_spans = spans_from_json(j.at("doc_spans"));
    m.summary_spans = spans_from_json(j.at("summary_spans"));
    m.first_token_pos = j.at("first_token_pos").get<std::size_t>();
    return m;
}

Json to_json(const PoolEntry& e, const std::string& category) {
    return Json{{"surface", e.surface}, {"category", category}, {"frequency", e.frequency}};
}

Json to_json(const CandidatePool& p) {
    Json cats = Json::object();
    for (const auto& [category, entries] : p.by_category) {
        Json arr = Json::array();
        for (const auto& e : entries) arr.push_back({{"surface", e.surface}, {"frequency", e.frequency}});
        cats[category] = std::move(arr);
    }
    return Json{{"by_category", std::move(cats)}};
}

CandidatePool pool_from_json(const Json& j) {
    CandidatePool p;
    for (const auto& [category, entries] : j.at("by_category").items()) {
        auto& bucket = p.by_category[category];
        for (const auto& e : entries) {
            bucket.push_back({e.at("surface").get<std::string>(), e.at("frequency").get<std::uint64_t>()});
        }
    }
    return p;
}

Json to_json(const GroupSpec& g) {
    return Json{{"boundaries",
                 {{"exclude_top", g.boundaries.exclude_top},
                  {"top_end", g.boundaries.top_end},
                  {"mid_end", g.boundaries.mid_end}}},
                {"group", to_string(g.group)}};
}

GroupSpec group_spec_from_json(const Json& j) {
    GroupSpec g;
    const auto& b = j.at("boundaries");
    g.boundaries.exclude_top = b.at("exclude_top").get<double>();
    g.boundaries.top_end = b.at("top_end").get<double>();
    g.boundaries.mid_end = b.at("mid_end").get<double>();
    g.group = group_from_string(j.at("group").get<std::string>());
    return g;
}

Json to_json(const ValidationConfig& c) {
    return Json{{"scenario", to_string(c.scenario)},
                {"threshold", c.threshold},
                {"null_document", c.null_document},
                {"mask_token", c.mask_token}};
}

ValidationConfig validation_config_from_json(const Json& j) {
    ValidationConfig c;
    c.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    c.threshold = j.at("threshold").get<double>();
    if (j.contains("null_document")) c.null_document = j.at("null_document").get<std::string>();
    if (j.contains("mask_token")) c.mask_token = j.at("mask_token").get<std::string>();
    return c;
}

Json to_json(const CounterfactualSample& cf) {
    return Json{{"schema", "factadapt/counterfactual/1"},
                {"source_id", cf.source_id},
                {"document", cf.document},
                {"summary", cf.summary},
                {"original_entity", to_json(cf.original_entity)},
                {"counterfactual_surface", cf.counterfactual_surface},
                {"counterfactual_first_token_pos", cf.counterfactual_first_token_pos},
                {"group", to_string(cf.group)},
                {"scenario", to_string(cf.scenario)},
                {"validation_score", cf.validation_score},
                {"rng_seed", cf.rng_seed}};
}

CounterfactualSample counterfactual_from_json(const Json& j) {
    CounterfactualSample cf;
    cf.source_id = j.at("source_id").get<std::string>();
    cf.document = j.at("document").get<std::string>();
    cf.summary = j.at("summary").get<std::string>();
    cf.original_entity = mention_from_json(j.at("original_entity"));
    cf.counterfactual_surface = j.at("counterfactual_surface").get<std::string>();
    cf.counterfactual_first_token_pos = j.at("counterfactual_first_token_pos").get<std::size_t>();
    cf.group = group_from_string(j.at("group").get<std::string>());
    cf.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    cf.validation_score = j.at("validation_score").get<double>();
    cf.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    return cf;
}

Json to_json(const MetricsReport& r) {
    Json per_sample = Json::array();
    for (const auto& e : r.per_sample) {
        Json row{{"source_id", e.source_id}};
        if (e.m_cl) row["m_cl"] = *e.m_cl;
        if (e.m_fc) row["m_fc"] = *e.m_fc;
        if (e.replaced) row["replaced"] = *e.replaced;
        per_sample.push_back(std::move(row));
    }
    Json aggregate = Json::object();
    for (const auto& [name, agg] : r.aggregate) {
        aggregate[name] = {{"mean", agg.mean}, {"stddev", agg.stddev}, {"n", agg.n}};
    }
    Json metadata{{"dataset", r.metadata.dataset},
                  {"scorer_id", r.metadata.scorer_id},
                  {"scenario", r.metadata.scenario},
                  {"group", r.metadata.group},
                  {"seeds", r.metadata.seeds}};
    if (r.metadata.seeds.size() == 1) metadata["single_seed"] = true;
    return Json{{"schema", "factadapt/metrics-report/1"},
                {"metadata", std::move(metadata)},
                {"per_sample", std::move(per_sample)},
                {"aggregate", std::move(aggregate)}};
}

MetricsReport report_from_json(const Json& j) {
    MetricsReport r;
    const auto& md = j.at("metadata");
    r.metadata.dataset = md.at("dataset").get<std::string>();
    r.metadata.scorer_id = md.at("scorer_id").get<std::string>();
    r.metadata.scenario = md.at("scenario").get<std::string>();
    r.metadata.group = md.at("group").get<std::string>();
    r.metadata.seeds = md.at("seeds").get<std::vector<std::uint64_t>>();
    for (const auto& row : j.at("per_sample")) {
        PerSampleMetrics e;
        e.source_id = row.at("source_id").get<std::string>();
        if (row.contains("m_cl")) e.m_cl = row.at("m_cl").get<double>();
        if (row.contains("m_fc")) e.m_fc = row.at("m_fc").get<double>();
        if (row.contains("replaced")) e.replaced = row.at("replaced").get<bool>();
        r.per_sample.push_back(std::move(e));
    }
    for (const auto& [name, agg] : j.at("aggregate").items()) {
        r.aggregate[name] = {agg.at("mean").get<double>(), agg.at("stddev").get<double>(),
                             agg.at("n").get<std::size_t>()};
    }
    return r;
}

Sample validate_sample(const Json& raw) {
    if (!raw.is_object()) throw MissingField("id");
    for (const char* field : {"id", "document", "summary"}) {
        if (!raw.contains(field) || !raw.at(field).is_string()) throw MissingField(field);
    }
    Sample s;
    s.id = raw.at("id").get<std::string>();
    s.document = raw.at("document").get<std::string>();
    s.summary = raw.at("summary").get<std::string>();
    if (raw.contains("split")) s.split = split_from_string(raw.at("split").get<std::string>());
    check_sample(s);
    return s;
}

}  // namespace factadapt
