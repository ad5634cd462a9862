#include "factadapt/dataset_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "factadapt/hash.hpp"
#include "factadapt/text.hpp"

namespace factadapt {

namespace {

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

// Applies fn(line_json, line_number) to every non-blank line.
template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& fn) {
    auto in = open_for_read(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        Json parsed;
        try {
            parsed = Json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        fn(parsed, line_no);
    }
}

}  // namespace

std::vector<Sample> ingest_dataset(const std::filesystem::path& path) {
    std::vector<Sample> samples;
    std::map<std::string, std::vector<std::size_t>> id_lines;
    for_each_jsonl(path, [&](const Json& j, std::size_t line_no) {
        try {
            samples.push_back(validate_sample(j));
        } catch (const MissingField& e) {
            throw MissingField(e.field, line_no);
        } catch (const Error& e) {
            throw ParseError(line_no, e.what());
        }
        id_lines[samples.back().id].push_back(line_no);
    });
    for (const auto& [id, lines] : id_lines) {
        if (lines.size() > 1) {
            std::string where;
            for (std::size_t i = 0; i < lines.size(); ++i) {
                if (i > 0) where += ", ";
                where += std::to_string(lines[i]);
            }
            throw DuplicateId("duplicate id \"" + id + "\" on lines " + where);
        }
    }
    return samples;
}

void write_samples_jsonl(const std::vector<Sample>& samples, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    for (const auto& s : samples) out << to_json(s).dump() << '\n';
}

std::vector<CounterfactualSample> read_counterfactuals_jsonl(const std::filesystem::path& path) {
    std::vector<CounterfactualSample> out;
    for_each_jsonl(path, [&](const Json& j, std::size_t line_no) {
        try {
            out.push_back(counterfactual_from_json(j));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, e.what());
        }
    });
    return out;
}

void write_counterfactuals_jsonl(const std::vector<CounterfactualSample>& samples,
                                 const std::filesystem::path& path) {
    auto out = open_for_write(path);
    for (const auto& cf : samples) out << to_json(cf).dump() << '\n';
}

Json contrastive_to_json(const ContrastiveRecord& record) {
    return Json{{"schema", "factadapt/contrastive/1"},
                {"document", record.document},
                {"positives", record.positives},
                {"negatives", record.negatives},
                {"provenance",
                 {{"source_id", record.provenance.source_id},
                  {"original_surface", record.provenance.original_surface},
                  {"counterfactual_surfaces", record.provenance.counterfactual_surfaces}}}};
}

ContrastiveRecord contrastive_from_json(const Json& j) {
    ContrastiveRecord record;
    record.document = j.at("document").get<std::string>();
    record.positives = j.at("positives").get<std::vector<std::string>>();
    record.negatives = j.value("negatives", std::vector<std::string>{});
    if (j.contains("provenance")) {
        const auto& p = j.at("provenance");
        record.provenance.source_id = p.value("source_id", std::string{});
        record.provenance.original_surface = p.value("original_surface", std::string{});
        record.provenance.counterfactual_surfaces =
            p.value("counterfactual_surfaces", std::vector<std::string>{});
    } else if (j.contains("source_id")) {
        record.provenance.source_id = j.at("source_id").get<std::string>();
    }
    return record;
}

std::vector<ContrastiveRecord> read_contrastive_jsonl(const std::filesystem::path& path) {
    std::vector<ContrastiveRecord> out;
    for_each_jsonl(path, [&](const Json& j, std::size_t line_no) {
        try {
            out.push_back(contrastive_from_json(j));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, e.what());
        }
    });
    return out;
}

void write_contrastive_jsonl(const std::vector<ContrastiveRecord>& records,
                             const std::filesystem::path& path) {
    auto out = open_for_write(path);
    for (const auto& record : records) out << contrastive_to_json(record).dump() << '\n';
}

void write_reason_log_jsonl(const std::vector<ReasonEntry>& reasons,
                            const std::filesystem::path& path) {
    auto out = open_for_write(path);
    for (const auto& r : reasons) {
        out << Json{{"sample_id", r.sample_id}, {"stage", r.stage}, {"code", r.code}}.dump() << '\n';
    }
}

std::string file_fingerprint(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    std::uint64_t h = kFnvOffset;
    char buffer[1 << 16];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        h = fnv1a64(std::string_view(buffer, static_cast<std::size_t>(in.gcount())), h);
    }
    return hex64(h);
}

}  // namespace factadapt
