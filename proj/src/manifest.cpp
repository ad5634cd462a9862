#include "factadapt/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace factadapt {

Json to_json(const RunManifest& manifest) {
    Json inputs = Json::object();
    for (const auto& [path, fingerprint] : manifest.input_fingerprints) {
        inputs[path] = fingerprint;
    }
    return Json{{"schema", "factadapt/manifest/1"},
                {"command", manifest.command},
                {"config", manifest.config},
                {"inputs", std::move(inputs)},
                {"scorer_id", manifest.scorer_id},
                {"eval_set",
                 {{"scorer", manifest.scorer_id},
                  {"dataset", manifest.dataset},
                  {"group", manifest.group},
                  {"scenario", manifest.scenario}}},
                {"seeds", manifest.seeds},
                {"outputs", manifest.outputs},
                {"started_at", manifest.started_at},
                {"finished_at", manifest.finished_at}};
}

std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

void write_manifest_atomic(const RunManifest& manifest, const std::filesystem::path& path) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write " + tmp);
        out << to_json(manifest).dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace factadapt
