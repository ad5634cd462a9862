#include "factadapt/http_scorer.hpp"

#include <httplib.h>
#include <json.hpp>

namespace factadapt {

namespace {

struct ParsedUrl {
    std::string host_port;  // scheme://host:port
    std::string path;
};

ParsedUrl parse_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("remote scorer url lacks scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

struct RemoteScorer::Impl {
    RemoteScorerConfig config;
    ParsedUrl url;
    mutable httplib::Client client;

    explicit Impl(RemoteScorerConfig cfg)
        : config(std::move(cfg)), url(parse_url(config.url)), client(url.host_port) {
        client.set_connection_timeout(0, config.timeout_ms * 1000);
        client.set_read_timeout(0, config.timeout_ms * 1000);
    }
};

RemoteScorer::RemoteScorer(RemoteScorerConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

RemoteScorer::~RemoteScorer() = default;

std::string RemoteScorer::id() const { return impl_->config.id; }

double RemoteScorer::first_token_likelihood(const std::string& document,
                                            std::span<const std::string> summary_prefix,
                                            const std::string& candidate_first_token) const {
    nlohmann::ordered_json body{
        {"document", document},
        {"prefix_tokens", std::vector<std::string>(summary_prefix.begin(), summary_prefix.end())},
        {"candidate_token", candidate_first_token}};
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= impl_->config.retries; ++attempt) {
        auto res = impl_->client.Post(impl_->url.path, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "http status " + std::to_string(res->status);
            continue;
        }
        try {
            const auto parsed = nlohmann::ordered_json::parse(res->body);
            const double p = parsed.at("probability").get<double>();
            if (p < 0.0 || p > 1.0) throw InvalidProbability(p);
            return p;
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("bad response body: ") + e.what();
        }
    }
    throw Error("remote scorer " + impl_->config.id + " failed after " +
                std::to_string(impl_->config.retries + 1) + " attempts: " + last_error);
}

}  // namespace factadapt
