#pragma once

#include <memory>
#include <string>

#include "factadapt/adapters.hpp"

namespace factadapt {

struct RemoteScorerConfig {
    std::string url;  // e.g. http://127.0.0.1:8080/score
    int timeout_ms = 5000;
    int retries = 2;
    std::string id = "remote";
};

// Likelihood scorer backed by a JSON-over-HTTP endpoint. Request body is
// {"document", "prefix_tokens": [...], "candidate_token"}; the response must
// carry {"probability": <0..1>}.
class RemoteScorer final : public LikelihoodScorer {
public:
    explicit RemoteScorer(RemoteScorerConfig config);
    ~RemoteScorer() override;

    std::string id() const override;
    double first_token_likelihood(const std::string& document,
                                  std::span<const std::string> summary_prefix,
                                  const std::string& candidate_first_token) const override;
    bool thread_safe() const override { return false; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace factadapt
