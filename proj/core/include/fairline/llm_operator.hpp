#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "fairline/scenario.hpp"

namespace fairline::llm {

struct LlmConfig {
    std::string endpoint_url;
    std::string model_name;
    std::string api_key_env = "LLM_API_KEY";
    double temperature = 1.0;
    double timeout_s = 30.0;
    int max_retries = 3;
};

struct PromptBundle {
    std::string rendered_text;
    std::vector<std::vector<double>> parent_vectors_normalized;
    std::vector<double> parent_objective_values;
    int expected_dimension = 0;
};

/// Completion backend. complete() throws std::runtime_error on transport
/// failure; the retry loop treats that the same as an unparseable reply.
class Client {
   public:
    virtual ~Client() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

/// Offline deterministic stand-in: parses the parent vectors back out of the
/// prompt and replies with their componentwise mean plus seeded jitter of
/// at most +/-0.05, clamped to [0,1].
class MockClient : public Client {
   public:
    explicit MockClient(std::uint64_t seed = 1);
    std::string complete(const std::string& prompt) override;

   private:
    std::mt19937_64 rng_;
};

/// Chat-completions HTTP client (plain http endpoints; the API key is read
/// from the environment variable named in the config).
class HttpClient : public Client {
   public:
    explicit HttpClient(LlmConfig config);
    std::string complete(const std::string& prompt) override;

   private:
    LlmConfig config_;
};

/// Builds an HttpClient from LLM_ENDPOINT / LLM_API_KEY_VAR / LLM_MODEL.
/// Returns nullptr when LLM_ENDPOINT is unset.
std::unique_ptr<Client> make_client_from_env();

/// w_norm = (w - lb) / (ub - lb); rejects degenerate bounds.
std::vector<double> normalize(const WindowVector& w, const WindowBounds& bounds);

/// Inverse of normalize; components outside [0,1] are clamped first.
WindowVector denormalize(const std::vector<double>& o, const WindowBounds& bounds);

PromptBundle build_prompt(const std::vector<std::vector<double>>& parents_norm,
                          const std::vector<double>& values, int num_objectives);

/// Extracts every <start>...<end> span; a vector is kept iff it has exactly
/// dim finite comma-separated components.
std::vector<std::vector<double>> parse_response(const std::string& text, int dim);

using FallbackOperator = std::function<WindowVector(
    const WindowVector&, const WindowVector&, std::mt19937_64&)>;

/// Up to max_retries prompt/complete/parse attempts; the first valid vector
/// is clamped to [0,1] and denormalized. A component outside [-0.5, 1.5]
/// invalidates the whole vector. Exhausted retries fall back to the supplied
/// operator on the first two parents.
WindowVector llm_mate(const std::vector<WindowVector>& parents,
                      const std::vector<double>& values, Client& client,
                      const WindowBounds& bounds, int num_objectives,
                      const FallbackOperator& fallback, std::mt19937_64& rng,
                      int max_retries = 3);

}  // namespace fairline::llm
