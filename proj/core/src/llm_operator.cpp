#include "fairline/llm_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace fairline::llm {

namespace {

std::string render(double x, int decimals = 3) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
    return buf;
}

std::string render_vector(const std::vector<double>& v, int decimals = 3) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += render(v[i], decimals);
    }
    return out;
}

std::vector<std::string> extract_spans(const std::string& text) {
    std::vector<std::string> spans;
    std::size_t pos = 0;
    while (true) {
        const std::size_t a = text.find("<start>", pos);
        if (a == std::string::npos) break;
        const std::size_t b = text.find("<end>", a + 7);
        if (b == std::string::npos) break;
        spans.push_back(text.substr(a + 7, b - (a + 7)));
        pos = b + 5;
    }
    return spans;
}

}  // namespace

std::vector<double> normalize(const WindowVector& w, const WindowBounds& bounds) {
    const double span = bounds.upper_ms - bounds.lower_ms;
    if (!(span > 0)) throw std::invalid_argument("normalize: degenerate window bounds");
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = (w[i] - bounds.lower_ms) / span;
    return out;
}

WindowVector denormalize(const std::vector<double>& o, const WindowBounds& bounds) {
    const double span = bounds.upper_ms - bounds.lower_ms;
    if (!(span > 0)) throw std::invalid_argument("denormalize: degenerate window bounds");
    WindowVector out(o.size());
    for (std::size_t i = 0; i < o.size(); ++i) {
        const double c = std::clamp(o[i], 0.0, 1.0);
        out[i] = bounds.lower_ms + c * span;
    }
    return out;
}

PromptBundle build_prompt(const std::vector<std::vector<double>>& parents_norm,
                          const std::vector<double>& values, int num_objectives) {
    if (parents_norm.size() < 2)
        throw std::invalid_argument("build_prompt: at least two parents required");
    if (parents_norm.size() != values.size())
        throw std::invalid_argument("build_prompt: one value per parent required");
    const int dim = static_cast<int>(parents_norm.front().size());

    // Parents are listed in descending order of their scalarized value,
    // so the best one comes last.
    std::vector<std::size_t> order(parents_norm.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    PromptBundle bundle;
    bundle.expected_dimension = dim;
    std::ostringstream os;
    os << "Now you will help me minimize a " << num_objectives
       << " objective task. I have some vectors along with their objective "
          "values. The vectors are arranged in descending order of their "
          "values, where lower values are better. The dimension of each "
          "variable is " << dim << ", and every component lies in [0,1].\n\n";
    for (std::size_t k : order) {
        bundle.parent_vectors_normalized.push_back(parents_norm[k]);
        bundle.parent_objective_values.push_back(values[k]);
        os << "vector: <start>" << render_vector(parents_norm[k]) << "<end>\n";
        os << "value: <start>" << render(values[k]) << "<end>\n\n";
    }
    os << "Give me a new vector that is different from all vectors above and "
          "has an objective value smaller than the smallest value among "
          "them. The vector need to begin with <start> and end with <end>, "
          "with components separated by commas. Do not write code. Do not "
          "give any explanation.\n";
    bundle.rendered_text = os.str();
    return bundle;
}

std::vector<std::vector<double>> parse_response(const std::string& text, int dim) {
    std::vector<std::vector<double>> out;
    for (const std::string& span : extract_spans(text)) {
        std::vector<double> v;
        std::stringstream ss(span);
        std::string tok;
        bool ok = true;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                const double x = std::stod(tok, &used);
                while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
                    ++used;
                if (used != tok.size() || !std::isfinite(x)) {
                    ok = false;
                    break;
                }
                v.push_back(x);
            } catch (const std::exception&) {
                ok = false;
                break;
            }
        }
        if (ok && static_cast<int>(v.size()) == dim) out.push_back(std::move(v));
    }
    return out;
}

MockClient::MockClient(std::uint64_t seed) : rng_(seed) {}

std::string MockClient::complete(const std::string& prompt) {
    // Recover the parents from "vector:" lines only (value spans are scalars
    // and get filtered by arity once we know the dimension).
    std::vector<std::vector<double>> parents;
    std::stringstream ss(prompt);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("vector:", 0) != 0) continue;
        for (const std::string& span : extract_spans(line)) {
            std::vector<double> v;
            std::stringstream fs(span);
            std::string tok;
            while (std::getline(fs, tok, ',')) v.push_back(std::stod(tok));
            parents.push_back(std::move(v));
        }
    }
    if (parents.empty()) throw std::runtime_error("mock client: no parent vectors in prompt");
    const std::size_t dim = parents.front().size();
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    std::vector<double> child(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) {
        double mean = 0.0;
        for (const auto& p : parents) mean += p[d];
        mean /= static_cast<double>(parents.size());
        child[d] = std::clamp(mean + jitter(rng_), 0.0, 1.0);
    }
    std::ostringstream os;
    os << "<start>";
    for (std::size_t d = 0; d < dim; ++d) {
        if (d) os << ',';
        os << render(child[d], 6);
    }
    os << "<end>";
    return os.str();
}

HttpClient::HttpClient(LlmConfig config) : config_(std::move(config)) {
    if (config_.endpoint_url.empty())
        throw std::invalid_argument("HttpClient: empty endpoint URL");
}

std::string HttpClient::complete(const std::string& prompt) {
    const std::string& url = config_.endpoint_url;
    if (url.rfind("https://", 0) == 0)
        throw std::runtime_error("HttpClient: https endpoints require a TLS build");
    std::string rest = url;
    if (rest.rfind("http://", 0) == 0) rest = rest.substr(7);
    const std::size_t slash = rest.find('/');
    const std::string host = rest.substr(0, slash);
    const std::string path = slash == std::string::npos ? "/v1/chat/completions"
                                                        : rest.substr(slash);
    httplib::Client cli("http://" + host);
    cli.set_connection_timeout(static_cast<time_t>(config_.timeout_s), 0);
    cli.set_read_timeout(static_cast<time_t>(config_.timeout_s), 0);

    nlohmann::json body = {
        {"model", config_.model_name},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", config_.temperature},
    };
    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str()))
            headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    auto res = cli.Post(path, headers, body.dump(), "application/json");
    if (!res || res->status != 200)
        throw std::runtime_error("HttpClient: request failed (" +
                                 (res ? std::to_string(res->status) : "no response") + ")");
    const auto reply = nlohmann::json::parse(res->body);
    const auto& choice = reply.at("choices").at(0);
    if (choice.contains("message")) return choice.at("message").at("content").get<std::string>();
    return choice.at("text").get<std::string>();
}

std::unique_ptr<Client> make_client_from_env() {
    const char* endpoint = std::getenv("LLM_ENDPOINT");
    if (!endpoint || !*endpoint) return nullptr;
    LlmConfig cfg;
    cfg.endpoint_url = endpoint;
    if (const char* key_var = std::getenv("LLM_API_KEY_VAR")) cfg.api_key_env = key_var;
    if (const char* model = std::getenv("LLM_MODEL")) cfg.model_name = model;
    return std::make_unique<HttpClient>(std::move(cfg));
}

WindowVector llm_mate(const std::vector<WindowVector>& parents,
                      const std::vector<double>& values, Client& client,
                      const WindowBounds& bounds, int num_objectives,
                      const FallbackOperator& fallback, std::mt19937_64& rng,
                      int max_retries) {
    if (parents.size() < 2) throw std::invalid_argument("llm_mate: need at least two parents");
    std::vector<std::vector<double>> parents_norm;
    parents_norm.reserve(parents.size());
    for (const auto& p : parents) parents_norm.push_back(normalize(p, bounds));
    const int dim = static_cast<int>(parents.front().size());

    for (int attempt = 0; attempt < max_retries; ++attempt) {
        try {
            const PromptBundle bundle = build_prompt(parents_norm, values, num_objectives);
            const std::string reply = client.complete(bundle.rendered_text);
            for (const auto& cand : parse_response(reply, dim)) {
                bool sane = true;
                for (double c : cand)
                    if (c < -0.5 || c > 1.5) {
                        sane = false;
                        break;
                    }
                if (sane) return denormalize(cand, bounds);
            }
        } catch (const std::exception&) {
            // transport or protocol failure: spend the attempt
        }
    }
    return fallback(parents[0], parents[1], rng);
}

}  // namespace fairline::llm
