#pragma once

// Client for a remote sentence-embedding service.
//
// Wire protocol: POST <endpoint> with body {"texts": [...]}; a 2xx response
// carries {"vectors": [[...], ...]} with one equal-length vector per text, in
// request order. Anything else counts as a failed attempt.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "sapphire/embedding.hpp"
#include "sapphire/error.hpp"
#include "sapphire/similarity.hpp"

namespace sapphire {

struct ParsedEndpoint {
    std::string base;  // scheme://host[:port]
    std::string path;  // always starts with '/'
};

inline ParsedEndpoint parse_endpoint(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos)
        throw DataError("endpoint must be an absolute URL: " + std::string(url));
    const auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https")
        throw DataError("unsupported endpoint scheme: " + std::string(scheme));
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (scheme == "https")
        throw DataError("https endpoints need a build with TLS support: " + std::string(url));
#endif
    const auto host_begin = scheme_end + 3;
    const auto path_begin = url.find('/', host_begin);
    if (host_begin >= url.size() || path_begin == host_begin)
        throw DataError("endpoint has no host: " + std::string(url));
    if (path_begin == std::string_view::npos)
        return {std::string(url), "/"};
    return {std::string(url.substr(0, path_begin)), std::string(url.substr(path_begin))};
}

class RemoteEmbeddingBackend final : public SimilarityBackend {
public:
    explicit RemoteEmbeddingBackend(RemoteParams params)
        : params_(std::move(params)), endpoint_(parse_endpoint(params_.endpoint)) {
        if (params_.batch_size == 0)
            throw DataError("remote backend batch size must be positive");
        if (params_.retries < 0)
            throw DataError("remote backend retry count must be non-negative");
        if (!(params_.timeout_seconds > 0.0))
            throw DataError("remote backend timeout must be positive");
    }

    BackendKind kind() const noexcept override { return BackendKind::RemoteEmbedding; }

    Similarity compare(std::string_view a, std::string_view b) const override {
        auto vectors = embed(std::vector<std::string>{std::string(a), std::string(b)});
        return detail::from_cosine(cosine_similarity(vectors[0], vectors[1]));
    }

    void prepare(std::span<const std::string> texts) const override { embed(texts); }

    /// Embeddings for `texts` in order. Texts not yet cached are fetched in
    /// batches of at most batch_size.
    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const {
        std::lock_guard lock(mutex_);

        std::vector<std::string> missing;
        for (const auto& t : texts) {
            if (!cache_.contains(t) && std::find(missing.begin(), missing.end(), t) == missing.end())
                missing.push_back(t);
        }
        for (std::size_t first = 0; first < missing.size(); first += params_.batch_size) {
            const auto count = std::min(params_.batch_size, missing.size() - first);
            std::span<const std::string> batch(missing.data() + first, count);
            auto vectors = fetch_with_retries(batch);
            for (std::size_t i = 0; i < count; ++i)
                cache_.emplace(batch[i], std::move(vectors[i]));
        }

        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (const auto& t : texts)
            out.push_back(cache_.at(t));
        return out;
    }

    std::size_t requests_sent() const {
        std::lock_guard lock(mutex_);
        return requests_sent_;
    }

    const RemoteParams& params() const noexcept { return params_; }

private:
    std::vector<EmbeddingVector> fetch_with_retries(std::span<const std::string> batch) const {
        std::string last_error;
        for (int attempt = 0; attempt <= params_.retries; ++attempt) {
            if (attempt > 0 && params_.backoff_ms > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(params_.backoff_ms)
                                            * (1LL << std::min(attempt - 1, 16)));
            }
            try {
                return fetch(batch);
            } catch (const BackendUnavailableError& e) {
                last_error = e.what();
            }
        }
        throw BackendUnavailableError("embedding service " + params_.endpoint + " failed after "
                                      + std::to_string(params_.retries + 1)
                                      + " attempt(s): " + last_error);
    }

    std::vector<EmbeddingVector> fetch(std::span<const std::string> batch) const {
        ++requests_sent_;
        httplib::Client client(endpoint_.base);
        const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::duration<double>(params_.timeout_seconds));
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);

        nlohmann::json request = {{"texts", nlohmann::json::array()}};
        for (const auto& t : batch)
            request["texts"].push_back(t);

        auto res = client.Post(endpoint_.path, request.dump(), "application/json");
        if (!res)
            throw BackendUnavailableError("transport error: " + httplib::to_string(res.error()));
        if (res->status < 200 || res->status >= 300)
            throw BackendUnavailableError("HTTP status " + std::to_string(res->status));

        nlohmann::json body;
        try {
            body = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::parse_error& e) {
            throw BackendUnavailableError(std::string("response is not JSON: ") + e.what());
        }
        if (!body.is_object() || !body.contains("vectors") || !body["vectors"].is_array())
            throw BackendUnavailableError("response has no \"vectors\" array");
        const auto& vectors = body["vectors"];
        if (vectors.size() != batch.size()) {
            throw BackendUnavailableError("expected " + std::to_string(batch.size())
                                          + " vectors, got " + std::to_string(vectors.size()));
        }

        std::vector<EmbeddingVector> out;
        out.reserve(batch.size());
        std::size_t dim = dimension_;
        for (const auto& v : vectors) {
            if (!v.is_array() || v.empty())
                throw BackendUnavailableError("vector is not a non-empty array");
            std::vector<double> values;
            values.reserve(v.size());
            for (const auto& x : v) {
                if (!x.is_number() || !std::isfinite(x.get<double>()))
                    throw BackendUnavailableError("vector element is not a finite number");
                values.push_back(x.get<double>());
            }
            if (dim == 0)
                dim = values.size();
            if (values.size() != dim) {
                throw BackendUnavailableError("vector dimension " + std::to_string(values.size())
                                              + " differs from " + std::to_string(dim));
            }
            out.emplace_back(std::move(values));
        }
        dimension_ = dim;
        return out;
    }

    RemoteParams params_;
    ParsedEndpoint endpoint_;

    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, EmbeddingVector> cache_;
    mutable std::size_t dimension_ = 0;
    mutable std::size_t requests_sent_ = 0;
};

}  // namespace sapphire
