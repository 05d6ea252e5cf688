#pragma once

// Pluggable text-similarity backends. Every backend maps a pair of texts to a
// similarity in [0, 1]; negative cosines are clamped to 0.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sapphire/detail/strings.hpp"
#include "sapphire/embedding.hpp"
#include "sapphire/error.hpp"
#include "sapphire/fixture.hpp"
#include "sapphire/text.hpp"
#include "sapphire/word_vectors.hpp"

namespace sapphire {

enum class BackendKind { Lexical, WordVector, RemoteEmbedding, Fixture };

constexpr std::string_view key_of(BackendKind kind) noexcept {
    switch (kind) {
    case BackendKind::Lexical: return "lexical";
    case BackendKind::WordVector: return "wordvec";
    case BackendKind::RemoteEmbedding: return "remote";
    case BackendKind::Fixture: return "fixture";
    }
    return "";
}

struct LexicalParams {
    StopwordSet stopwords;
};

struct WordVectorParams {
    std::string vectors_path;
};

struct RemoteParams {
    std::string endpoint;
    std::size_t batch_size = 32;
    double timeout_seconds = 30.0;
    int retries = 3;
    // Delay before retry k (1-based) is backoff_ms * 2^(k-1).
    int backoff_ms = 200;
};

struct FixtureParams {
    std::string fixtures_path;
};

/// Exactly one parameter set is populated; the variant index is the kind.
struct BackendConfig {
    std::variant<LexicalParams, WordVectorParams, RemoteParams, FixtureParams> params;

    BackendKind kind() const noexcept { return static_cast<BackendKind>(params.index()); }
};

struct Similarity {
    double value = 0.0;
    // A zero embedding took part (e.g. every token out of vocabulary).
    bool degenerate = false;
};

class SimilarityBackend {
public:
    virtual ~SimilarityBackend() = default;

    virtual BackendKind kind() const noexcept = 0;

    /// Similarity of two non-empty texts. Must be symmetric and thread-safe.
    virtual Similarity compare(std::string_view a, std::string_view b) const = 0;

    /// Announce the texts that are about to be compared so a backend can
    /// batch its work. The default does nothing.
    virtual void prepare(std::span<const std::string> /*texts*/) const {}
};

namespace detail {

inline Similarity from_cosine(const CosineResult& c) {
    return {std::max(c.value, 0.0), c.degenerate};
}

}  // namespace detail

/// Bag-of-words counts over the union vocabulary of the two texts.
class LexicalBackend final : public SimilarityBackend {
public:
    explicit LexicalBackend(LexicalParams params = {}) : params_(std::move(params)) {}

    BackendKind kind() const noexcept override { return BackendKind::Lexical; }

    Similarity compare(std::string_view a, std::string_view b) const override {
        const auto ta = tokenize(a, params_.stopwords);
        const auto tb = tokenize(b, params_.stopwords);

        // Sorted vocabulary: the index assignment does not depend on which
        // text came first, which keeps the result bit-symmetric.
        std::map<std::string, std::size_t, std::less<>> vocab;
        for (const auto& t : ta)
            vocab.emplace(t, 0);
        for (const auto& t : tb)
            vocab.emplace(t, 0);
        std::size_t next = 0;
        for (auto& [_, index] : vocab)
            index = next++;

        return detail::from_cosine(cosine_similarity(embed_lexical(ta, vocab), embed_lexical(tb, vocab)));
    }

    const LexicalParams& params() const noexcept { return params_; }

private:
    LexicalParams params_;
};

/// Mean-pooled pre-trained word vectors.
class WordVectorBackend final : public SimilarityBackend {
public:
    explicit WordVectorBackend(std::shared_ptr<const WordVectorTable> table)
        : table_(std::move(table)) {
        if (!table_ || table_->empty())
            throw DataError("word-vector backend needs a non-empty table");
    }

    BackendKind kind() const noexcept override { return BackendKind::WordVector; }

    Similarity compare(std::string_view a, std::string_view b) const override {
        const auto ea = embed_wordvector(tokenize(a), *table_);
        const auto eb = embed_wordvector(tokenize(b), *table_);
        auto s = detail::from_cosine(cosine_similarity(ea.vector, eb.vector));
        s.degenerate = s.degenerate || ea.out_of_vocabulary || eb.out_of_vocabulary;
        return s;
    }

    const WordVectorTable& table() const noexcept { return *table_; }

private:
    std::shared_ptr<const WordVectorTable> table_;
};

/// Replays pinned similarities; an unknown pair is an error.
class FixtureBackend final : public SimilarityBackend {
public:
    explicit FixtureBackend(FixtureTable table) : table_(std::move(table)) {}

    BackendKind kind() const noexcept override { return BackendKind::Fixture; }

    Similarity compare(std::string_view a, std::string_view b) const override {
        return {table_.lookup(a, b), false};
    }

    const FixtureTable& table() const noexcept { return table_; }

private:
    FixtureTable table_;
};

/// Similarity in [0, 1] of two non-empty texts under `backend`.
inline double text_similarity(std::string_view a, std::string_view b, const SimilarityBackend& backend) {
    if (detail::trim(a).empty() || detail::trim(b).empty())
        throw DataError("text_similarity: texts must be non-empty");
    return backend.compare(a, b).value;
}

}  // namespace sapphire
