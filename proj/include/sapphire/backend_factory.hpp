#pragma once

#include <memory>
#include <variant>

#include "sapphire/fixture.hpp"
#include "sapphire/remote.hpp"
#include "sapphire/similarity.hpp"
#include "sapphire/word_vectors.hpp"

namespace sapphire {

/// Build the backend described by `config`, loading any files it names.
inline std::unique_ptr<SimilarityBackend> make_backend(const BackendConfig& config) {
    return std::visit(
        [](const auto& p) -> std::unique_ptr<SimilarityBackend> {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, LexicalParams>) {
                return std::make_unique<LexicalBackend>(p);
            } else if constexpr (std::is_same_v<P, WordVectorParams>) {
                return std::make_unique<WordVectorBackend>(
                    std::make_shared<const WordVectorTable>(load_word_vectors(p.vectors_path)));
            } else if constexpr (std::is_same_v<P, RemoteParams>) {
                return std::make_unique<RemoteEmbeddingBackend>(p);
            } else {
                return std::make_unique<FixtureBackend>(load_fixture_similarities(p.fixtures_path));
            }
        },
        config.params);
}

/// One-shot convenience; builds the backend on every call.
inline double text_similarity(std::string_view a, std::string_view b, const BackendConfig& config) {
    return text_similarity(a, b, *make_backend(config));
}

}  // namespace sapphire
