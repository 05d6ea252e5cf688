#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sapphire/error.hpp"

namespace sapphire {

class EmbeddingVector {
public:
    EmbeddingVector() = default;
    explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {}
    static EmbeddingVector zeros(std::size_t dimension) {
        return EmbeddingVector(std::vector<double>(dimension, 0.0));
    }

    std::size_t dimension() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    bool is_zero() const noexcept {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
    }

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

private:
    std::vector<double> values_;
};

struct CosineResult {
    double value = 0.0;
    // A zero vector took part, so the angle is undefined and value is 0.
    bool degenerate = false;
};

/// dot(u,v) / (|u|·|v|), clamped to [-1, 1].
///
/// The denominator is sqrt(|u|²·|v|²) rather than |u|·|v|: for u == v this
/// is sqrt(d*d) == d exactly in IEEE arithmetic, so identical vectors score
/// exactly 1. Both forms are symmetric in (u, v).
inline CosineResult cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.dimension() != v.dimension()) {
        throw DataError("cosine_similarity: dimension mismatch (" + std::to_string(u.dimension())
                        + " vs " + std::to_string(v.dimension()) + ")");
    }
    double dot = 0.0;
    double uu = 0.0;
    double vv = 0.0;
    for (std::size_t i = 0; i < u.dimension(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0)
        return {0.0, true};
    const double cos = dot / std::sqrt(uu * vv);
    return {std::clamp(cos, -1.0, 1.0), false};
}

/// Term-frequency count vector of `tokens` over `vocabulary`.
/// Tokens missing from the vocabulary are ignored.
inline EmbeddingVector embed_lexical(std::span<const std::string> tokens,
                                     const std::map<std::string, std::size_t, std::less<>>& vocabulary) {
    std::vector<double> counts(vocabulary.size(), 0.0);
    for (const auto& t : tokens) {
        if (auto it = vocabulary.find(t); it != vocabulary.end())
            counts[it->second] += 1.0;
    }
    return EmbeddingVector(std::move(counts));
}

}  // namespace sapphire
