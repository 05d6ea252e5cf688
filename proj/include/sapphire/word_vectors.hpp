#pragma once

// Pre-trained word-vector tables in the common text format
// ("<count> <dim>" header optional, then "<word> v1 ... vdim" per line).

#include <charconv>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sapphire/detail/strings.hpp"
#include "sapphire/embedding.hpp"
#include "sapphire/error.hpp"

namespace sapphire {

struct WordVectorTable {
    std::size_t dimension = 0;
    std::unordered_map<std::string, EmbeddingVector> vectors;
    std::vector<Diagnostic> warnings;

    bool empty() const noexcept { return vectors.empty(); }
    std::size_t size() const noexcept { return vectors.size(); }

    const EmbeddingVector* find(std::string_view word) const {
        auto it = vectors.find(std::string(word));
        return it == vectors.end() ? nullptr : &it->second;
    }
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_ascii_space(line[i]))
            ++i;
        std::size_t j = i;
        while (j < line.size() && !is_ascii_space(line[j]))
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::optional<std::size_t> parse_size(std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

}  // namespace detail

/// Parse a word-vector table from an in-memory buffer. `origin` names the
/// source in error messages.
inline WordVectorTable parse_word_vectors(std::string_view content, const std::string& origin = {}) {
    WordVectorTable table;
    std::optional<std::size_t> declared_count;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    while (pos < content.size()) {
        std::size_t end = content.find('\n', pos);
        if (end == std::string_view::npos)
            end = content.size();
        std::string_view line = content.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        auto fields = detail::split_ws(line);
        if (fields.empty())
            continue;

        if (line_no == 1 && fields.size() == 2) {
            auto count = detail::parse_size(fields[0]);
            auto dim = detail::parse_size(fields[1]);
            if (count && dim) {
                if (*dim == 0)
                    throw ParseError(origin, line_no, "header declares dimension 0");
                declared_count = count;
                table.dimension = *dim;
                continue;
            }
        }

        const std::size_t n = fields.size() - 1;
        if (n == 0)
            throw ParseError(origin, line_no, "word \"" + std::string(fields[0]) + "\" has no values");
        if (table.dimension == 0) {
            table.dimension = n;
        } else if (n != table.dimension) {
            throw ParseError(origin, line_no,
                             "expected " + std::to_string(table.dimension) + " values, found "
                                 + std::to_string(n));
        }

        std::vector<double> values;
        values.reserve(n);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            auto v = detail::parse_double(fields[i]);
            if (!v)
                throw ParseError(origin, line_no, "invalid number \"" + std::string(fields[i]) + "\"");
            values.push_back(*v);
        }

        std::string word(fields[0]);
        if (table.vectors.contains(word)) {
            table.warnings.push_back({line_no, "duplicate word \"" + word + "\" ignored"});
            continue;
        }
        table.vectors.emplace(std::move(word), EmbeddingVector(std::move(values)));
    }

    if (declared_count && *declared_count != table.vectors.size()) {
        table.warnings.push_back({1, "header declares " + std::to_string(*declared_count)
                                         + " words, file has " + std::to_string(table.vectors.size())});
    }
    return table;
}

inline WordVectorTable load_word_vectors(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read word-vector file: " + path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_word_vectors(content, path);
}

struct PooledEmbedding {
    EmbeddingVector vector;
    bool out_of_vocabulary = false;  // no token was found; vector is all zero
};

/// Unweighted mean of the in-vocabulary token vectors.
inline PooledEmbedding embed_wordvector(std::span<const std::string> tokens,
                                        const WordVectorTable& table) {
    std::vector<double> sum(table.dimension, 0.0);
    std::size_t found = 0;
    for (const auto& t : tokens) {
        const auto* v = table.find(t);
        if (!v)
            continue;
        for (std::size_t i = 0; i < sum.size(); ++i)
            sum[i] += (*v)[i];
        ++found;
    }
    if (found == 0)
        return {EmbeddingVector::zeros(table.dimension), true};
    for (auto& x : sum)
        x /= static_cast<double>(found);
    return {EmbeddingVector(std::move(sum)), false};
}

}  // namespace sapphire
