#pragma once

// Tokenization and text normalization. Unicode handling goes through ICU so
// results do not depend on the process locale.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "sapphire/problem.hpp"

namespace sapphire {

using StopwordSet = std::set<std::string, std::less<>>;

namespace detail {

inline void append_utf8(std::string& out, UChar32 c) {
    char buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH, c, error);
    if (!error)
        out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace detail

/// Lowercase, split on every maximal run of non-alphanumeric code points,
/// drop empty tokens, then drop stopwords. Invalid UTF-8 bytes act as
/// separators.
inline std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords = {}) {
    std::vector<std::string> tokens;
    std::string current;
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());

    auto flush = [&] {
        if (!current.empty()) {
            if (!stopwords.contains(current))
                tokens.push_back(std::move(current));
            current.clear();
        }
    };

    for (int32_t i = 0; i < length;) {
        UChar32 c = 0;
        U8_NEXT(bytes, i, length, c);
        if (c >= 0 && u_isalnum(c)) {
            detail::append_utf8(current, u_tolower(c));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

/// Trimmed, Unicode case-folded form used as a lookup key for pinned pairs.
inline std::string normalize_key(std::string_view text) {
    auto trimmed = detail::trim(text);
    auto folded = icu::UnicodeString::fromUTF8(
                      icu::StringPiece(trimmed.data(), static_cast<int32_t>(trimmed.size())))
                      .foldCase();
    std::string out;
    folded.toUTF8String(out);
    return out;
}

}  // namespace sapphire
