#pragma once

// Pinned pairwise similarities, one "textA<TAB>textB<TAB>similarity" record
// per line. Blank lines and lines starting with '#' are skipped.

#include <cstddef>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "sapphire/detail/strings.hpp"
#include "sapphire/error.hpp"
#include "sapphire/text.hpp"

namespace sapphire {

class FixtureTable {
public:
    /// Pin (a, b) to `similarity`. Re-pinning the same value is a no-op;
    /// a different value throws.
    void insert(std::string_view a, std::string_view b, double similarity) {
        if (!(similarity >= 0.0 && similarity <= 1.0))
            throw DataError("fixture similarity " + std::to_string(similarity) + " outside [0, 1]");
        auto [it, inserted] = pairs_.emplace(make_key(a, b), similarity);
        if (!inserted && it->second != similarity) {
            throw DataError("conflicting fixture values for (\"" + std::string(a) + "\", \""
                            + std::string(b) + "\"): " + std::to_string(it->second) + " vs "
                            + std::to_string(similarity));
        }
    }

    std::optional<double> find(std::string_view a, std::string_view b) const {
        auto it = pairs_.find(make_key(a, b));
        if (it == pairs_.end())
            return std::nullopt;
        return it->second;
    }

    /// Like find(), but a missing pair is an error rather than a default.
    double lookup(std::string_view a, std::string_view b) const {
        if (auto v = find(a, b))
            return *v;
        throw MissingFixtureError(std::string(a), std::string(b));
    }

    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }

private:
    using Key = std::pair<std::string, std::string>;

    static Key make_key(std::string_view a, std::string_view b) {
        auto ka = normalize_key(a);
        auto kb = normalize_key(b);
        if (kb < ka)
            std::swap(ka, kb);
        return {std::move(ka), std::move(kb)};
    }

    std::map<Key, double> pairs_;
};

inline FixtureTable parse_fixture_similarities(std::string_view content, const std::string& origin = {}) {
    FixtureTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t end = content.find('\n', pos);
        if (end == std::string_view::npos)
            end = content.size();
        std::string_view line = content.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (detail::trim(line).empty() || detail::trim(line).front() == '#')
            continue;

        auto t1 = line.find('\t');
        auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos)
            throw ParseError(origin, line_no, "expected 3 tab-separated fields");

        auto a = line.substr(0, t1);
        auto b = line.substr(t1 + 1, t2 - t1 - 1);
        auto value_text = detail::trim(line.substr(t2 + 1));
        if (detail::trim(a).empty() || detail::trim(b).empty())
            throw ParseError(origin, line_no, "empty text field");

        auto value = detail::parse_double(value_text);
        if (!value)
            throw ParseError(origin, line_no, "invalid similarity \"" + std::string(value_text) + "\"");
        try {
            table.insert(a, b, *value);
        } catch (const DataError& e) {
            throw ParseError(origin, line_no, e.what());
        }
    }
    return table;
}

inline FixtureTable load_fixture_similarities(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read fixture file: " + path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_fixture_similarities(content, path);
}

}  // namespace sapphire
