#pragma once

// On-disk corpus formats.
//
// Corpus files are JSON Lines: one problem object per line with keys
//   id, label, provenance ("past" | "current"), source, context, constructs
// where constructs maps the canonical construct keys to strings. Only
// constructs.action is mandatory.
//
// Survey files are RFC 4180 CSV with header
//   id, label, source, action[, state_change, phenomena, effect, input, organ, parts]

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sapphire/detail/strings.hpp"
#include "sapphire/error.hpp"
#include "sapphire/problem.hpp"

namespace sapphire {

enum class LoadMode { Strict, Lenient };

struct LoadResult {
    ProblemCorpus corpus;
    std::vector<Diagnostic> warnings;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<std::string_view> split_lines(std::string_view content) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto end = content.find('\n', pos);
        if (end == std::string_view::npos)
            end = content.size();
        auto line = content.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        lines.push_back(line);
        pos = end + 1;
    }
    return lines;
}

inline const std::set<std::string, std::less<>>& record_keys() {
    static const std::set<std::string, std::less<>> keys = {"id",     "label",   "provenance",
                                                            "source", "context", "constructs"};
    return keys;
}

// Decode one JSONL record. Schema problems go to `errors` (fatal for the
// record) or `notes` (unknown keys; fatal only in strict mode).
inline std::optional<ProblemSapphire> decode_record(const nlohmann::json& j,
                                                    std::vector<std::string>& errors,
                                                    std::vector<std::string>& notes) {
    if (!j.is_object()) {
        errors.push_back("record is not a JSON object");
        return std::nullopt;
    }
    for (const auto& [key, _] : j.items())
        if (!record_keys().contains(key))
            notes.push_back("unknown key \"" + key + "\"");

    ProblemSapphire p;
    auto read_string = [&](const char* key, std::string& out, bool required) {
        auto it = j.find(key);
        if (it == j.end()) {
            if (required)
                errors.push_back(std::string("missing key \"") + key + "\"");
            return;
        }
        if (!it->is_string()) {
            errors.push_back(std::string("\"") + key + "\" must be a string");
            return;
        }
        out = it->get<std::string>();
    };
    read_string("id", p.id, true);
    read_string("label", p.label, false);
    read_string("source", p.source, false);
    read_string("context", p.context, false);

    std::string provenance;
    read_string("provenance", provenance, true);
    if (j.contains("provenance") && j["provenance"].is_string()) {
        if (auto v = provenance_from_key(provenance))
            p.provenance = *v;
        else
            errors.push_back("provenance must be \"past\" or \"current\", got \"" + provenance + "\"");
    }

    auto cit = j.find("constructs");
    if (cit == j.end()) {
        errors.push_back("missing key \"constructs\"");
    } else if (!cit->is_object()) {
        errors.push_back("\"constructs\" must be an object");
    } else {
        for (const auto& [key, value] : cit->items()) {
            auto level = level_from_key(key);
            if (!level) {
                notes.push_back("unknown construct key \"" + key + "\"");
                continue;
            }
            if (!value.is_string()) {
                errors.push_back("constructs." + key + " must be a string");
                continue;
            }
            p.constructs.set(*level, value.get<std::string>());
        }
    }
    if (!errors.empty())
        return std::nullopt;
    return p;
}

}  // namespace detail

/// Parse JSONL corpus content. When `role` is unset it is taken from the
/// first record. Strict mode throws ValidationError listing every problem;
/// lenient mode skips bad records and reports them as warnings.
inline LoadResult parse_corpus(std::string_view content, std::optional<Provenance> role,
                               LoadMode mode, const std::string& origin = {}) {
    LoadResult result;
    result.corpus.name = origin.empty() ? std::string("corpus")
                                        : std::filesystem::path(origin).stem().string();
    std::vector<Diagnostic> errors;
    auto& warnings = result.warnings;
    const bool strict = mode == LoadMode::Strict;
    auto report = [&](std::size_t line, std::string msg) {
        (strict ? errors : warnings).push_back({line, std::move(msg)});
    };

    auto lines = detail::split_lines(content);
    while (!lines.empty() && detail::trim(lines.back()).empty())
        lines.pop_back();

    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (detail::trim(lines[i]).empty()) {
            report(line_no, "blank line");
            continue;
        }

        nlohmann::json j;
        try {
            j = nlohmann::json::parse(lines[i]);
        } catch (const nlohmann::json::parse_error& e) {
            report(line_no, std::string("malformed JSON: ") + e.what());
            continue;
        }

        std::vector<std::string> record_errors;
        std::vector<std::string> notes;
        auto problem = detail::decode_record(j, record_errors, notes);
        for (auto& n : notes)
            report(line_no, std::move(n));
        if (!problem) {
            for (auto& e : record_errors)
                report(line_no, std::move(e));
            continue;
        }

        bool ok = true;
        for (const auto& v : validate_problem(*problem)) {
            report(line_no, to_string(v));
            ok = false;
        }
        if (!role)
            role = problem->provenance;
        if (problem->provenance != *role) {
            report(line_no, "provenance \"" + std::string(key_of(problem->provenance))
                                + "\" does not match corpus role \"" + std::string(key_of(*role))
                                + "\"");
            ok = false;
        }
        if (auto it = seen.find(problem->id); it != seen.end()) {
            report(line_no, "duplicate id \"" + problem->id + "\" (first on line "
                                + std::to_string(it->second) + ")");
            ok = false;
        }
        if (!ok)
            continue;
        seen.emplace(problem->id, line_no);
        result.corpus.problems.push_back(std::move(*problem));
    }

    if (!errors.empty())
        throw ValidationError(origin, std::move(errors));
    result.corpus.role = role.value_or(Provenance::Past);
    if (result.corpus.problems.empty() && lines.empty())
        warnings.push_back({0, "corpus is empty"});
    return result;
}

inline LoadResult load_corpus(const std::string& path, std::optional<Provenance> role,
                              LoadMode mode = LoadMode::Strict) {
    return parse_corpus(detail::read_file(path), role, mode, path);
}

/// One record as a single-line JSON object with keys in canonical order.
inline std::string encode_record(const ProblemSapphire& p) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["label"] = p.label;
    j["provenance"] = key_of(p.provenance);
    j["source"] = p.source;
    j["context"] = p.context;
    nlohmann::ordered_json constructs = nlohmann::ordered_json::object();
    for (auto level : kAllLevels)
        if (const auto& text = p.constructs[level])
            constructs[std::string(key_of(level))] = *text;
    j["constructs"] = std::move(constructs);
    return j.dump();
}

inline std::string serialize_corpus(const ProblemCorpus& c) {
    std::string out;
    for (const auto& p : c.problems) {
        out += encode_record(p);
        out += '\n';
    }
    return out;
}

inline void save_corpus(const ProblemCorpus& c, const std::string& path) {
    if (auto issues = validate_corpus(c); !issues.empty())
        throw ValidationError(c.name, std::move(issues));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path);
    out << serialize_corpus(c);
    if (!out.flush())
        throw IoError("write failed: " + path);
}

namespace detail {

// RFC 4180 records. Quoted fields may contain commas, CRLF and "" escapes.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view content,
                                                       const std::string& origin) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n')
                    ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || field_was_quoted)
                throw ParseError(origin, line, "unexpected quote inside unquoted field");
            in_quotes = true;
            field_was_quoted = true;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            if (i + 1 < content.size() && content[i + 1] == '\n')
                break;
            end_row();
            ++line;
            break;
        case '\n':
            end_row();
            ++line;
            break;
        default:
            if (field_was_quoted)
                throw ParseError(origin, line, "text after closing quote");
            field += c;
        }
    }
    if (in_quotes)
        throw ParseError(origin, line, "unterminated quoted field");
    if (!field.empty() || field_was_quoted || !row.empty())
        end_row();
    return rows;
}

}  // namespace detail

/// Build a current-problem corpus from survey answers. Rows are numbered
/// from 1 after the header; a blank id becomes "CUR-<row>".
inline LoadResult parse_survey_csv(std::string_view content, const std::string& context,
                                   LoadMode mode = LoadMode::Strict, const std::string& origin = {}) {
    auto rows = detail::parse_csv(content, origin);
    if (rows.empty())
        throw ParseError(origin, 1, "missing header row");

    std::map<std::string, std::size_t> column;
    const auto& header = rows.front();
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name(detail::trim(header[i]));
        if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0)
            name.erase(0, 3);
        const bool known = name == "id" || name == "label" || name == "source" || level_from_key(name);
        if (!known)
            throw ParseError(origin, 1, "unknown column \"" + name + "\"");
        if (!column.emplace(name, i).second)
            throw ParseError(origin, 1, "duplicate column \"" + name + "\"");
    }
    if (!column.contains("action"))
        throw ParseError(origin, 1, "missing required column \"action\"");

    LoadResult result;
    result.corpus.name = origin.empty() ? std::string("survey")
                                        : std::filesystem::path(origin).stem().string();
    result.corpus.role = Provenance::Current;
    std::vector<Diagnostic> errors;
    const bool strict = mode == LoadMode::Strict;
    std::map<std::string, std::size_t> seen;

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        const std::size_t line = r + 1;
        if (cells.size() == 1 && detail::trim(cells[0]).empty())
            continue;  // blank line
        auto fail = [&](std::string msg) {
            (strict ? errors : result.warnings).push_back({line, "row " + std::to_string(r) + ": " + msg});
        };
        if (cells.size() != header.size()) {
            fail("expected " + std::to_string(header.size()) + " cells, found "
                 + std::to_string(cells.size()));
            continue;
        }
        auto cell = [&](const std::string& name) -> std::string {
            auto it = column.find(name);
            return it == column.end() ? std::string() : std::string(detail::trim(cells[it->second]));
        };

        ProblemSapphire p;
        p.id = cell("id");
        if (p.id.empty())
            p.id = "CUR-" + std::to_string(r);
        p.label = cell("label");
        p.source = cell("source");
        p.context = context;
        p.provenance = Provenance::Current;
        for (auto level : kAllLevels) {
            auto text = cell(std::string(key_of(level)));
            if (!text.empty())
                p.constructs.set(level, std::move(text));
        }

        bool ok = true;
        for (const auto& v : validate_problem(p)) {
            fail(to_string(v));
            ok = false;
        }
        if (auto it = seen.find(p.id); it != seen.end()) {
            fail("duplicate id \"" + p.id + "\" (first in row " + std::to_string(it->second) + ")");
            ok = false;
        }
        if (!ok)
            continue;
        seen.emplace(p.id, r);
        result.corpus.problems.push_back(std::move(p));
    }

    if (!errors.empty())
        throw ValidationError(origin, std::move(errors));
    if (rows.size() == 1)
        result.warnings.push_back({0, "survey has no data rows"});
    return result;
}

inline LoadResult import_survey_csv(const std::string& path, const std::string& context,
                                    LoadMode mode = LoadMode::Strict) {
    return parse_survey_csv(detail::read_file(path), context, mode, path);
}

}  // namespace sapphire
