#pragma once

// Problem-SAPPhIRE data model: a design problem described at the seven
// abstraction levels of the SAPPhIRE causality model.

#include <algorithm>
#include <array>
#include <initializer_list>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sapphire/detail/strings.hpp"
#include "sapphire/error.hpp"

namespace sapphire {

enum class ConstructLevel {
    Action,
    StateChange,
    Phenomena,
    Effect,
    Input,
    Organ,
    Parts,
};

// Canonical order used by every table, file and report.
inline constexpr std::array<ConstructLevel, 7> kAllLevels = {
    ConstructLevel::Action, ConstructLevel::StateChange, ConstructLevel::Phenomena,
    ConstructLevel::Effect, ConstructLevel::Input,       ConstructLevel::Organ,
    ConstructLevel::Parts,
};

inline constexpr std::array<ConstructLevel, 6> kNonActionLevels = {
    ConstructLevel::StateChange, ConstructLevel::Phenomena, ConstructLevel::Effect,
    ConstructLevel::Input,       ConstructLevel::Organ,     ConstructLevel::Parts,
};

constexpr std::size_t index_of(ConstructLevel level) noexcept {
    return static_cast<std::size_t>(level);
}

/// Lowercase key used in corpus files, CSV headers and JSON reports.
constexpr std::string_view key_of(ConstructLevel level) noexcept {
    switch (level) {
    case ConstructLevel::Action: return "action";
    case ConstructLevel::StateChange: return "state_change";
    case ConstructLevel::Phenomena: return "phenomena";
    case ConstructLevel::Effect: return "effect";
    case ConstructLevel::Input: return "input";
    case ConstructLevel::Organ: return "organ";
    case ConstructLevel::Parts: return "parts";
    }
    return "";
}

/// Row label as printed in the novelty score tables.
constexpr std::string_view display_name(ConstructLevel level) noexcept {
    switch (level) {
    case ConstructLevel::Action: return "Action";
    case ConstructLevel::StateChange: return "State Change";
    case ConstructLevel::Phenomena: return "Phenomena";
    case ConstructLevel::Effect: return "Effect";
    case ConstructLevel::Input: return "Input";
    case ConstructLevel::Organ: return "oRgan";
    case ConstructLevel::Parts: return "Parts";
    }
    return "";
}

inline std::optional<ConstructLevel> level_from_key(std::string_view key) noexcept {
    for (auto level : kAllLevels)
        if (key_of(level) == key)
            return level;
    return std::nullopt;
}

enum class Provenance { Past, Current };

constexpr std::string_view key_of(Provenance p) noexcept {
    return p == Provenance::Past ? "past" : "current";
}

inline std::optional<Provenance> provenance_from_key(std::string_view key) noexcept {
    if (key == "past")
        return Provenance::Past;
    if (key == "current")
        return Provenance::Current;
    return std::nullopt;
}

/// Fixed-size map from ConstructLevel to an optional construct text.
class ConstructMap {
public:
    ConstructMap() = default;
    ConstructMap(std::initializer_list<std::pair<ConstructLevel, std::string>> init) {
        for (auto& [level, text] : init)
            texts_[index_of(level)] = text;
    }

    const std::optional<std::string>& operator[](ConstructLevel level) const noexcept {
        return texts_[index_of(level)];
    }
    std::optional<std::string>& operator[](ConstructLevel level) noexcept {
        return texts_[index_of(level)];
    }

    void set(ConstructLevel level, std::string text) { texts_[index_of(level)] = std::move(text); }
    void erase(ConstructLevel level) { texts_[index_of(level)].reset(); }

    friend bool operator==(const ConstructMap&, const ConstructMap&) = default;

private:
    std::array<std::optional<std::string>, kAllLevels.size()> texts_{};
};

struct ProblemSapphire {
    std::string id;
    std::string label;
    Provenance provenance = Provenance::Past;
    std::string source;
    std::string context;
    ConstructMap constructs;

    friend bool operator==(const ProblemSapphire&, const ProblemSapphire&) = default;
};

struct ProblemCorpus {
    std::string name;
    Provenance role = Provenance::Past;
    std::vector<ProblemSapphire> problems;

    bool empty() const noexcept { return problems.empty(); }
    std::size_t size() const noexcept { return problems.size(); }

    friend bool operator==(const ProblemCorpus&, const ProblemCorpus&) = default;
};

struct Violation {
    enum class Field { Id, Provenance, Construct };

    Field field = Field::Id;
    std::optional<ConstructLevel> level;  // set when field == Construct
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::string to_string(const Violation& v) {
    if (v.field == Violation::Field::Construct && v.level)
        return "constructs." + std::string(key_of(*v.level)) + ": " + v.message;
    if (v.field == Violation::Field::Provenance)
        return "provenance: " + v.message;
    return "id: " + v.message;
}

/// Every invariant breach of a single record. Empty means the record is valid.
inline std::vector<Violation> validate_problem(const ProblemSapphire& p) {
    std::vector<Violation> out;
    if (p.id.empty()) {
        out.push_back({Violation::Field::Id, std::nullopt, "must be non-empty"});
    } else if (std::any_of(p.id.begin(), p.id.end(), detail::is_ascii_space)) {
        out.push_back({Violation::Field::Id, std::nullopt,
                       "\"" + p.id + "\" must not contain whitespace"});
    }

    const auto& action = p.constructs[ConstructLevel::Action];
    if (!action) {
        out.push_back({Violation::Field::Construct, ConstructLevel::Action,
                       "action text is required"});
    }
    for (auto level : kAllLevels) {
        const auto& text = p.constructs[level];
        if (text && detail::trim(*text).empty()) {
            out.push_back({Violation::Field::Construct, level, "text is empty"});
        }
    }
    return out;
}

inline bool is_valid(const ProblemSapphire& p) { return validate_problem(p).empty(); }

/// The construct text at `level`, or nullopt. Never yields an empty string:
/// blank texts are reported as absent.
inline std::optional<std::string_view> construct_text(const ProblemSapphire& p,
                                                      ConstructLevel level) noexcept {
    const auto& text = p.constructs[level];
    if (!text || detail::trim(*text).empty())
        return std::nullopt;
    return std::string_view(*text);
}

/// Corpus-level checks: per-record validity, unique ids, provenance matching role.
inline std::vector<Diagnostic> validate_corpus(const ProblemCorpus& c) {
    std::vector<Diagnostic> out;
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < c.problems.size(); ++i) {
        const auto& p = c.problems[i];
        const std::string who = "record " + std::to_string(i + 1) + " (" + p.id + ")";
        for (const auto& v : validate_problem(p))
            out.push_back({0, who + ": " + to_string(v)});
        if (p.provenance != c.role) {
            out.push_back({0, who + ": provenance \"" + std::string(key_of(p.provenance))
                                  + "\" does not match corpus role \""
                                  + std::string(key_of(c.role)) + "\""});
        }
        if (auto [it, inserted] = seen.emplace(p.id, i + 1); !inserted) {
            out.push_back({0, who + ": duplicate id \"" + p.id + "\" (first at record "
                                  + std::to_string(it->second) + ")"});
        }
    }
    return out;
}

}  // namespace sapphire
