#pragma once

// Rendering of a NoveltyReport as an aligned text table, CSV or JSON.
//
// The text table follows the layout of the published score tables: one block
// per past problem, one column per compared current problem, construct rows
// at three decimals and the average at two. CSV and JSON carry full
// precision (shortest round-trip representation).

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sapphire/novelty.hpp"
#include "sapphire/problem.hpp"
#include "sapphire/similarity.hpp"

namespace sapphire {

enum class ReportFormat { Table, Csv, Json };

struct ReportOptions {
    ReportFormat format = ReportFormat::Table;
    bool summary_only = false;  // ranking and unmatched sections only
};

/// `x` rounded half-up and printed with exactly `decimals` places.
inline std::string format_fixed(double x, int decimals) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, round_half_up(x, decimals),
                                   std::chars_format::fixed, decimals);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

/// Shortest representation that parses back to the same double.
inline std::string format_exact(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

namespace detail {

// Gated pairs in (past corpus order, current corpus order).
inline std::vector<const PairAssessment*> ordered_pairs(const NoveltyReport& report) {
    std::map<std::pair<std::string, std::string>, const PairAssessment*> by_ids;
    for (const auto* group : {&report.ranked, &report.unmatched})
        for (const auto& r : *group)
            for (const auto& p : r.pairs)
                by_ids[{p.past_id, p.current_id}] = &p;

    std::vector<const PairAssessment*> out;
    for (const auto& past : report.past_ids)
        for (const auto& current : report.current_ids)
            if (auto it = by_ids.find({past, current}); it != by_ids.end())
                out.push_back(it->second);
    return out;
}

inline std::string pad(std::string_view s, std::size_t width) {
    std::string out(s);
    if (out.size() < width)
        out.append(width - out.size(), ' ');
    return out;
}

inline std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i)
            line += i + 1 == row.size() ? row[i] : pad(row[i], widths[i] + 2);
        out += line + '\n';
    }
    return out;
}

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

inline std::string render_table(const NoveltyReport& report, const ReportOptions& options) {
    std::string out;
    out += "# Problem novelty assessment\n";
    out += "# backend: " + std::string(key_of(report.backend)) + "\n";
    out += "# action threshold: " + format_exact(report.threshold) + "\n";
    out += "# past problems: " + std::to_string(report.past_count)
           + ", current problems: " + std::to_string(report.current_count) + "\n";

    if (!options.summary_only) {
        const auto pairs = ordered_pairs(report);
        for (const auto& past : report.past_ids) {
            std::vector<const PairAssessment*> block;
            for (const auto* p : pairs)
                if (p->past_id == past)
                    block.push_back(p);
            if (block.empty())
                continue;

            std::vector<std::vector<std::string>> rows;
            std::vector<std::string> head{"Constructs/Comparison pair"};
            for (const auto* p : block)
                head.push_back(p->past_id + "-" + p->current_id);
            rows.push_back(std::move(head));
            for (auto level : kAllLevels) {
                std::vector<std::string> row{std::string(display_name(level))};
                for (const auto* p : block) {
                    auto it = p->construct_novelty.find(level);
                    row.push_back(it == p->construct_novelty.end() ? "-" : format_fixed(it->second, 3));
                }
                rows.push_back(std::move(row));
            }
            std::vector<std::string> avg{"Avg. Novelty"};
            std::vector<std::string> band{"Cumulative Decision on Novelty"};
            for (const auto* p : block) {
                avg.push_back(p->average_novelty ? format_fixed(*p->average_novelty, 2) : "n/a");
                band.push_back(p->band ? std::string(display_name(*p->band)) : "No comparable constructs");
            }
            rows.push_back(std::move(avg));
            rows.push_back(std::move(band));

            out += "\nNovelty scores against past problem " + past + "\n";
            out += render_rows(rows);
            for (const auto* p : block) {
                const auto tag = p->past_id + "-" + p->current_id;
                if (p->average_novelty && p->reduced()) {
                    out += "  * " + tag + ": averaged over " + std::to_string(p->included_levels.size())
                           + " of " + std::to_string(kNonActionLevels.size()) + " levels\n";
                }
                for (auto level : p->degenerate_levels) {
                    out += "  ! " + tag + ": " + std::string(display_name(level))
                           + " compared a zero embedding (out of vocabulary)\n";
                }
            }
        }
    }

    out += "\nRanking by lowest novelty against past problems (most novel first)\n";
    if (report.ranked.empty()) {
        out += "(none)\n";
    } else {
        std::vector<std::vector<std::string>> rows{
            {"Rank", "Problem", "Min. Novelty", "Decision", "Closest past"}};
        for (const auto& r : report.ranked) {
            rows.push_back({std::to_string(r.rank), r.current_id, format_fixed(*r.min_novelty, 2),
                            std::string(display_name(*r.band)), r.closest_past_id.value_or("")});
        }
        out += render_rows(rows);
    }

    if (!report.unmatched.empty()) {
        out += "\nUnmatched (no past problem passed the action gate with comparable constructs)\n";
        for (const auto& r : report.unmatched)
            out += r.current_id + (r.label.empty() ? "" : "  " + r.label) + "\n";
    }
    return out;
}

inline std::string render_csv(const NoveltyReport& report, const ReportOptions& options) {
    std::string out = "section,past_id,current_id,level,similarity,novelty,band,rank,note\n";
    auto row = [&](std::initializer_list<std::string> cells) {
        std::string line;
        bool first = true;
        for (const auto& c : cells) {
            if (!first)
                line += ',';
            line += csv_field(c);
            first = false;
        }
        out += line + '\n';
    };

    row({"meta", "", "", "", "", "", "", "", "backend=" + std::string(key_of(report.backend))});
    row({"meta", "", "", "", "", "", "", "", "threshold=" + format_exact(report.threshold)});

    if (!options.summary_only) {
        for (const auto* p : ordered_pairs(report)) {
            for (auto level : kAllLevels) {
                auto s = p->construct_similarity.find(level);
                if (s == p->construct_similarity.end())
                    continue;
                const bool degenerate = std::find(p->degenerate_levels.begin(), p->degenerate_levels.end(),
                                                  level) != p->degenerate_levels.end();
                row({"pair", p->past_id, p->current_id, std::string(key_of(level)), format_exact(s->second),
                     format_exact(p->construct_novelty.at(level)), "", "",
                     level == ConstructLevel::Action ? "gate" : (degenerate ? "zero-embedding" : "")});
            }
            row({"pair", p->past_id, p->current_id, "average", "",
                 p->average_novelty ? format_exact(*p->average_novelty) : "",
                 p->band ? std::string(key_of(*p->band)) : "", "",
                 !p->average_novelty ? "no-comparable-constructs"
                 : p->reduced() ? "levels=" + std::to_string(p->included_levels.size())
                                : ""});
        }
    }
    for (const auto& r : report.ranked) {
        row({"ranking", r.closest_past_id.value_or(""), r.current_id, "min", "",
             format_exact(*r.min_novelty), std::string(key_of(*r.band)), std::to_string(r.rank), ""});
    }
    for (const auto& r : report.unmatched)
        row({"unmatched", "", r.current_id, "", "", "", "", "", ""});
    return out;
}

inline nlohmann::ordered_json pair_to_json(const PairAssessment& p) {
    nlohmann::ordered_json j;
    j["past_id"] = p.past_id;
    j["current_id"] = p.current_id;
    nlohmann::ordered_json constructs = nlohmann::ordered_json::object();
    for (auto level : kAllLevels) {
        auto s = p.construct_similarity.find(level);
        if (s == p.construct_similarity.end())
            continue;
        constructs[std::string(key_of(level))] = {{"similarity", s->second},
                                                  {"novelty", p.construct_novelty.at(level)}};
    }
    j["constructs"] = std::move(constructs);
    j["included_levels"] = nlohmann::ordered_json::array();
    for (auto level : p.included_levels)
        j["included_levels"].push_back(key_of(level));
    j["average_novelty"] = p.average_novelty ? nlohmann::ordered_json(*p.average_novelty) : nullptr;
    j["band"] = p.band ? nlohmann::ordered_json(key_of(*p.band)) : nullptr;
    j["degenerate_levels"] = nlohmann::ordered_json::array();
    for (auto level : p.degenerate_levels)
        j["degenerate_levels"].push_back(key_of(level));
    return j;
}

inline std::string render_json(const NoveltyReport& report, const ReportOptions& options) {
    nlohmann::ordered_json j;
    j["backend"] = key_of(report.backend);
    j["threshold"] = report.threshold;
    j["past_count"] = report.past_count;
    j["current_count"] = report.current_count;
    if (!options.summary_only) {
        j["pairs"] = nlohmann::ordered_json::array();
        for (const auto* p : ordered_pairs(report))
            j["pairs"].push_back(pair_to_json(*p));
    }
    j["ranking"] = nlohmann::ordered_json::array();
    for (const auto& r : report.ranked) {
        j["ranking"].push_back({{"rank", r.rank},
                                {"current_id", r.current_id},
                                {"label", r.label},
                                {"min_novelty", *r.min_novelty},
                                {"band", key_of(*r.band)},
                                {"closest_past_id", r.closest_past_id.value_or("")}});
    }
    j["unmatched"] = nlohmann::ordered_json::array();
    for (const auto& r : report.unmatched) {
        j["unmatched"].push_back(
            {{"current_id", r.current_id}, {"label", r.label}, {"gated_pairs", r.pairs.size()}});
    }
    return j.dump(2) + "\n";
}

}  // namespace detail

inline std::string render_report(const NoveltyReport& report, const ReportOptions& options = {}) {
    switch (options.format) {
    case ReportFormat::Csv: return detail::render_csv(report, options);
    case ReportFormat::Json: return detail::render_json(report, options);
    case ReportFormat::Table: break;
    }
    return detail::render_table(report, options);
}

}  // namespace sapphire
