#pragma once

// Novelty scoring: action gate, per-construct novelty, averaging, banding and
// ranking of current problems against a corpus of past problems.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sapphire/detail/parallel.hpp"
#include "sapphire/error.hpp"
#include "sapphire/problem.hpp"
#include "sapphire/similarity.hpp"

namespace sapphire {

inline constexpr double kDefaultActionThreshold = 0.7;

enum class NoveltyBand { Low, Medium, High };

constexpr std::string_view key_of(NoveltyBand band) noexcept {
    switch (band) {
    case NoveltyBand::Low: return "low";
    case NoveltyBand::Medium: return "medium";
    case NoveltyBand::High: return "high";
    }
    return "";
}

constexpr std::string_view display_name(NoveltyBand band) noexcept {
    switch (band) {
    case NoveltyBand::Low: return "Low Novelty";
    case NoveltyBand::Medium: return "Medium Novelty";
    case NoveltyBand::High: return "High Novelty";
    }
    return "";
}

using LevelScores = std::map<ConstructLevel, double>;

/// Round half away from zero at `decimals` places. A relative nudge of
/// 1e-9 absorbs binary representation error, so 0.545 rounds to 0.55.
inline double round_half_up(double x, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double scaled = std::abs(x) * scale;
    const double rounded = std::floor(scaled + 0.5 + 1e-9 * std::max(1.0, scaled)) / scale;
    return std::copysign(rounded, x);
}

/// Nearest double to `x` printed with 15 significant digits. Scores are
/// decimal quantities; this keeps 1 - 0.314 equal to 0.686 rather than
/// 0.6859999999999999.
inline double decimal_clean(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 15);
    if (ec != std::errc())
        return x;
    double out = x;
    std::from_chars(buf, end, out);
    return out;
}

/// Novelty of one construct: 1 - similarity.
inline double construct_novelty(double similarity) {
    if (!(similarity >= 0.0 && similarity <= 1.0))
        throw DataError("construct_novelty: similarity " + std::to_string(similarity) + " outside [0, 1]");
    return decimal_clean(1.0 - similarity);
}

/// Arithmetic mean of `novelty` over `included`. Action may not be included.
inline double aggregate_novelty(const LevelScores& novelty, std::span<const ConstructLevel> included) {
    if (included.empty())
        throw DataError("aggregate_novelty: no levels to average");
    double sum = 0.0;
    for (auto level : included) {
        if (level == ConstructLevel::Action)
            throw DataError("aggregate_novelty: the action level is a gate, not a score");
        auto it = novelty.find(level);
        if (it == novelty.end())
            throw DataError("aggregate_novelty: no score for level " + std::string(key_of(level)));
        sum += it->second;
    }
    return sum / static_cast<double>(included.size());
}

/// Band of a score in [0, 1]: Low [0, 0.3), Medium [0.3, 0.7), High [0.7, 1].
/// The score is first rounded to two decimals, the precision it is reported at.
inline NoveltyBand classify_novelty(double score) {
    if (!(score >= 0.0 && score <= 1.0))
        throw DataError("classify_novelty: score " + std::to_string(score) + " outside [0, 1]");
    const auto cents = static_cast<long>(std::lround(round_half_up(score, 2) * 100.0));
    if (cents < 30)
        return NoveltyBand::Low;
    if (cents < 70)
        return NoveltyBand::Medium;
    return NoveltyBand::High;
}

struct ActionMatch {
    bool matched = false;
    double similarity = 0.0;
};

namespace detail {

inline void check_threshold(double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw DataError("action threshold " + std::to_string(threshold) + " outside [0, 1]");
}

inline void require_valid(const ProblemSapphire& p) {
    auto violations = validate_problem(p);
    if (violations.empty())
        return;
    std::vector<Diagnostic> issues;
    for (const auto& v : violations)
        issues.push_back({0, p.id + ": " + to_string(v)});
    throw ValidationError({}, std::move(issues));
}

}  // namespace detail

/// Compare the two Action texts; the pair is assessed further only when
/// their similarity reaches `threshold`.
inline ActionMatch action_match(const ProblemSapphire& past, const ProblemSapphire& current,
                                const SimilarityBackend& backend,
                                double threshold = kDefaultActionThreshold) {
    detail::check_threshold(threshold);
    detail::require_valid(past);
    detail::require_valid(current);
    const double s = text_similarity(*construct_text(past, ConstructLevel::Action),
                                     *construct_text(current, ConstructLevel::Action), backend);
    return {s >= threshold, s};
}

struct PairAssessment {
    std::string past_id;
    std::string current_id;
    LevelScores construct_similarity;  // Action plus every level both problems carry
    LevelScores construct_novelty;
    std::vector<ConstructLevel> included_levels;  // averaged; never contains Action
    std::optional<double> average_novelty;        // absent: no comparable constructs
    std::optional<NoveltyBand> band;
    std::vector<ConstructLevel> degenerate_levels;  // zero-embedding comparisons

    bool comparable() const noexcept { return average_novelty.has_value(); }
    bool reduced() const noexcept { return included_levels.size() < kNonActionLevels.size(); }
};

/// Full comparison of one past/current pair, or nullopt when the action
/// gate rejects it.
inline std::optional<PairAssessment> assess_pair(const ProblemSapphire& past,
                                                 const ProblemSapphire& current,
                                                 const SimilarityBackend& backend,
                                                 double threshold = kDefaultActionThreshold) {
    const auto gate = action_match(past, current, backend, threshold);
    if (!gate.matched)
        return std::nullopt;

    PairAssessment out;
    out.past_id = past.id;
    out.current_id = current.id;
    out.construct_similarity[ConstructLevel::Action] = gate.similarity;
    out.construct_novelty[ConstructLevel::Action] = construct_novelty(gate.similarity);

    for (auto level : kNonActionLevels) {
        auto a = construct_text(past, level);
        auto b = construct_text(current, level);
        if (!a || !b)
            continue;
        const auto s = backend.compare(*a, *b);
        out.construct_similarity[level] = s.value;
        out.construct_novelty[level] = construct_novelty(s.value);
        out.included_levels.push_back(level);
        if (s.degenerate)
            out.degenerate_levels.push_back(level);
    }

    if (!out.included_levels.empty()) {
        out.average_novelty = aggregate_novelty(out.construct_novelty, out.included_levels);
        out.band = classify_novelty(*out.average_novelty);
    }
    return out;
}

struct CurrentProblemResult {
    std::string current_id;
    std::string label;
    std::vector<PairAssessment> pairs;  // gated pairs, in past-corpus order
    std::optional<double> min_novelty;
    std::optional<std::string> closest_past_id;  // the past problem giving min_novelty
    std::optional<NoveltyBand> band;
    std::size_t rank = 0;  // 1 = most novel; 0 when unmatched
};

struct NoveltyReport {
    BackendKind backend = BackendKind::Lexical;
    double threshold = kDefaultActionThreshold;
    std::size_t past_count = 0;
    std::size_t current_count = 0;
    std::vector<std::string> past_ids;     // corpus order
    std::vector<std::string> current_ids;  // corpus order
    std::vector<CurrentProblemResult> ranked;     // descending min_novelty, ties by id
    std::vector<CurrentProblemResult> unmatched;  // no comparable gated pair; ascending id
};

struct RankOptions {
    double threshold = kDefaultActionThreshold;
    std::size_t workers = 1;
};

/// Assess every (past, current) pair and order the current problems by their
/// lowest novelty against the past corpus, most novel first.
inline NoveltyReport rank_current_problems(const ProblemCorpus& past, const ProblemCorpus& current,
                                           const SimilarityBackend& backend,
                                           const RankOptions& options = {}) {
    detail::check_threshold(options.threshold);
    if (past.empty())
        throw DataError("past corpus is empty");
    for (const auto* corpus : {&past, &current}) {
        if (auto issues = validate_corpus(*corpus); !issues.empty())
            throw ValidationError(corpus->name, std::move(issues));
    }

    std::vector<std::string> texts;
    for (const auto* corpus : {&past, &current})
        for (const auto& p : corpus->problems)
            for (auto level : kAllLevels)
                if (auto t = construct_text(p, level))
                    texts.emplace_back(*t);
    std::sort(texts.begin(), texts.end());
    texts.erase(std::unique(texts.begin(), texts.end()), texts.end());
    backend.prepare(texts);

    const std::size_t np = past.size();
    const std::size_t nc = current.size();
    std::vector<std::optional<PairAssessment>> results(np * nc);
    detail::parallel_for(results.size(), options.workers, [&](std::size_t k) {
        results[k] = assess_pair(past.problems[k % np], current.problems[k / np], backend,
                                 options.threshold);
    });

    NoveltyReport report;
    report.backend = backend.kind();
    report.threshold = options.threshold;
    report.past_count = np;
    report.current_count = nc;
    for (const auto& p : past.problems)
        report.past_ids.push_back(p.id);
    for (const auto& p : current.problems)
        report.current_ids.push_back(p.id);

    for (std::size_t c = 0; c < nc; ++c) {
        CurrentProblemResult r;
        r.current_id = current.problems[c].id;
        r.label = current.problems[c].label;
        for (std::size_t p = 0; p < np; ++p) {
            auto& pair = results[c * np + p];
            if (!pair)
                continue;
            if (pair->average_novelty && (!r.min_novelty || *pair->average_novelty < *r.min_novelty)) {
                r.min_novelty = pair->average_novelty;
                r.closest_past_id = pair->past_id;
            }
            r.pairs.push_back(std::move(*pair));
        }
        if (r.min_novelty) {
            r.band = classify_novelty(*r.min_novelty);
            report.ranked.push_back(std::move(r));
        } else {
            report.unmatched.push_back(std::move(r));
        }
    }

    std::sort(report.ranked.begin(), report.ranked.end(), [](const auto& a, const auto& b) {
        if (*a.min_novelty != *b.min_novelty)
            return *a.min_novelty > *b.min_novelty;
        return a.current_id < b.current_id;
    });
    for (std::size_t i = 0; i < report.ranked.size(); ++i)
        report.ranked[i].rank = i + 1;
    std::sort(report.unmatched.begin(), report.unmatched.end(),
              [](const auto& a, const auto& b) { return a.current_id < b.current_id; });
    return report;
}

/// Frequency-based originality baseline O = 1 - n/m, where n of m ideas in a
/// session are similar.
struct OScoreInput {
    long long similar = 0;  // n
    long long total = 0;    // m
};

inline double o_score(const OScoreInput& in) {
    if (in.total < 1)
        throw DataError("o_score: total idea count must be at least 1");
    if (in.similar < 0 || in.similar > in.total)
        throw DataError("o_score: similar count must lie in [0, total]");
    return 1.0 - static_cast<double>(in.similar) / static_cast<double>(in.total);
}

}  // namespace sapphire
