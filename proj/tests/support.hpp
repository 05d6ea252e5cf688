#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "sapphire/sapphire.hpp"

namespace sapphire::testing {

inline std::string data_path(const std::string& rel) {
    return std::string(SAPPHIRE_DATA_DIR) + "/" + rel;
}

inline ProblemCorpus case_study_past() {
    return load_corpus(data_path("case_study/past.jsonl"), Provenance::Past).corpus;
}

inline ProblemCorpus case_study_current() {
    return load_corpus(data_path("case_study/current.jsonl"), Provenance::Current).corpus;
}

inline FixtureBackend case_study_fixture() {
    return FixtureBackend(load_fixture_similarities(data_path("case_study/table_similarities.tsv")));
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path()
                / ("sapphire-test-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const {
        auto p = file(name);
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }

private:
    std::filesystem::path path_;
};

inline const std::vector<std::string>& word_pool() {
    static const std::vector<std::string> words = {
        "liquid", "spill",  "kettle", "steam", "hot",    "lid",     "spout",  "base",
        "coil",   "heat",   "water",  "boil",  "leak",   "body",    "switch", "user",
        "hand",   "burn",   "clean",  "scale", "rust",   "element", "handle", "seal",
        "gap",    "foam",   "rim",    "flow",  "static", "movable", "of",     "to"};
    return words;
}

/// Phrase of 1..max_words words from word_pool(), with random case and
/// separators so tokenization has something to normalize.
inline std::string random_phrase(std::mt19937_64& rng, int max_words = 6) {
    const auto& pool = word_pool();
    std::uniform_int_distribution<int> count(1, max_words);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> coin(0, 3);
    static const char* separators[] = {" ", " ", "-", ", "};
    std::string out;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        if (i > 0)
            out += separators[coin(rng)];
        std::string w = pool[pick(rng)];
        if (coin(rng) == 0)
            for (auto& c : w)
                c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        out += w;
    }
    return out;
}

inline WordVectorTable random_word_table(std::mt19937_64& rng, std::size_t dim = 8) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    WordVectorTable table;
    table.dimension = dim;
    for (const auto& w : word_pool()) {
        std::vector<double> v(dim);
        for (auto& x : v)
            x = gauss(rng);
        table.vectors.emplace(w, EmbeddingVector(std::move(v)));
    }
    return table;
}

inline ProblemSapphire random_problem(std::mt19937_64& rng, const std::string& id, Provenance prov) {
    ProblemSapphire p;
    p.id = id;
    p.label = random_phrase(rng, 4);
    p.provenance = prov;
    p.source = "src " + random_phrase(rng, 2);
    p.context = "electric kettle";
    std::bernoulli_distribution present(0.8);
    for (auto level : kAllLevels)
        if (level == ConstructLevel::Action || present(rng))
            p.constructs.set(level, random_phrase(rng));
    return p;
}

}  // namespace sapphire::testing
