// sapphire-novelty: command-line front end for problem novelty assessment.
//
// Exit codes: 0 success, 1 invalid data or arguments, 2 environment failure
// (unreadable files, unreachable or incomplete similarity backend).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sapphire/sapphire.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kEnvError = 2;

struct AssessArgs {
    std::string past;
    std::string current;
    std::string backend = "lexical";
    std::string vectors;
    std::string fixtures;
    std::string endpoint;
    std::size_t batch_size = 32;
    double timeout = 30.0;
    int retries = 3;
    double threshold = sapphire::kDefaultActionThreshold;
    std::string format = "table";
    bool strict = false;
    std::string out;
    std::size_t jobs = 1;
};

void print_warnings(const std::string& path, const std::vector<sapphire::Diagnostic>& warnings) {
    for (const auto& w : warnings)
        std::cerr << "warning: " << path << ": " << sapphire::to_string(w) << "\n";
}

int write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return kOk;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) {
        std::cerr << "error: cannot write " << path << "\n";
        return kEnvError;
    }
    return kOk;
}

int cmd_validate(const std::vector<std::string>& paths) {
    int status = kOk;
    for (const auto& path : paths) {
        try {
            auto result = sapphire::load_corpus(path, std::nullopt, sapphire::LoadMode::Strict);
            print_warnings(path, result.warnings);
            std::cout << path << ": ok (" << result.corpus.size() << " "
                      << sapphire::key_of(result.corpus.role) << " problems)\n";
        } catch (const sapphire::ValidationError& e) {
            std::cout << path << ": " << e.issues().size() << " violation(s)\n";
            for (const auto& d : e.issues())
                std::cout << "  " << sapphire::to_string(d) << "\n";
            status = std::max(status, kDataError);
        } catch (const sapphire::EnvironmentError& e) {
            std::cerr << "error: " << e.what() << "\n";
            status = kEnvError;
        }
    }
    return status;
}

std::optional<sapphire::BackendConfig> backend_config(const AssessArgs& args) {
    using namespace sapphire;
    if (args.backend == "lexical")
        return BackendConfig{LexicalParams{}};
    if (args.backend == "wordvec") {
        if (args.vectors.empty()) {
            std::cerr << "error: --backend wordvec requires --vectors\n";
            return std::nullopt;
        }
        return BackendConfig{WordVectorParams{args.vectors}};
    }
    if (args.backend == "fixture") {
        if (args.fixtures.empty()) {
            std::cerr << "error: --backend fixture requires --fixtures\n";
            return std::nullopt;
        }
        return BackendConfig{FixtureParams{args.fixtures}};
    }
    if (args.endpoint.empty()) {
        std::cerr << "error: --backend remote requires --endpoint or SAPPHIRE_EMBED_URL\n";
        return std::nullopt;
    }
    RemoteParams p;
    p.endpoint = args.endpoint;
    p.batch_size = args.batch_size;
    p.timeout_seconds = args.timeout;
    p.retries = args.retries;
    return BackendConfig{p};
}

int cmd_assess(const AssessArgs& args, bool summary_only) {
    using namespace sapphire;
    const auto mode = args.strict ? LoadMode::Strict : LoadMode::Lenient;

    ProblemCorpus past;
    ProblemCorpus current;
    try {
        auto p = load_corpus(args.past, Provenance::Past, mode);
        print_warnings(args.past, p.warnings);
        past = std::move(p.corpus);
        auto c = load_corpus(args.current, Provenance::Current, mode);
        print_warnings(args.current, c.warnings);
        current = std::move(c.corpus);
    } catch (const EnvironmentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kEnvError;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }

    auto config = backend_config(args);
    if (!config)
        return kDataError;

    std::unique_ptr<SimilarityBackend> backend;
    try {
        backend = make_backend(*config);
    } catch (const Error& e) {
        std::cerr << "error: backend setup failed: " << e.what() << "\n";
        return kEnvError;
    }

    NoveltyReport report;
    try {
        report = rank_current_problems(past, current, *backend, {args.threshold, args.jobs});
    } catch (const MissingFixtureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kEnvError;
    } catch (const EnvironmentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kEnvError;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }

    ReportOptions options;
    options.summary_only = summary_only;
    options.format = args.format == "csv"    ? ReportFormat::Csv
                     : args.format == "json" ? ReportFormat::Json
                                             : ReportFormat::Table;
    return write_output(render_report(report, options), args.out);
}

int cmd_oscore(long long n, long long m) {
    try {
        std::cout << sapphire::format_fixed(sapphire::o_score({n, m}), 4) << "\n";
        return kOk;
    } catch (const sapphire::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
}

int cmd_import_survey(const std::string& csv, const std::string& context, bool strict,
                      const std::string& out) {
    using namespace sapphire;
    try {
        auto result = import_survey_csv(csv, context, strict ? LoadMode::Strict : LoadMode::Lenient);
        print_warnings(csv, result.warnings);
        return write_output(serialize_corpus(result.corpus), out);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const EnvironmentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kEnvError;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
}

void add_assess_options(CLI::App& cmd, AssessArgs& args) {
    cmd.add_option("--past", args.past, "Past-problem corpus (JSONL)")->required();
    cmd.add_option("--current", args.current, "Current-problem corpus (JSONL)")->required();
    cmd.add_option("--backend", args.backend, "Similarity backend")
        ->check(CLI::IsMember({"lexical", "wordvec", "remote", "fixture"}))
        ->capture_default_str();
    cmd.add_option("--vectors", args.vectors, "Word-vector file for --backend wordvec");
    cmd.add_option("--fixtures", args.fixtures, "Pinned similarity file for --backend fixture");
    cmd.add_option("--endpoint", args.endpoint, "Embedding service URL for --backend remote")
        ->envname("SAPPHIRE_EMBED_URL");
    cmd.add_option("--batch-size", args.batch_size, "Texts per embedding request")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--timeout", args.timeout, "Embedding request timeout in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--retries", args.retries, "Retries per embedding request")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd.add_option("--threshold", args.threshold, "Action gate similarity threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--format", args.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    cmd.add_flag("--strict", args.strict, "Reject corpora with any invalid record");
    cmd.add_option("--out", args.out, "Write the report here instead of standard output");
    cmd.add_option("--jobs", args.jobs, "Worker threads for pairwise comparison")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Assess the novelty of design problems against a corpus of past problems"};
    app.require_subcommand(1);

    std::vector<std::string> validate_paths;
    auto* validate = app.add_subcommand("validate", "Check corpus files in strict mode");
    validate->add_option("paths", validate_paths, "Corpus files (JSONL)")->required();

    AssessArgs assess_args;
    auto* assess = app.add_subcommand("assess", "Score current problems and rank them by novelty");
    add_assess_options(*assess, assess_args);

    AssessArgs rank_args;
    auto* rank = app.add_subcommand("rank", "Like assess, but print only the ranking");
    add_assess_options(*rank, rank_args);

    long long n = 0;
    long long m = 0;
    auto* oscore = app.add_subcommand("oscore", "Frequency baseline O = 1 - n/m");
    oscore->add_option("n", n, "Number of similar ideas")->required();
    oscore->add_option("m", m, "Total number of ideas")->required();

    std::string survey_csv;
    std::string survey_context;
    std::string survey_out;
    bool survey_strict = true;
    auto* import = app.add_subcommand("import-survey", "Convert a survey CSV to a current-problem corpus");
    import->add_option("csv", survey_csv, "Survey CSV file")->required();
    import->add_option("--context", survey_context, "Artifact the survey is about")->required();
    import->add_option("--out", survey_out, "Output corpus file (default: standard output)");
    import->add_flag("--strict,!--lenient", survey_strict, "Reject the file on any invalid row")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kDataError;
    }

    if (*validate)
        return cmd_validate(validate_paths);
    if (*assess)
        return cmd_assess(assess_args, false);
    if (*rank)
        return cmd_assess(rank_args, true);
    if (*oscore)
        return cmd_oscore(n, m);
    if (*import)
        return cmd_import_survey(survey_csv, survey_context, survey_strict, survey_out);
    return kDataError;
}
