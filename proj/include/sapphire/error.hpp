#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sapphire {

// Base for every error the library throws. Callers that only care about
// "data vs. environment" can switch on the derived type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input data: malformed lines, invalid records, out-of-range scores.
class DataError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(std::string file, std::size_t line, const std::string& what)
        : DataError(format(file, line, what)), file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& file, std::size_t line, const std::string& what) {
        std::string out = file.empty() ? std::string("<input>") : file;
        if (line != 0)
            out += ":" + std::to_string(line);
        return out + ": " + what;
    }

    std::string file_;
    std::size_t line_;
};

struct Diagnostic {
    std::size_t line = 0;  // 1-based; 0 when not tied to a line
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline std::string to_string(const Diagnostic& d) {
    return d.line == 0 ? d.message : "line " + std::to_string(d.line) + ": " + d.message;
}

// One or more invalid records; carries every violation found.
class ValidationError : public DataError {
public:
    ValidationError(std::string file, std::vector<Diagnostic> issues)
        : DataError(summarize(file, issues)), file_(std::move(file)), issues_(std::move(issues)) {}

    const std::string& file() const noexcept { return file_; }
    const std::vector<Diagnostic>& issues() const noexcept { return issues_; }

private:
    static std::string summarize(const std::string& file, const std::vector<Diagnostic>& issues) {
        std::string out = (file.empty() ? std::string("<input>") : file) + ": "
                          + std::to_string(issues.size()) + " violation(s)";
        for (const auto& d : issues)
            out += "\n  " + to_string(d);
        return out;
    }

    std::string file_;
    std::vector<Diagnostic> issues_;
};

// Environment failures: unreadable files, unreachable services.
class EnvironmentError : public Error {
public:
    using Error::Error;
};

class IoError : public EnvironmentError {
public:
    using EnvironmentError::EnvironmentError;
};

class BackendUnavailableError : public EnvironmentError {
public:
    using EnvironmentError::EnvironmentError;
};

// A fixture-replay backend was asked for a pair it has no value for.
class MissingFixtureError : public EnvironmentError {
public:
    MissingFixtureError(std::string a, std::string b)
        : EnvironmentError("no pinned similarity for pair (\"" + a + "\", \"" + b + "\")"),
          a_(std::move(a)), b_(std::move(b)) {}

    const std::string& text_a() const noexcept { return a_; }
    const std::string& text_b() const noexcept { return b_; }

private:
    std::string a_;
    std::string b_;
};

}  // namespace sapphire
