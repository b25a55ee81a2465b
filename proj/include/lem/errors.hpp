#pragma once

#include <stdexcept>
#include <string>

namespace lem {

// Base class for all library errors. Each concrete error carries an exit
// code so the CLI can map failure categories without string matching.
class error : public std::runtime_error {
public:
    error(std::string msg, int exit_code) : std::runtime_error(std::move(msg)), code_(exit_code) {}
    int exit_code() const noexcept { return code_; }

private:
    int code_;
};

struct inadmissible_error : error {
    explicit inadmissible_error(const std::string& m) : error(m, 3) {}
};

struct no_bracket_error : error {
    explicit no_bracket_error(const std::string& m) : error(m, 4) {}
};

struct unresolved_error : error {
    explicit unresolved_error(const std::string& m) : error(m, 4) {}
};

struct bad_fit_error : error {
    explicit bad_fit_error(const std::string& m) : error(m, 4) {}
};

struct divergent_error : error {
    explicit divergent_error(const std::string& m) : error(m, 4) {}
};

struct not_converged_error : error {
    explicit not_converged_error(const std::string& m) : error(m, 4) {}
};

struct singular_overlap_error : error {
    explicit singular_overlap_error(const std::string& m) : error(m, 4) {}
};

struct resolution_error : error {
    explicit resolution_error(const std::string& m) : error(m, 4) {}
};

struct out_of_range_error : error {
    explicit out_of_range_error(const std::string& m) : error(m, 3) {}
};

struct boundary_error : error {
    explicit boundary_error(const std::string& m) : error(m, 5) {}
};

struct diverged_error : error {
    explicit diverged_error(const std::string& m) : error(m, 4) {}
};

struct insufficient_range_error : error {
    explicit insufficient_range_error(const std::string& m) : error(m, 4) {}
};

struct unsupported_error : error {
    explicit unsupported_error(const std::string& m) : error(m, 5) {}
};

struct coincident_error : error {
    explicit coincident_error(const std::string& m) : error(m, 5) {}
};

// Scenario/configuration problems carry the offending field path.
class config_error : public error {
public:
    config_error(std::string field, const std::string& m)
        : error("config error at `" + field + "`: " + m, 2), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace lem
