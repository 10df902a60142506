#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kgforge {

enum class Errc {
    // graph store
    duplicate_id,
    schema_violation,
    dangling_endpoint,
    kind_violation,
    self_loop,
    unknown_node,
    unanchored_node,
    not_validated,
    not_frozen,
    frozen,
    // ingest
    malformed_document,
    duplicate_section,
    non_positive_order,
    empty_section,
    // merge
    cross_book_fragment,
    mixed_subjects,
    // validator
    unsupported_kind,
    unknown_edge,
    invalid_retarget,
    certification_failed,
    // bench
    empty_gold,
    insufficient_pool,
    no_feasible_k,
    provider_failure,
    judge_failure,
    // synth
    unsupported_edge_kind,
    missing_stem,
    malformed,
    empty_field,
    language_mismatch,
    // eval
    parse_failure,
    empty_group,
    invalid_k,
    exhausted_retries,
    // audit
    ragged_table,
    too_few_annotators,
    // infrastructure
    client_failure,
    io_error,
    config_error,
};

const char* errc_name(Errc code);

struct Error {
    Errc code;
    std::string message;

    std::string to_string() const;
};

inline Error make_error(Errc code, std::string message) {
    return Error{code, std::move(message)};
}

// Minimal expected-like result carrier. Value or Error, never both.
template <typename T>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(Error err) : v_(std::move(err)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& { return std::get<T>(v_); }
    T& value() & { return std::get<T>(v_); }
    T&& value() && { return std::get<T>(std::move(v_)); }

    const Error& error() const { return std::get<Error>(v_); }
    Errc code() const { return error().code; }

private:
    std::variant<T, Error> v_;
};

// Result with no payload.
class Status {
public:
    Status() = default;
    Status(Error err) : err_(std::move(err)), failed_(true) {}

    bool ok() const { return !failed_; }
    explicit operator bool() const { return ok(); }

    const Error& error() const { return err_; }
    Errc code() const { return err_.code; }

    static Status success() { return Status(); }

private:
    Error err_{};
    bool failed_ = false;
};

// Thrown only at CLI boundaries where a Result cannot propagate.
struct KgError : std::exception {
    Error err;
    std::string what_;
    explicit KgError(Error e) : err(std::move(e)), what_(err.to_string()) {}
    const char* what() const noexcept override { return what_.c_str(); }
};

} // namespace kgforge
