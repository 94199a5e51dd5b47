#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crekit {

/// Stable, machine-readable failure categories. The CLI prints these verbatim.
enum class ErrorCode {
    Syntax,
    InvalidCount,
    InvalidInstance,
    OddTotal,
    ExpansionCap,
    StateBudget,
    ResultTooLarge,
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Syntax: return "SYNTAX";
    case ErrorCode::InvalidCount: return "INVALID_COUNT";
    case ErrorCode::InvalidInstance: return "INVALID_INSTANCE";
    case ErrorCode::OddTotal: return "ODD_TOTAL";
    case ErrorCode::ExpansionCap: return "EXPANSION_CAP";
    case ErrorCode::StateBudget: return "STATE_BUDGET";
    case ErrorCode::ResultTooLarge: return "RESULT_TOO_LARGE";
    }
    return "UNKNOWN";
}

/// Resource errors are the ones caused by limits rather than by bad input.
inline bool is_resource_error(ErrorCode code) noexcept {
    return code == ErrorCode::ExpansionCap || code == ErrorCode::StateBudget ||
           code == ErrorCode::ResultTooLarge;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& message)
        : Error(ErrorCode::Syntax,
                "at offset " + std::to_string(position) + ": " + message),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class InvalidCount : public Error {
public:
    InvalidCount(std::size_t position, const std::string& message)
        : Error(ErrorCode::InvalidCount,
                "at offset " + std::to_string(position) + ": " + message),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class InvalidInstance : public Error {
public:
    explicit InvalidInstance(const std::string& message)
        : Error(ErrorCode::InvalidInstance, message) {}
};

class OddTotal : public Error {
public:
    explicit OddTotal(std::uint64_t total)
        : Error(ErrorCode::OddTotal,
                "total weight " + std::to_string(total) +
                    " is odd; no equal-weight split can exist"),
          total_(total) {}

    std::uint64_t total() const noexcept { return total_; }

private:
    std::uint64_t total_;
};

class ExpansionCapExceeded : public Error {
public:
    ExpansionCapExceeded(std::uint64_t required, std::uint64_t allowed)
        : Error(ErrorCode::ExpansionCap,
                "counter expansion needs " +
                    (required == UINT64_MAX ? std::string("more than 2^64")
                                            : std::to_string(required)) +
                    " nodes, cap is " + std::to_string(allowed)),
          required_(required), allowed_(allowed) {}

    /// UINT64_MAX means the count overflowed.
    std::uint64_t required() const noexcept { return required_; }
    std::uint64_t allowed() const noexcept { return allowed_; }

private:
    std::uint64_t required_;
    std::uint64_t allowed_;
};

class StateBudgetExceeded : public Error {
public:
    explicit StateBudgetExceeded(std::uint64_t budget)
        : Error(ErrorCode::StateBudget,
                "search exceeded the budget of " + std::to_string(budget) +
                    " product states"),
          budget_(budget) {}

    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t budget_;
};

class ResultTooLarge : public Error {
public:
    explicit ResultTooLarge(std::uint64_t limit)
        : Error(ErrorCode::ResultTooLarge,
                "result exceeds the limit of " + std::to_string(limit) + " words"),
          limit_(limit) {}

    std::uint64_t limit() const noexcept { return limit_; }

private:
    std::uint64_t limit_;
};

/// Resource knobs shared by every operation that expands or searches.
struct Limits {
    std::uint64_t expansion_cap = 100'000;
    std::uint64_t state_budget = 1'000'000;
    std::uint64_t word_limit = 100'000;
};

} // namespace crekit
