#pragma once

#include <stdexcept>
#include <string>

namespace mfring {

// Error hierarchy mirroring the CLI exit-code classes:
//   PreconditionError -> exit 2 (bad input / unsupported combination)
//   InvariantError    -> exit 3 (model vs. linear algebra disagreement)
//   FixtureError      -> exit 4 (fixture file problems)
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

struct InvariantError : Error {
    explicit InvariantError(const std::string& msg) : Error(msg) {}
};

struct FixtureError : Error {
    explicit FixtureError(const std::string& msg) : Error(msg) {}
};

} // namespace mfring
