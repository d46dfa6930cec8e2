#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hardy {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejected input: violated precondition or malformed data.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An iterative method stopped before reaching its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved, int iterations)
        : Error(what), achieved_(achieved), iterations_(iterations) {}

    double achieved() const { return achieved_; }
    int iterations() const { return iterations_; }

private:
    double achieved_;
    int iterations_;
};

/// A realization of an ensemble failed; carries what is needed to replay it.
class RealizationError : public Error {
public:
    RealizationError(const std::string& what, std::size_t index, std::uint64_t seed)
        : Error(what), index_(index), seed_(seed) {}

    std::size_t index() const { return index_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::size_t index_;
    std::uint64_t seed_;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgument(msg);
}

}  // namespace hardy
