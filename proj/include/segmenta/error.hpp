#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace segmenta {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed UTF-8 input; carries the offset of the first offending byte.
class DecodeError : public Error {
public:
    DecodeError(const std::string& msg, std::size_t byte_offset)
        : Error(msg + " at byte offset " + std::to_string(byte_offset)),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

// An operation that requires nonempty input was given an empty one.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

// A structural invariant does not hold (inconsistent segmentation,
// out-of-order merge table, degenerate attention row, ...).
class IntegrityError : public Error {
public:
    using Error::Error;
};

// Training cannot proceed (e.g. the marker symbol occurs in a corpus word).
class TrainError : public Error {
public:
    using Error::Error;
};

// Candidate and reference segmentations disagree on the underlying word.
class ComparisonError : public Error {
public:
    using Error::Error;
};

// A text file does not conform to its format; carries a 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// An argument is outside the operation's domain (zero or negative size, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Unsmoothed scoring hit a zero-probability event: an out-of-vocabulary
// token or an unseen context.
class OovError : public Error {
public:
    using Error::Error;
};

// A key (word, span) was not found where the operation requires one.
class LookupError : public Error {
public:
    using Error::Error;
};

// Alignment rendering was asked to draw inconsistent inputs.
class RenderError : public Error {
public:
    using Error::Error;
};

// A file could not be opened or read.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace segmenta
