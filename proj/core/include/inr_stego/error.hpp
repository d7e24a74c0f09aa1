#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace inr_stego {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or lengths do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the operation's domain (empty range, zero dim, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf encountered where finite values are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A NetworkSpec (or key file) violates its invariants.
class SpecError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed binary input. `offset()` is the byte offset of the offending field.
class ParseError : public FormatError {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Well-formed input in a variant we do not handle (e.g. stereo WAV).
/// `field()` names the header field that carries the unsupported value.
class UnsupportedFormatError : public ParseError {
 public:
  UnsupportedFormatError(const std::string& field, const std::string& detail, std::size_t offset);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Training produced a non-finite loss. `last_good_step()` is -1 when the
/// very first step diverged.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, long last_good_step)
      : Error(what), last_good_step_(last_good_step) {}
  long last_good_step() const noexcept { return last_good_step_; }

 private:
  long last_good_step_;
};

}  // namespace inr_stego
