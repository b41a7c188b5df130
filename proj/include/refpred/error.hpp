#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace refpred {

// Base of every error raised by the toolkit. Subclasses name the failure
// modes callers are expected to branch on.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ClassNotFound : public Error {
 public:
  using Error::Error;
};

class MethodNotFound : public Error {
 public:
  using Error::Error;
};

class VariableNotFound : public Error {
 public:
  using Error::Error;
};

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line_no, const std::string& why)
      : Error("malformed detection record on line " + std::to_string(line_no) + ": " + why),
        line_no_(line_no) {}
  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::size_t line_no_;
};

class UnknownRefactoringName : public Error {
 public:
  using Error::Error;
};

class RepoUnreadable : public Error {
 public:
  using Error::Error;
};

class UnorderedHistory : public Error {
 public:
  using Error::Error;
};

class EmptyHistory : public Error {
 public:
  using Error::Error;
};

class CatalogMismatch : public Error {
 public:
  using Error::Error;
};

class IOFailure : public Error {
 public:
  using Error::Error;
};

class EmptyClass : public Error {
 public:
  EmptyClass(bool positive_side, const std::string& what)
      : Error(what), positive_side_(positive_side) {}
  bool positive_side() const noexcept { return positive_side_; }

 private:
  bool positive_side_;
};

class SingleClass : public Error {
 public:
  using Error::Error;
};

class NonBinaryLabels : public Error {
 public:
  using Error::Error;
};

class UnsupportedAlgorithm : public Error {
 public:
  using Error::Error;
};

class ClassTooSmall : public Error {
 public:
  using Error::Error;
};

class DegenerateSplit : public Error {
 public:
  using Error::Error;
};

}  // namespace refpred
