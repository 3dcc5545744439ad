#pragma once

#include <stdexcept>
#include <string>

#include "dslice/label.hpp"

namespace dslice {

/// Root of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, SourcePos pos);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

class GotoUnsupported : public SyntaxError {
 public:
  explicit GotoUnsupported(SourcePos pos);
};

class RecursionError : public Error {
 public:
  using Error::Error;
};

class BadLocation : public Error {
 public:
  using Error::Error;
};

class StructureViolation : public Error {
 public:
  StructureViolation(const std::string& message, Label offender)
      : Error(message), offender_(offender) {}
  Label offender() const { return offender_; }

 private:
  Label offender_;
};

class UnknownVariable : public Error {
 public:
  explicit UnknownVariable(const std::string& name)
      : Error("unknown variable '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class PathBoundExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace dslice
