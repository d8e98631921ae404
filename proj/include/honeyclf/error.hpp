#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace honeyclf {

enum class ErrorKind {
  UnmappedColumn,
  MalformedCell,
  EmptyDataset,
  MissingLabel,
  SingleClass,
  EmptyRowSet,
  InsufficientRows,
  NotPositiveDefinite,
  InsufficientClassSamples,
  DimensionMismatch,
  TooFewSamples,
  LengthMismatch,
  UnknownLabel,
  EmptyMatrix,
  InvalidArgument,
  Config,
  UnwritablePath,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace honeyclf
