#pragma once

#include <stdexcept>
#include <string>

namespace relk {

// Every failure mode of the engine carries one of these codes. The CLI maps
// them to exit status 1 and prints the code name together with the message,
// so scripts can grep for the first failing check.
enum class Err {
  DimensionMismatch,
  SingularMatrix,
  MiddleMismatch,
  UnsupportedOrder,
  EndpointMismatch,
  ElementShapeMismatch,
  NormalFormVsEvalDisagreement,
  CompositeNotZero,
  TagMismatch,
  WiringNotIso,
  ColumnMismatch,
  YinYangDiffer,
  RowNotExact,
  ColNotExact,
  YinDiagramNotCommuting,
  YangDiagramNotCommuting,
  NotIso,
  NotAutomorphism,
  MissingDecomposition,
  DecompositionInvalid,
  StepInvalid,
  LiftProjectionMismatch,
  ParseError,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace relk
