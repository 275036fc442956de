#pragma once

#include <stdexcept>
#include <string>

namespace cactus {

enum class ErrorKind {
  NotConnected,
  EdgeInTwoCycles,
  CutVertexSplitsThreeWays,
  UnknownRootCycle,
  EmptyItemList,
  PrecisionExhausted,
  PositionCollision,
  ConstraintViolated,
  DegenerateSegment,
  MalformedBits,
  IncompatibleParams,
  Stuck,
  HopLimitExceeded,
  InfeasibleShape,
  InvalidInput,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cactus
