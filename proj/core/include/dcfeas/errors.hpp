#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcfeas {

enum class ErrorCode {
  kInvalidArgument,
  kRankDeficient,
  kInfeasibleStart,
  kUnsupported,
  kRetractionFailed,
  kLineSearchExhausted,
  kSubproblemNoRoot,
  kMissingGroundTruth,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the QR factorization when a diagonal entry of R collapses.
class RankDeficientError : public Error {
 public:
  RankDeficientError(std::size_t pivot, double magnitude, double threshold);
  std::size_t pivot() const { return pivot_; }
  double magnitude() const { return magnitude_; }

 private:
  std::size_t pivot_;
  double magnitude_;
};

// Raised when the dual root finder cannot bracket a root of T; the trailing
// T values are kept because they usually point at a violated Slater condition.
class SubproblemError : public Error {
 public:
  SubproblemError(const std::string& what, std::vector<double> last_values)
      : Error(ErrorCode::kSubproblemNoRoot, what), last_values_(std::move(last_values)) {}
  const std::vector<double>& last_values() const { return last_values_; }

 private:
  std::vector<double> last_values_;
};

}  // namespace dcfeas
