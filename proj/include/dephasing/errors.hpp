#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dephasing {

enum class ErrorKind {
  InvalidInput,
  NonIntegrableCorrelation,
  NegativeResult,
  SpectrumUndefined,
  DivergentIntegral,
  DivergentMoment,
  FitAmbiguous,
  OutOfTable,
  DimensionTooLarge,
  NotAState,
  ZeroSlope,
  InvalidDecay,
  DegenerateSqueezing,
  SingularCovariance,
  HPViolation,
  QuadratureFailure,
  IllConditioned,
  RankDeficient,
  ExtrapolationUnstable,
  CombinatorialOverflow,
  UnsupportedPulse,
  SamplingBudgetExceeded,
  CovarianceNotPSD,
};

std::string_view to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonIntegrableCorrelation: return "NonIntegrableCorrelation";
    case ErrorKind::NegativeResult: return "NegativeResult";
    case ErrorKind::SpectrumUndefined: return "SpectrumUndefined";
    case ErrorKind::DivergentIntegral: return "DivergentIntegral";
    case ErrorKind::DivergentMoment: return "DivergentMoment";
    case ErrorKind::FitAmbiguous: return "FitAmbiguous";
    case ErrorKind::OutOfTable: return "OutOfTable";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::NotAState: return "NotAState";
    case ErrorKind::ZeroSlope: return "ZeroSlope";
    case ErrorKind::InvalidDecay: return "InvalidDecay";
    case ErrorKind::DegenerateSqueezing: return "DegenerateSqueezing";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::HPViolation: return "HPViolation";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::ExtrapolationUnstable: return "ExtrapolationUnstable";
    case ErrorKind::CombinatorialOverflow: return "CombinatorialOverflow";
    case ErrorKind::UnsupportedPulse: return "UnsupportedPulse";
    case ErrorKind::SamplingBudgetExceeded: return "SamplingBudgetExceeded";
    case ErrorKind::CovarianceNotPSD: return "CovarianceNotPSD";
  }
  return "Unknown";
}

}  // namespace dephasing
