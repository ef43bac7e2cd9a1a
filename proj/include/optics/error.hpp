#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace optics {

enum class ErrorCode {
  DegenerateVector,
  InvalidPolygon,
  InvalidPose,
  InvalidWavelength,
  InvalidMedium,
  BadNormalOrientation,
  BadIndex,
  OnBoundary,
  UnknownId,
  PoseRejected,
  SceneInvalid,
  NoTransmission,
  BadEyePoint,
  InvalidParameter,
  ParseError,
  UnsupportedVersion,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateVector: return "DegenerateVector";
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::InvalidPose: return "InvalidPose";
    case ErrorCode::InvalidWavelength: return "InvalidWavelength";
    case ErrorCode::InvalidMedium: return "InvalidMedium";
    case ErrorCode::BadNormalOrientation: return "BadNormalOrientation";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::OnBoundary: return "OnBoundary";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::PoseRejected: return "PoseRejected";
    case ErrorCode::SceneInvalid: return "SceneInvalid";
    case ErrorCode::NoTransmission: return "NoTransmission";
    case ErrorCode::BadEyePoint: return "BadEyePoint";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library. The code is the
/// stable, machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace optics
