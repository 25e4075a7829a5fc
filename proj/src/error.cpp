// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include "wginv/error.hpp"

namespace wginv
{

std::string_view error_name(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::CutoffWavenumber: return "CutoffWavenumber";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::GeometryInvalid: return "GeometryInvalid";
    case ErrorCode::MeshQualityFailure: return "MeshQualityFailure";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::WrongBranch: return "WrongBranch";
    case ErrorCode::ResonantHeight: return "ResonantHeight";
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::PathSingular: return "PathSingular";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::SingularMatrix:
    case ErrorCode::NoConvergence:
    case ErrorCode::FactorizationFailure:
    case ErrorCode::Diverged:
    case ErrorCode::WrongBranch:
    case ErrorCode::NearSingular:
    case ErrorCode::MeshQualityFailure:
      return false;
    default:
      return true;
  }
}

Error::Error(ErrorCode code, const std::string &what)
  : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code)
{
}

void fail(ErrorCode code, const std::string &what) { throw Error(code, what); }

}  // namespace wginv
