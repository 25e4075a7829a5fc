// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_ERROR_HPP
#define WGINV_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace wginv
{

enum class ErrorCode
{
  CutoffWavenumber,
  BadIndex,
  GeometryInvalid,
  MeshQualityFailure,
  NotSymmetric,
  TruncationTooSmall,
  SingularMatrix,
  NoConvergence,
  FactorizationFailure,
  UnsupportedRegime,
  Diverged,
  WrongBranch,
  ResonantHeight,
  NearSingular,
  PathSingular,
  InvalidArgument,
  IoFailure
};

std::string_view error_name(ErrorCode code);

// Validation errors map to CLI exit code 2, numerical failures to 3.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what);
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string &what);

}  // namespace wginv

#endif  // WGINV_ERROR_HPP
