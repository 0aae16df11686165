// Copyright 2026 The iontrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IONTRAP_ERRORS_HPP
#define IONTRAP_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace iontrap {

/// Base of every error raised by a physics model. The CLI maps these to exit 3.
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char *name() const noexcept { return "PhysicsError"; }
};

/// Raised for malformed experiment files. The CLI maps these to exit 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key_path, const std::string &what)
      : std::runtime_error(key_path.empty() ? what : key_path + ": " + what), key_path_(std::move(key_path)) {}
  const std::string &key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define IONTRAP_DEFINE_ERROR(Name)                                      \
  class Name : public PhysicsError {                                    \
   public:                                                              \
    using PhysicsError::PhysicsError;                                   \
    const char *name() const noexcept override { return #Name; }       \
  }

IONTRAP_DEFINE_ERROR(InstabilityError);
IONTRAP_DEFINE_ERROR(ConvergenceError);
IONTRAP_DEFINE_ERROR(RangeError);
IONTRAP_DEFINE_ERROR(ModelInputError);
IONTRAP_DEFINE_ERROR(TruncationError);
IONTRAP_DEFINE_ERROR(DimensionError);
IONTRAP_DEFINE_ERROR(NoRootError);
IONTRAP_DEFINE_ERROR(SingularSystemError);
IONTRAP_DEFINE_ERROR(MagicEtaError);
IONTRAP_DEFINE_ERROR(BusNotGroundError);
IONTRAP_DEFINE_ERROR(RegisterSizeError);
IONTRAP_DEFINE_ERROR(TimeOrderError);
IONTRAP_DEFINE_ERROR(StiffnessError);
IONTRAP_DEFINE_ERROR(IllConditionedError);
IONTRAP_DEFINE_ERROR(RegimeError);
IONTRAP_DEFINE_ERROR(InvalidTransitionError);

#undef IONTRAP_DEFINE_ERROR

/// Population above the truncation guard. Non-strict runs record a warning,
/// strict runs throw TruncationError.
struct TruncationGuard {
  double eps = 1e-8;
  bool strict = false;
  std::vector<std::string> *warnings = nullptr;

  void check(double tail_population, const std::string &where) const;
};

}  // namespace iontrap

#endif
