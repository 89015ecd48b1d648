/* Copyright 2026 The APE Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef APE_ERROR_HPP_
#define APE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ape {

// Error categories map onto CLI exit codes (see tools/ape_main.cpp).
enum class ErrorKind {
  kShape = 2,
  kConfig = 3,
  kIo = 4,
  kFormat = 5,
  kState = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const char* category() const noexcept;

 private:
  ErrorKind kind_;
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& what) : Error(ErrorKind::kShape, what) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::kConfig, what) {}
};
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string& what) : Error(ErrorKind::kFormat, what) {}
};
// Violated ordering or numeric-health preconditions (e.g. NaN weights,
// stepping past the last exit, training stages out of order).
struct StateError : Error {
  explicit StateError(const std::string& what) : Error(ErrorKind::kState, what) {}
};

inline const char* Error::category() const noexcept {
  switch (kind_) {
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kState: return "state";
  }
  return "unknown";
}

}  // namespace ape

#endif  // APE_ERROR_HPP_
