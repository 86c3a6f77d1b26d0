// Copyright 2026 The actdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace actdet {

/// Base of every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented invariant (bad record, out-of-range value,
/// misconfigured parameters). The CLI maps it to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written. The CLI maps it to exit
/// code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace actdet
