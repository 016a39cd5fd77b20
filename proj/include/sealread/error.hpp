// Copyright 2026 The sealread Authors. All Rights Reserved.
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

namespace sealread {

/// Input does not satisfy a documented contract (bad manifest, bad flag,
/// out-of-range parameter). The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Environment or backend failure (I/O, child process, protocol). Exit code 2.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BackendError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

/// Raised when a seal contributes to both the training and the test side of a fold.
class LeakageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sealread
