// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace uinav {

// Base for every error the harness raises on bad inputs or I/O.
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document: message carries the file (when known) and the
// offending path, e.g. "screens/home.json: root.children[2].bounds: ...".
class SchemaError : public HarnessError {
 public:
  using HarnessError::HarnessError;
};

// A manifest/task/evaluator points at a file that does not exist.
class DanglingRef : public HarnessError {
 public:
  using HarnessError::HarnessError;
};

class IoError : public HarnessError {
 public:
  using HarnessError::HarnessError;
};

// Raster payload could not be decoded as PNG.
class DecodeError : public HarnessError {
 public:
  using HarnessError::HarnessError;
};

// Screenshot dimensions disagree with the screen's declared size.
class SizeMismatch : public HarnessError {
 public:
  using HarnessError::HarnessError;
};

// Image/annotated observation requested without a screenshot.
class MissingScreenshot : public HarnessError {
 public:
  using HarnessError::HarnessError;
};

// Two recordings disagree on the successor of (state, action key).
class ConflictError : public HarnessError {
 public:
  using HarnessError::HarnessError;
};

// Replay environment under the `fail` policy saw an unrecorded action.
class NoTransition : public HarnessError {
 public:
  using HarnessError::HarnessError;
};

class BackendError : public HarnessError {
 public:
  enum class Kind { network, http_status, empty_choice, cache_miss };

  BackendError(Kind kind, const std::string& message, int status = 0)
      : HarnessError(message), kind_(kind), status_(status) {}

  Kind kind() const { return kind_; }
  int http_status() const { return status_; }

 private:
  Kind kind_;
  int status_;
};

}  // namespace uinav
