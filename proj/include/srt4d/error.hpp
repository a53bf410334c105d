// Copyright 2026 The srt4d Authors
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
#include <string_view>

namespace srt4d {

enum class ErrorKind {
  kInvalidArgument,
  kShapeMismatch,
  kDegenerateRoi,
  kOutOfRange,
  kBadMagic,
  kUnsupportedVersion,
  kTruncated,
  kUnsortedRecords,
  kRecordOutOfRange,
  kCorruptHeader,
  kOverflow,
  kTrailingData,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Shortest decimal that round-trips, e.g. "0.01", "5".
std::string format_number(double v);

/// Library-wide exception. `kind()` identifies the failure class so callers
/// (and tests) can branch on it without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace srt4d
