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

#include "srt4d/error.hpp"

#include <charconv>

namespace srt4d {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kShapeMismatch: return "shape mismatch";
    case ErrorKind::kDegenerateRoi: return "degenerate roi";
    case ErrorKind::kOutOfRange: return "out of range";
    case ErrorKind::kBadMagic: return "bad magic";
    case ErrorKind::kUnsupportedVersion: return "unsupported version";
    case ErrorKind::kTruncated: return "truncated";
    case ErrorKind::kUnsortedRecords: return "unsorted records";
    case ErrorKind::kRecordOutOfRange: return "record out of range";
    case ErrorKind::kCorruptHeader: return "corrupt header";
    case ErrorKind::kOverflow: return "overflow";
    case ErrorKind::kTrailingData: return "trailing data";
    case ErrorKind::kIo: return "i/o error";
  }
  return "unknown";
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace srt4d
