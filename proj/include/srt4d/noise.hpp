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

#include <cstddef>
#include <cstdint>

#include "srt4d/philox.hpp"

namespace srt4d {

/// -ln(u) for u in (0, 1], polynomial, about 1e-7 relative. Independent of
/// the platform libm so noise streams match bit-for-bit wherever IEEE float
/// arithmetic does.
float neg_log_unit(float u);

/// sin and cos of 2*pi*turns for turns in [0, 1].
void sincos_turns(float turns, float& s, float& c);

/// Writes 2 * pairs circular complex Gaussian samples with E|z|^2 = variance.
/// Samples 2p and 2p+1 come from the Philox block at counter
/// {lo32(first_pair + p), stream, hi32(first_pair + p), 0} via Box-Muller, so
/// any slice of the stream can be generated independently.
void fill_complex_gaussian(Philox4x32::Key key, std::uint32_t stream, std::uint64_t first_pair,
                           std::size_t pairs, float variance, float* re, float* im);

}  // namespace srt4d
