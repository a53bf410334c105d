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

#include "srt4d/dense_tensor.hpp"
#include "srt4d/grid.hpp"

namespace srt4d {

/// Mean over the Doppler axis of a (D, R, A, E) power tensor, giving the
/// (R, A, E) polar tensor. Sums in double, in Doppler-bin order, so the
/// result does not depend on the thread count.
DenseTensorD reduce_doppler(const DenseTensorF& tensor, const PolarGrid4D& grid);

/// Single-threaded reference kernel, bit-identical to reduce_doppler.
DenseTensorD reduce_doppler_serial(const DenseTensorF& tensor, const PolarGrid4D& grid);

/// Throws kShapeMismatch naming the first axis whose extent disagrees with
/// the grid. `with_doppler` selects the 4D or the Doppler-reduced 3D layout.
void check_shape_against_grid(const std::vector<std::size_t>& shape, const PolarGrid4D& grid,
                              bool with_doppler);

}  // namespace srt4d
