// Copyright 2026 The partloc Authors
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

#pragma once

#include "partloc/bbox.hpp"
#include "partloc/tensor.hpp"

namespace partloc {

/// Crop `box` (pixel frame, clipped to the image) out of a C x H x W image and
/// bilinearly resample it to C x out_h x out_w.
///
/// Half-pixel centers: src = (dst + 0.5) * (crop / out) - 0.5, clamped to the
/// crop. A crop that already has the output size is copied exactly.
/// Throws std::invalid_argument if the clipped box is empty.
Tensor crop_resize(const Tensor& img, const BBox& box, int out_h, int out_w);

}  // namespace partloc
