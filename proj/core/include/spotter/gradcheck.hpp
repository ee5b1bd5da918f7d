/* Copyright 2026 The Spotter Authors. All Rights Reserved.

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

#pragma once

#include <cstdint>
#include <vector>

#include "spotter/stack.hpp"

namespace spotter {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t probes = 0;  // number of coordinates compared
  /// Smallest distance of any ReLU input or pooling runner-up from a kink.
  /// Finite differences straddling a kink are meaningless, so callers should
  /// reject probe points where this is below a few multiples of the step.
  double kink_margin = 0.0;
};

/// Compares analytic gradients of a layer stack against central finite
/// differences, in 64-bit arithmetic with step 1e-5.
///
/// Parameters are drawn from `seed`. When the stack ends with a SoftmaxHead
/// the loss is softmax cross-entropy against `label` (the head must see a
/// 2x1x1 tensor); otherwise the loss is a fixed random projection of the
/// output. Dropout layers reuse one fixed mask for every evaluation.
/// The error is max |a - n| / max(|a|, |n|, 1e-12) over every parameter and
/// input coordinate.
GradCheckResult grad_check(const std::vector<LayerDesc>& layers, const Tensor64& input,
                           std::uint64_t seed, int label = 1);

}  // namespace spotter
