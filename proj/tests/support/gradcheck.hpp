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

// Central finite differences against analytic gradients, one parameter at a
// time. Runs in double: a 1e-3 step on float32 loses most significant digits
// to rounding before the difference is taken.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "partloc/toynet.hpp"

namespace gradcheck {

struct Report {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  double max_rel = 0.0;
  std::string worst;

  double skip_rate() const {
    const std::size_t n = checked + skipped;
    return n == 0 ? 0.0 : static_cast<double>(skipped) / static_cast<double>(n);
  }
};

/// |a - n| / max(|a|, |n|, floor). The floor keeps gradients that are zero up
/// to rounding from dominating the ratio.
inline double relative_error(double a, double n, double floor) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor});
}

/// `loss(p, same)` evaluates the loss at p and sets `same` to whether every
/// max-pool winner and ReLU branch matches the unperturbed point.
template <class LossFn>
Report run(const partloc::BasicToyNetParams<double>& at, const partloc::BasicToyNetParams<double>& analytic, LossFn loss,
           double step = 1e-3, double tol = 1e-3, double floor = 1e-6) {
  Report r;
  partloc::BasicToyNetParams<double> p = at;
  std::vector<partloc::BasicTensor<double>*> slots;
  std::vector<const partloc::BasicTensor<double>*> grads;
  std::vector<std::string> names;
  p.for_each([&](const char* name, partloc::BasicTensor<double>& t) {
    slots.push_back(&t);
    names.emplace_back(name);
  });
  analytic.for_each([&](const char*, const partloc::BasicTensor<double>& t) { grads.push_back(&t); });

  for (std::size_t s = 0; s < slots.size(); ++s) {
    for (std::size_t i = 0; i < slots[s]->size(); ++i) {
      double& v = (*slots[s])[i];
      const double orig = v;
      bool same_plus = true, same_minus = true;
      v = orig + step;
      const double lp = loss(p, same_plus);
      v = orig - step;
      const double lm = loss(p, same_minus);
      v = orig;
      if (!same_plus || !same_minus) {
        ++r.skipped;
        continue;
      }
      ++r.checked;
      const double numeric = (lp - lm) / (2.0 * step);
      const double rel = relative_error((*grads[s])[i], numeric, floor);
      if (rel > tol) ++r.failed;
      if (rel > r.max_rel) {
        r.max_rel = rel;
        r.worst = names[s] + "[" + std::to_string(i) + "]";
      }
    }
  }
  return r;
}

}  // namespace gradcheck
