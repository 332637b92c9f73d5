/* Copyright 2026 The wssg Authors. All Rights Reserved.

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

#ifndef WSSG_GRADCHECK_H_
#define WSSG_GRADCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "wssg/losses.h"

namespace wssg {

struct GradientSuiteOptions {
  int instances = 20;  // random instances per loss
  double eps = 1e-2;  // initial step of the extrapolation
  // Denominator floor: entries smaller than this are judged on absolute
  // error, where roundoff in the loss value dominates.
  double floor = 1e-5;
};

struct LossGradientSummary {
  std::string loss;  // "contrastive", "cross_entropy" or "total"
  int instances = 0;
  double worst_relative_error = 0.0;
  int worst_instance = -1;
};

// Central-difference check of every analytic loss gradient on seeded random
// instances. Contrastive inputs have unit rows, logits lie in [-2, 2].
std::vector<LossGradientSummary> RunGradientSuite(
    std::uint64_t seed, const GradientSuiteOptions& options = {});

}  // namespace wssg

#endif  // WSSG_GRADCHECK_H_
