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

#ifndef WSSG_HUNGARIAN_H_
#define WSSG_HUNGARIAN_H_

#include <vector>

#include <Eigen/Core>

namespace wssg {

// Maximum-weight one-to-one matching on a rectangular score matrix.
// Returns, for every row, the matched column or -1; exactly min(rows, cols)
// rows are matched. Solved as a min-cost assignment on the negated scores
// with shortest augmenting paths (O(n^2 m)); scans are in index order, so
// the result is deterministic.
std::vector<int> MaxWeightAssignment(const Eigen::MatrixXd& scores);

// Sum of scores over matched pairs, accumulated in row order.
double AssignmentTotal(const Eigen::MatrixXd& scores,
                       const std::vector<int>& row_to_col);

}  // namespace wssg

#endif  // WSSG_HUNGARIAN_H_
