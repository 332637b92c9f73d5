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

#include "wssg/hungarian.h"

#include <limits>

namespace wssg {
namespace {

// Min-cost assignment of every row of `cost` (rows <= cols) to a distinct
// column. Potentials u/v and the 1-based sentinel column 0 follow the usual
// shortest augmenting path formulation.
std::vector<int> SolveRowsLeqCols(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> col_owner(m + 1, 0), way(m + 1, 0);

  for (int i = 1; i <= n; ++i) {
    col_owner[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = col_owner[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const int j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (col_owner[j] != 0) row_to_col[col_owner[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

std::vector<int> MaxWeightAssignment(const Eigen::MatrixXd& scores) {
  const int rows = static_cast<int>(scores.rows());
  const int cols = static_cast<int>(scores.cols());
  if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);
  if (rows <= cols) return SolveRowsLeqCols(-scores);

  const std::vector<int> col_to_row = SolveRowsLeqCols(-scores.transpose());
  std::vector<int> row_to_col(rows, -1);
  for (int c = 0; c < cols; ++c) row_to_col[col_to_row[c]] = c;
  return row_to_col;
}

double AssignmentTotal(const Eigen::MatrixXd& scores,
                       const std::vector<int>& row_to_col) {
  double total = 0.0;
  for (size_t r = 0; r < row_to_col.size(); ++r) {
    if (row_to_col[r] >= 0) {
      total += scores(static_cast<Eigen::Index>(r), row_to_col[r]);
    }
  }
  return total;
}

}  // namespace wssg
