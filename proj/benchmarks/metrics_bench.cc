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

#include <random>

#include <Eigen/Core>
#include <benchmark/benchmark.h>

#include "wssg/metrics.h"
#include "wssg/scene.h"

namespace {

Eigen::MatrixXd Distributions(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(rows, cols,
                                                   [&] { return u(rng); });
  for (int r = 0; r < rows; ++r) m.row(r) /= m.row(r).sum();
  return m;
}

// args: instances, mode (0 constrained, 1 unconstrained), limit
void BM_TripletRank(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::mt19937_64 rng(k);
  const Eigen::MatrixXd nodes = Distributions(k, 160, rng);
  const Eigen::MatrixXd edges = Distributions(wssg::NumEdges(k), 27, rng);
  const auto mode = state.range(1) == 0
                        ? wssg::GraphConstraint::kConstrained
                        : wssg::GraphConstraint::kUnconstrained;
  const int limit = static_cast<int>(state.range(2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(wssg::TripletRank(nodes, edges, mode, limit));
  }
}
BENCHMARK(BM_TripletRank)
    ->Args({8, 0, 0})
    ->Args({8, 1, 100})
    ->Args({16, 1, 100})
    ->Unit(benchmark::kMillisecond);

void BM_TopKAccuracy(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const int rows = static_cast<int>(state.range(0));
  const Eigen::MatrixXd probs = Distributions(rows, 160, rng);
  std::vector<int> labels(rows);
  std::uniform_int_distribution<int> l(0, 159);
  for (int& x : labels) x = l(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wssg::TopKAccuracy(probs, labels, 5));
  }
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_TopKAccuracy)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
