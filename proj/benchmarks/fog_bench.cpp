// Copyright 2026 The LISPS Authors. All Rights Reserved.
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


#include <benchmark/benchmark.h>

#include <vector>

#include "lisps/fog/assessor.hpp"
#include "lisps/fog/fuzzy.hpp"

namespace {

using namespace lisps;

std::vector<std::vector<double>> degrees_at(const fog::RuleBase& rb, double t) {
  std::vector<std::vector<double>> d;
  for (const auto& v : rb.inputs()) d.push_back(v.fuzzify(v.lo() + t * (v.hi() - v.lo())));
  return d;
}

void BM_Infer(benchmark::State& state) {
  const fog::RuleBase rb = fog::default_rulebase();
  const auto d = degrees_at(rb, 0.37);
  for (auto _ : state) benchmark::DoNotOptimize(fog::infer(rb, d));
}
BENCHMARK(BM_Infer);

void BM_DefuzzifyCentroid(benchmark::State& state) {
  const fog::RuleBase rb = fog::default_rulebase();
  const fog::AggregateMembership agg = fog::infer(rb, degrees_at(rb, 0.37));
  for (auto _ : state) benchmark::DoNotOptimize(fog::defuzzify_centroid(agg));
}
BENCHMARK(BM_DefuzzifyCentroid);

// One object end to end: fuzzify, infer, defuzzify.
void BM_Score(benchmark::State& state) {
  const fog::SuspicionAssessor a(fog::default_rulebase(), fog::FactorTable{}, 0.2);
  const fog::ContextualInputs in{8.0, 0.4, 25.0, 1.3};
  for (auto _ : state) benchmark::DoNotOptimize(a.score(in));
}
BENCHMARK(BM_Score);

}  // namespace
