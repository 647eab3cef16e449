// Copyright 2026 The MGM Authors
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

#ifndef MGM_METRICS_HPP
#define MGM_METRICS_HPP

#include <cstdint>
#include <vector>

#include "mgm/games.hpp"

namespace mgm {

// sum_a p(a) log(p(a) / q(a)) after flooring both inputs at `floor` and
// renormalizing. Throws on a dimension mismatch.
double KlDivergence(const Vector& p, const Vector& q, double floor = 1e-12);

// Component-wise mean; throws on an empty list.
Vector MeanStrategy(const std::vector<Vector>& items);

// Linear-interpolation percentile over the sorted sample, inclusive of the
// endpoints (pct in [0, 100]). NaN entries are ignored; an all-NaN or empty
// sample yields NaN.
double Percentile(std::vector<double> values, double pct);

struct Bands {
  std::vector<double> mean;
  std::vector<double> p5;
  std::vector<double> p25;
  std::vector<double> p75;
  std::vector<double> p95;
};

// Per-index statistics across equally long streams. Throws when the
// streams are empty or their lengths differ.
Bands AggregateSeries(const std::vector<std::vector<double>>& streams);

// For every point of `grid`, the index of the record in `evals` with the
// closest evaluation count (earlier record on ties).
std::vector<std::size_t> NearestIndices(const std::vector<std::int64_t>& evals,
                                        const std::vector<std::int64_t>& grid);

// Final minus initial; 0 for an empty stream.
double KlReduction(const std::vector<double>& kl_stream);

}  // namespace mgm

#endif  // MGM_METRICS_HPP
