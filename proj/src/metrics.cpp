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

#include "mgm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mgm {

double KlDivergence(const Vector& p, const Vector& q, double floor) {
  if (p.size() != q.size() || p.size() == 0) {
    throw std::invalid_argument("KlDivergence: dimension mismatch");
  }
  const Vector pf = p.cwiseMax(floor) / p.cwiseMax(floor).sum();
  const Vector qf = q.cwiseMax(floor) / q.cwiseMax(floor).sum();
  double kl = 0.0;
  for (Eigen::Index i = 0; i < pf.size(); ++i) {
    kl += pf[i] * std::log(pf[i] / qf[i]);
  }
  // Rounding can leave a tiny negative value for near-identical inputs.
  return std::max(kl, 0.0);
}

Vector MeanStrategy(const std::vector<Vector>& items) {
  if (items.empty()) throw std::invalid_argument("MeanStrategy: empty list");
  Vector acc = Vector::Zero(items.front().size());
  for (const Vector& v : items) acc += v;
  return acc / static_cast<double>(items.size());
}

double Percentile(std::vector<double> values, double pct) {
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return std::isnan(v); }),
               values.end());
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Bands AggregateSeries(const std::vector<std::vector<double>>& streams) {
  if (streams.empty()) throw std::invalid_argument("AggregateSeries: no streams");
  const std::size_t len = streams.front().size();
  for (const auto& s : streams) {
    if (s.size() != len) {
      throw std::invalid_argument("AggregateSeries: misaligned streams");
    }
  }
  Bands b;
  std::vector<double> column(streams.size());
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0;
    int finite = 0;
    for (std::size_t k = 0; k < streams.size(); ++k) {
      column[k] = streams[k][t];
      if (!std::isnan(column[k])) {
        sum += column[k];
        ++finite;
      }
    }
    b.mean.push_back(finite > 0 ? sum / finite
                                : std::numeric_limits<double>::quiet_NaN());
    b.p5.push_back(Percentile(column, 5.0));
    b.p25.push_back(Percentile(column, 25.0));
    b.p75.push_back(Percentile(column, 75.0));
    b.p95.push_back(Percentile(column, 95.0));
  }
  return b;
}

std::vector<std::size_t> NearestIndices(const std::vector<std::int64_t>& evals,
                                        const std::vector<std::int64_t>& grid) {
  if (evals.empty()) throw std::invalid_argument("NearestIndices: empty stream");
  std::vector<std::size_t> out;
  out.reserve(grid.size());
  for (std::int64_t g : grid) {
    auto it = std::lower_bound(evals.begin(), evals.end(), g);
    std::size_t idx;
    if (it == evals.end()) {
      idx = evals.size() - 1;
    } else if (it == evals.begin()) {
      idx = 0;
    } else {
      const std::size_t after = static_cast<std::size_t>(it - evals.begin());
      idx = (g - evals[after - 1] <= *it - g) ? after - 1 : after;
    }
    out.push_back(idx);
  }
  return out;
}

double KlReduction(const std::vector<double>& kl_stream) {
  if (kl_stream.empty()) return 0.0;
  return kl_stream.back() - kl_stream.front();
}

}  // namespace mgm
