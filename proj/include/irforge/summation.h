// Copyright 2026 The irforge Authors.
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

#ifndef IRFORGE_SUMMATION_H_
#define IRFORGE_SUMMATION_H_

#include <cstddef>
#include <span>

namespace irforge {

// Recursive halving sum. The association order depends only on the length,
// so results are reproducible no matter how the inputs were produced.
inline double PairwiseSum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() == 1) return values[0];
  if (values.size() == 2) return values[0] + values[1];
  const std::size_t half = values.size() / 2;
  return PairwiseSum(values.first(half)) + PairwiseSum(values.subspan(half));
}

inline double PairwiseMean(std::span<const double> values) {
  return PairwiseSum(values) / static_cast<double>(values.size());
}

}  // namespace irforge

#endif  // IRFORGE_SUMMATION_H_
