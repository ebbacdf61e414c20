//
// Copyright 2026 The cuneilab Authors
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
//

#ifndef CUNEILAB_SRC_CRF_LATTICE_HPP_
#define CUNEILAB_SRC_CRF_LATTICE_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace cuneilab::internal {

// Dense scores for one phrase: state[i * T + t] and trans[a * T + b].
struct Lattice {
  std::size_t length = 0;
  std::size_t num_tags = 0;
  std::vector<double> state;
  std::span<const double> trans;

  double State(std::size_t i, std::size_t t) const {
    return state[i * num_tags + t];
  }
  double Trans(std::size_t a, std::size_t b) const {
    return trans[a * num_tags + b];
  }
};

// Builds state scores from per-position feature ids against a weight
// vector laid out as F x T state weights followed by T x T transitions.
Lattice BuildLattice(std::span<const double> weights, std::size_t num_tags,
                     std::size_t num_features,
                     const std::vector<std::vector<int>>& features);

// alpha[i * T + t], beta[i * T + t].
struct ForwardBackward {
  std::vector<double> alpha;
  std::vector<double> beta;
  double log_z = 0.0;
  double log_z_backward = 0.0;
};

ForwardBackward RunForwardBackward(const Lattice& lattice);

struct CompiledPhrase {
  std::vector<std::vector<int>> features;
  std::vector<int> gold;
};

// Adds this phrase's (logZ - gold score) to the return value and, when
// `gradient` is non-empty, its expected-minus-empirical counts into it.
double AccumulatePhrase(std::span<const double> weights, std::size_t num_tags,
                        std::size_t num_features, const CompiledPhrase& phrase,
                        std::span<double> gradient, bool use_transitions);

}  // namespace cuneilab::internal

#endif  // CUNEILAB_SRC_CRF_LATTICE_HPP_
