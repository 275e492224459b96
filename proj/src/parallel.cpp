// Copyright 2026 The qmf Authors
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

#include "qmf/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace qmf {

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

std::optional<int> thread_count_from_env() {
  const char* raw = std::getenv("QMF_THREADS");
  if (raw == nullptr) return std::nullopt;
  try {
    const int value = std::stoi(raw);
    if (value > 0) return value;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

}  // namespace qmf
