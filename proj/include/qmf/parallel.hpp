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

#pragma once

#include <optional>

namespace qmf {

/// Worker threads used by particle loops. Results never depend on this value.
void set_thread_count(int threads);
int thread_count();

/// Value of the QMF_THREADS environment variable, if set to a positive integer.
std::optional<int> thread_count_from_env();

}  // namespace qmf
