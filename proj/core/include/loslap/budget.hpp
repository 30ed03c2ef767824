/**
 * Copyright 2026 the loslap authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <stdexcept>

namespace loslap {

/// One complex<double> coefficient: two IEEE doubles.
inline constexpr int kBytesPerCoefficientSlot = 16;

/// Default refusal threshold for engine working memory (8 GiB).  The command
/// line tool lets the environment override it via LOSLAP_MEMORY_CAP_BYTES.
inline constexpr std::uint64_t kDefaultMemoryCapBytes = 8ull << 30;

/// Thrown when an engine would exceed its memory (or other resource) budget.
/// Raised before any large allocation happens so callers can recover.
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace loslap
