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

#include <iosfwd>
#include <string>

#include "loslap/adaptive.hpp"
#include "loslap/matrix.hpp"
#include "loslap/steiner.hpp"

namespace loslap {

/**
 * File formats.  Matrices travel either as JSON
 *   {"m": rows, "n": cols, "re": [[...]], "im": [[...]]}
 * or as CSV with a "rows,cols" header line followed by one line per row of
 * re,im pairs.  Numbers are printed with 17 significant digits so values
 * round-trip exactly.
 */

ComplexMatrix matrix_from_json_text(const std::string& text);
std::string matrix_to_json_text(const ComplexMatrix& u);

ComplexMatrix matrix_from_csv(std::istream& in);
void matrix_to_csv(const ComplexMatrix& u, std::ostream& out);

/// Dispatch on extension: .json or .csv.
ComplexMatrix load_matrix(const std::string& path);
void save_matrix(const ComplexMatrix& u, const std::string& path);

/**
 * Feed-forward policies as JSON:
 *   {"k": measured_modes,
 *    "entries": [{"outcome": "0,1", "unitary": <matrix object>}, ...]}
 */
AdaptivePolicy policy_from_json_text(const std::string& text);
std::string policy_to_json_text(const AdaptivePolicy& policy);
AdaptivePolicy load_policy(const std::string& path);

/**
 * Traversal plans as JSON:
 *   {"n": ..., "m": ..., "total_weight": "decimal string",
 *    "parent_map": {"2,1": "1,1", ...}}  (the root is the empty string).
 * Loading revalidates the arborescence and recomputes the weight.
 */
std::string plan_to_json_text(const TraversalPlan& plan);
TraversalPlan plan_from_json_text(const std::string& text);
void save_plan(const TraversalPlan& plan, const std::string& path);
TraversalPlan load_plan(const std::string& path);

/**
 * @brief Steiner-arborescence instance in SteinLib STP format.
 *
 * Directed arcs ("A tail head weight", one-based node ids in graph index
 * order), terminal section with the root first.  Solutions from external
 * solvers come back as lines containing "tail head" pairs (optionally
 * prefixed with A or E); import validates that the arcs form an arborescence
 * rooted at the empty partition covering every terminal and rebuilds the
 * plan, throwing std::invalid_argument naming the first missing terminal
 * otherwise.
 */
void export_stp(const PartitionGraph& g, std::ostream& out);
TraversalPlan import_solution(const PartitionGraph& g, std::istream& in);

/// 17-significant-digit formatting used by every CSV emitter.
std::string format_double(double x);

}  // namespace loslap
