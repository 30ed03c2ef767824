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

#include "loslap/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace loslap {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

bool has_extension(const std::string& path, const std::string& ext) {
  return path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
}

ComplexMatrix matrix_from_json(const json& j) {
  const std::size_t rows = j.at("m").get<std::size_t>();
  const std::size_t cols = j.at("n").get<std::size_t>();
  const json& re = j.at("re");
  const json& im = j.at("im");
  if (re.size() != rows || im.size() != rows) {
    throw std::invalid_argument("matrix JSON: re/im row count does not match m");
  }
  ComplexMatrix u(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (re[i].size() != cols || im[i].size() != cols) {
      throw std::invalid_argument("matrix JSON: re/im column count does not match n");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      u(i, k) = cplx{re[i][k].get<double>(), im[i][k].get<double>()};
    }
  }
  return u;
}

json matrix_to_json(const ComplexMatrix& u) {
  json re = json::array();
  json im = json::array();
  for (std::size_t i = 0; i < u.rows(); ++i) {
    json re_row = json::array();
    json im_row = json::array();
    for (std::size_t k = 0; k < u.cols(); ++k) {
      re_row.push_back(u(i, k).real());
      im_row.push_back(u(i, k).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"m", u.rows()}, {"n", u.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

std::vector<double> parse_double_row(const std::string& line) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t comma = line.find(',', pos);
    const std::string token =
        line.substr(pos, comma == std::string::npos ? comma : comma - pos);
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size()) {
      throw std::invalid_argument("bad number '" + token + "' in CSV row");
    }
    values.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return values;
}

}  // namespace

std::string format_double(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

ComplexMatrix matrix_from_json_text(const std::string& text) {
  try {
    return matrix_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad matrix JSON: ") + e.what());
  }
}

std::string matrix_to_json_text(const ComplexMatrix& u) { return matrix_to_json(u).dump(); }

ComplexMatrix matrix_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty matrix CSV");
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (std::sscanf(line.c_str(), "%zu,%zu", &rows, &cols) != 2) {
    throw std::invalid_argument("matrix CSV must start with a 'rows,cols' line");
  }
  ComplexMatrix u(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw std::invalid_argument("matrix CSV ends early");
    const std::vector<double> values = parse_double_row(line);
    if (values.size() != 2 * cols) {
      throw std::invalid_argument("matrix CSV row " + std::to_string(i + 1) + " has " +
                                  std::to_string(values.size()) + " values, expected " +
                                  std::to_string(2 * cols));
    }
    for (std::size_t k = 0; k < cols; ++k) {
      u(i, k) = cplx{values[2 * k], values[2 * k + 1]};
    }
  }
  return u;
}

void matrix_to_csv(const ComplexMatrix& u, std::ostream& out) {
  out << u.rows() << ',' << u.cols() << '\n';
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t k = 0; k < u.cols(); ++k) {
      if (k > 0) out << ',';
      out << format_double(u(i, k).real()) << ',' << format_double(u(i, k).imag());
    }
    out << '\n';
  }
}

ComplexMatrix load_matrix(const std::string& path) {
  if (has_extension(path, ".json")) return matrix_from_json_text(read_file(path));
  if (has_extension(path, ".csv")) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return matrix_from_csv(in);
  }
  throw std::invalid_argument("matrix path '" + path + "' must end in .json or .csv");
}

void save_matrix(const ComplexMatrix& u, const std::string& path) {
  if (has_extension(path, ".json")) {
    write_file(path, matrix_to_json_text(u) + "\n");
    return;
  }
  if (has_extension(path, ".csv")) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    matrix_to_csv(u, out);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
    return;
  }
  throw std::invalid_argument("matrix path '" + path + "' must end in .json or .csv");
}

AdaptivePolicy policy_from_json_text(const std::string& text) {
  try {
    const json j = json::parse(text);
    AdaptivePolicy policy;
    policy.measured_modes = j.at("k").get<int>();
    if (policy.measured_modes < 0) {
      throw std::invalid_argument("measured mode count must be non-negative");
    }
    for (const json& entry : j.at("entries")) {
      const FockState outcome{parse_state(entry.at("outcome").get<std::string>())};
      if (!policy.table.emplace(outcome, matrix_from_json(entry.at("unitary"))).second) {
        throw std::invalid_argument("duplicate policy outcome '" + format_state(outcome) + "'");
      }
    }
    return policy;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad policy JSON: ") + e.what());
  }
}

std::string policy_to_json_text(const AdaptivePolicy& policy) {
  json entries = json::array();
  for (const auto& [outcome, unitary] : policy.table) {
    entries.push_back(json{{"outcome", format_state(outcome)}, {"unitary", matrix_to_json(unitary)}});
  }
  return json{{"k", policy.measured_modes}, {"entries", std::move(entries)}}.dump();
}

AdaptivePolicy load_policy(const std::string& path) { return policy_from_json_text(read_file(path)); }

std::string plan_to_json_text(const TraversalPlan& plan) {
  json parents = json::object();
  for (const auto& [child, parent] : plan.parent_map) {
    parents[format_partition(child)] = format_partition(parent);
  }
  return json{{"n", plan.n},
              {"m", plan.m},
              {"total_weight", plan.total_weight.get_str()},
              {"parent_map", std::move(parents)}}
      .dump();
}

TraversalPlan plan_from_json_text(const std::string& text) {
  TraversalPlan plan;
  try {
    const json j = json::parse(text);
    plan.n = j.at("n").get<int>();
    plan.m = j.at("m").get<int>();
    for (const auto& [child_text, parent_text] : j.at("parent_map").items()) {
      plan.parent_map.emplace(parse_partition(child_text),
                              parse_partition(parent_text.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad plan JSON: ") + e.what());
  }
  if (plan.n < 0 || plan.m < 1) throw std::invalid_argument("plan needs n >= 0 and m >= 1");
  for (const auto& [child, parent] : plan.parent_map) {
    if (child.empty()) throw std::invalid_argument("plan lists the root as a child");
    int level = 0;
    for (const int part : child) level += part;
    if (level > plan.n) {
      throw std::invalid_argument("partition '" + format_partition(child) + "' exceeds " +
                                  std::to_string(plan.n) + " photons");
    }
    if (!parent.empty() && plan.parent_map.find(parent) == plan.parent_map.end()) {
      throw std::invalid_argument("plan parent '" + format_partition(parent) +
                                  "' is not itself planned");
    }
    int parent_level = 0;
    for (const int part : parent) parent_level += part;
    if (parent_level + 1 != level) {
      throw std::invalid_argument("plan edge '" + format_partition(parent) + "' -> '" +
                                  format_partition(child) + "' does not add one photon");
    }
  }
  // the stored weight is advisory; cost the arborescence we actually loaded
  plan.total_weight = reweight_plan(plan, plan.m).total_weight;
  return plan;
}

void save_plan(const TraversalPlan& plan, const std::string& path) {
  write_file(path, plan_to_json_text(plan) + "\n");
}

TraversalPlan load_plan(const std::string& path) { return plan_from_json_text(read_file(path)); }

void export_stp(const PartitionGraph& g, std::ostream& out) {
  std::size_t arcs = 0;
  for (const PartitionNode& node : g.nodes) arcs += node.children.size();
  out << "33D32945 STP File, STP Format Version 1.0\n";
  out << "SECTION Comment\n";
  out << "Name \"derivative-lattice partition graph n=" << g.n << " m=" << g.m << "\"\n";
  out << "Creator \"loslap\"\n";
  out << "Problem \"SAP\"\n";
  out << "END\n\n";
  out << "SECTION Graph\n";
  out << "Nodes " << g.nodes.size() << '\n';
  out << "Arcs " << arcs << '\n';
  for (std::size_t id = 0; id < g.nodes.size(); ++id) {
    for (const int child : g.nodes[id].children) {
      out << "A " << id + 1 << ' ' << child + 1 << ' ' << g.nodes[child].weight.get_str() << '\n';
    }
  }
  out << "END\n\n";
  out << "SECTION Terminals\n";
  out << "Terminals " << g.terminals.size() << '\n';
  out << "Root 1\n";
  for (const int terminal : g.terminals) out << "T " << terminal + 1 << '\n';
  out << "END\n\nEOF\n";
}

TraversalPlan import_solution(const PartitionGraph& g, std::istream& in) {
  const int node_count = static_cast<int>(g.nodes.size());
  std::vector<int> parent_of(static_cast<std::size_t>(node_count), -1);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;
    long tail = 0;
    long head = 0;
    if (first == "A" || first == "E") {
      if (!(tokens >> tail >> head)) continue;
    } else {
      char* end = nullptr;
      tail = std::strtol(first.c_str(), &end, 10);
      if (end != first.c_str() + first.size() || !(tokens >> head)) continue;
    }
    if (tail < 1 || tail > node_count || head < 1 || head > node_count) {
      throw std::invalid_argument("arc endpoints outside 1.." + std::to_string(node_count) +
                                  " in line '" + line + "'");
    }
    const int parent = static_cast<int>(tail - 1);
    const int child = static_cast<int>(head - 1);
    bool is_edge = false;
    for (const int p : g.nodes[child].parents) is_edge = is_edge || p == parent;
    if (!is_edge) {
      throw std::invalid_argument("arc " + std::to_string(tail) + " " + std::to_string(head) +
                                  " is not a graph edge");
    }
    if (parent_of[child] != -1 && parent_of[child] != parent) {
      throw std::invalid_argument("node '" + format_partition(g.nodes[child].partition) +
                                  "' has two parents in the solution");
    }
    parent_of[child] = parent;
  }

  // every selected node must hang off the root through selected nodes
  for (int v = 0; v < node_count; ++v) {
    if (parent_of[v] == -1) continue;
    const int p = parent_of[v];
    if (p != 0 && parent_of[p] == -1) {
      throw std::invalid_argument("node '" + format_partition(g.nodes[v].partition) +
                                  "' is not connected to the root");
    }
  }
  for (const int terminal : g.terminals) {
    if (terminal != 0 && parent_of[terminal] == -1) {
      throw std::invalid_argument("solution does not cover terminal '" +
                                  format_partition(g.nodes[terminal].partition) + "'");
    }
  }

  TraversalPlan plan;
  plan.n = g.n;
  plan.m = g.m;
  plan.total_weight = 0;
  for (int v = 0; v < node_count; ++v) {
    if (parent_of[v] == -1) continue;
    plan.parent_map.emplace(g.nodes[v].partition, g.nodes[parent_of[v]].partition);
    plan.total_weight += g.nodes[v].weight;
  }
  return plan;
}

}  // namespace loslap
