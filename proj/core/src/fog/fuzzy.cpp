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

#include "lisps/fog/fuzzy.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace lisps::fog {

FuzzyVariable::FuzzyVariable(std::string name, std::vector<std::string> labels,
                             std::vector<double> apexes)
    : name_(std::move(name)), labels_(std::move(labels)), apexes_(std::move(apexes)) {
  if (labels_.empty() || labels_.size() != apexes_.size()) {
    throw FuzzyError("variable " + name_ + ": labels and apexes must match and be non-empty");
  }
  if (labels_.size() < 2) throw FuzzyError("variable " + name_ + ": needs at least two labels");
  for (std::size_t i = 0; i < apexes_.size(); ++i) {
    if (!std::isfinite(apexes_[i])) throw FuzzyError("variable " + name_ + ": non-finite apex");
    if (i > 0 && !(apexes_[i] > apexes_[i - 1])) {
      throw FuzzyError("variable " + name_ + ": apexes must be strictly increasing");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (labels_[i] == labels_[j]) throw FuzzyError("variable " + name_ + ": duplicate label");
    }
  }
}

std::size_t FuzzyVariable::label_index(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw FuzzyError("variable " + name_ + " has no label '" + label + "'");
}

double FuzzyVariable::membership(std::size_t k, double x) const {
  x = std::clamp(x, lo(), hi());
  const double a = apexes_[k];
  if (x == a) return 1.0;
  if (x < a) {
    if (k == 0) return 0.0;
    const double p = apexes_[k - 1];
    return x <= p ? 0.0 : (x - p) / (a - p);
  }
  if (k + 1 == apexes_.size()) return 0.0;
  const double n = apexes_[k + 1];
  return x >= n ? 0.0 : (n - x) / (n - a);
}

std::vector<double> FuzzyVariable::fuzzify(double x) const {
  std::vector<double> out(labels_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = membership(k, x);
  return out;
}

std::map<std::string, double> FuzzyVariable::fuzzify_labels(double x) const {
  std::map<std::string, double> out;
  for (std::size_t k = 0; k < labels_.size(); ++k) out[labels_[k]] = membership(k, x);
  return out;
}

RuleBase::RuleBase(std::vector<FuzzyVariable> inputs, FuzzyVariable output, std::vector<Rule> rules)
    : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)) {
  if (inputs_.empty()) throw FuzzyError("rulebase: no input variables");
  if (rules_.empty()) throw FuzzyError("rulebase: no rules");
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    const Rule& rule = rules_[r];
    if (rule.antecedents.empty()) throw FuzzyError(fmt::format("rule {}: no antecedents", r + 1));
    for (const auto& a : rule.antecedents) {
      if (a.variable >= inputs_.size() || a.label >= inputs_[a.variable].size()) {
        throw FuzzyError(fmt::format("rule {}: unknown antecedent label", r + 1));
      }
    }
    if (rule.consequent >= output_.size()) {
      throw FuzzyError(fmt::format("rule {}: unknown consequent label", r + 1));
    }
    if (!(rule.weight > 0.0 && rule.weight <= 1.0)) {
      throw FuzzyError(fmt::format("rule {}: weight must be in (0,1]", r + 1));
    }
  }
  check_coverage();
}

std::size_t RuleBase::input_index(const std::string& name) const {
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    if (inputs_[i].name() == name) return i;
  }
  throw FuzzyError("rulebase has no input '" + name + "'");
}

// Along each axis a point is either at an apex (one label positive) or
// strictly between two apexes (both neighbours positive). A rule fires at
// a point iff each antecedent label is positive there, which depends only
// on these sites, so enumerating the site product covers the whole domain.
void RuleBase::check_coverage() const {
  struct Site {
    std::size_t first;
    std::size_t last;  // positive labels are [first, last]
  };
  std::vector<std::vector<Site>> sites(inputs_.size());
  for (std::size_t v = 0; v < inputs_.size(); ++v) {
    const std::size_t n = inputs_[v].size();
    for (std::size_t k = 0; k < n; ++k) {
      sites[v].push_back({k, k});
      if (k + 1 < n) sites[v].push_back({k, k + 1});
    }
  }
  std::vector<std::size_t> pick(inputs_.size(), 0);
  while (true) {
    bool fired = false;
    for (const auto& rule : rules_) {
      bool all = true;
      for (const auto& a : rule.antecedents) {
        const Site& s = sites[a.variable][pick[a.variable]];
        if (a.label < s.first || a.label > s.last) {
          all = false;
          break;
        }
      }
      if (all) {
        fired = true;
        break;
      }
    }
    if (!fired) {
      std::string where;
      for (std::size_t v = 0; v < inputs_.size(); ++v) {
        const Site& s = sites[v][pick[v]];
        const auto& var = inputs_[v];
        where += fmt::format(" {}={}", var.name(),
                             s.first == s.last
                                 ? var.labels()[s.first]
                                 : var.labels()[s.first] + ".." + var.labels()[s.last]);
      }
      throw FuzzyError("rulebase: no rule fires at" + where);
    }
    std::size_t v = 0;
    while (v < pick.size() && ++pick[v] == sites[v].size()) pick[v++] = 0;
    if (v == pick.size()) break;
  }
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

FuzzyVariable parse_variable(const std::vector<std::string>& toks, std::size_t lineno) {
  if (toks.size() < 4) throw FuzzyError(fmt::format("rulebase line {}: variable needs labels", lineno));
  std::vector<std::string> labels;
  std::vector<double> apexes;
  for (std::size_t i = 2; i < toks.size(); ++i) {
    const auto colon = toks[i].find(':');
    if (colon == std::string::npos) {
      throw FuzzyError(fmt::format("rulebase line {}: expected <label>:<apex>", lineno));
    }
    labels.push_back(toks[i].substr(0, colon));
    try {
      apexes.push_back(std::stod(toks[i].substr(colon + 1)));
    } catch (const std::exception&) {
      throw FuzzyError(fmt::format("rulebase line {}: bad apex '{}'", lineno, toks[i]));
    }
  }
  return FuzzyVariable(toks[1], std::move(labels), std::move(apexes));
}

}  // namespace

RuleBase RuleBase::parse(const std::string& text) {
  std::vector<FuzzyVariable> inputs;
  std::optional<FuzzyVariable> output;
  std::vector<std::vector<std::string>> rule_lines;
  std::vector<std::size_t> rule_linenos;

  std::istringstream in(text);
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "input") {
      inputs.push_back(parse_variable(toks, lineno));
    } else if (toks[0] == "output") {
      if (output) throw FuzzyError(fmt::format("rulebase line {}: second output", lineno));
      output = parse_variable(toks, lineno);
    } else if (toks[0] == "rule") {
      rule_lines.push_back(std::move(toks));
      rule_linenos.push_back(lineno);
    } else {
      throw FuzzyError(fmt::format("rulebase line {}: unknown directive '{}'", lineno, toks[0]));
    }
  }
  if (!output) throw FuzzyError("rulebase: missing output variable");

  auto find_input = [&](const std::string& name, std::size_t lineno) {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (inputs[i].name() == name) return i;
    }
    throw FuzzyError(fmt::format("rulebase line {}: unknown input '{}'", lineno, name));
  };

  std::vector<Rule> rules;
  for (std::size_t r = 0; r < rule_lines.size(); ++r) {
    const auto& toks = rule_lines[r];
    const std::size_t lineno = rule_linenos[r];
    Rule rule;
    std::size_t i = 1;
    for (; i < toks.size() && toks[i] != "->"; ++i) {
      if (toks[i] == "&") continue;
      const auto eq = toks[i].find('=');
      if (eq == std::string::npos) {
        throw FuzzyError(fmt::format("rulebase line {}: expected <var>=<label>", lineno));
      }
      const std::size_t v = find_input(toks[i].substr(0, eq), lineno);
      rule.antecedents.push_back({v, inputs[v].label_index(toks[i].substr(eq + 1))});
    }
    if (i + 1 >= toks.size()) throw FuzzyError(fmt::format("rulebase line {}: missing consequent", lineno));
    rule.consequent = output->label_index(toks[i + 1]);
    if (i + 2 < toks.size()) {
      try {
        rule.weight = std::stod(toks[i + 2]);
      } catch (const std::exception&) {
        throw FuzzyError(fmt::format("rulebase line {}: bad weight", lineno));
      }
    }
    if (i + 3 < toks.size()) throw FuzzyError(fmt::format("rulebase line {}: trailing tokens", lineno));
    rules.push_back(std::move(rule));
  }
  return RuleBase(std::move(inputs), std::move(*output), std::move(rules));
}

std::string RuleBase::to_text() const {
  std::string out;
  auto var_line = [](const char* kind, const FuzzyVariable& v) {
    std::string s = fmt::format("{} {}", kind, v.name());
    for (std::size_t k = 0; k < v.size(); ++k) s += fmt::format(" {}:{}", v.labels()[k], v.apexes()[k]);
    return s + "\n";
  };
  for (const auto& v : inputs_) out += var_line("input", v);
  out += var_line("output", output_);
  for (const auto& r : rules_) {
    out += "rule";
    for (std::size_t i = 0; i < r.antecedents.size(); ++i) {
      const auto& a = r.antecedents[i];
      out += fmt::format("{} {}={}", i == 0 ? "" : " &", inputs_[a.variable].name(),
                         inputs_[a.variable].labels()[a.label]);
    }
    out += fmt::format(" -> {} {}\n", output_.labels()[r.consequent], r.weight);
  }
  return out;
}

AggregateMembership::AggregateMembership(FuzzyVariable output, std::vector<double> levels)
    : output_(std::move(output)), levels_(std::move(levels)) {
  if (levels_.size() != output_.size()) throw FuzzyError("aggregate: one level per output label");
  for (double l : levels_) {
    if (!(l >= 0.0 && l <= 1.0)) throw FuzzyError("aggregate: levels must be in [0,1]");
  }
}

double AggregateMembership::operator()(double y) const {
  double m = 0.0;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (levels_[k] > 0.0) m = std::max(m, std::min(output_.membership(k, y), levels_[k]));
  }
  return m;
}

std::vector<double> AggregateMembership::breakpoints() const {
  const auto& ap = output_.apexes();
  const double lo = output_.lo();
  const double hi = output_.hi();
  std::vector<double> pts{lo, hi};
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    const double level = levels_[k];
    if (level <= 0.0) continue;
    active.push_back(k);
    pts.push_back(ap[k]);
    if (k > 0) {
      pts.push_back(ap[k - 1]);
      pts.push_back(ap[k - 1] + level * (ap[k] - ap[k - 1]));
    }
    if (k + 1 < ap.size()) {
      pts.push_back(ap[k + 1]);
      pts.push_back(ap[k + 1] - level * (ap[k + 1] - ap[k]));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Components are linear between these points; add where two of them
  // cross, since the max switches branches there.
  auto component = [&](std::size_t k, double y) {
    return std::min(output_.membership(k, y), levels_[k]);
  };
  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    for (std::size_t p = 0; p < active.size(); ++p) {
      for (std::size_t q = p + 1; q < active.size(); ++q) {
        const double da = component(active[p], a) - component(active[q], a);
        const double db = component(active[p], b) - component(active[q], b);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
          crossings.push_back(a + (b - a) * da / (da - db));
        }
      }
    }
  }
  pts.insert(pts.end(), crossings.begin(), crossings.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

AggregateMembership infer(const RuleBase& rb, std::span<const std::vector<double>> degrees) {
  if (degrees.size() != rb.inputs().size()) throw FuzzyError("infer: one degree vector per input");
  std::vector<double> levels(rb.output().size(), 0.0);
  bool fired = false;
  for (const auto& rule : rb.rules()) {
    double strength = 1.0;
    for (const auto& a : rule.antecedents) strength = std::min(strength, degrees[a.variable][a.label]);
    strength *= rule.weight;
    if (strength > 0.0) {
      fired = true;
      levels[rule.consequent] = std::max(levels[rule.consequent], strength);
    }
  }
  if (!fired) throw FuzzyError("infer: no rule fired");
  return AggregateMembership(rb.output(), std::move(levels));
}

double defuzzify_centroid(const AggregateMembership& agg) {
  const double lo = agg.output().lo();
  const double hi = agg.output().hi();
  std::vector<double> nodes = agg.breakpoints();
  nodes.reserve(nodes.size() + kCentroidGridPoints);
  for (std::size_t i = 0; i < kCentroidGridPoints; ++i) {
    nodes.push_back(lo + (hi - lo) * static_cast<double>(i) /
                             static_cast<double>(kCentroidGridPoints - 1));
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  double mass = 0.0;
  double moment = 0.0;
  double a = nodes.front();
  double ma = agg(a);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double b = nodes[i];
    const double mb = agg(b);
    const double h = b - a;
    mass += h * (ma + mb) / 2.0;
    // Exact integral of y * mu(y) for linear mu on [a, b].
    moment += h * (2.0 * a * ma + a * mb + b * ma + 2.0 * b * mb) / 6.0;
    a = b;
    ma = mb;
  }
  if (!(mass > 0.0)) throw FuzzyError("defuzzify: aggregate has zero mass");
  return std::clamp(moment / mass, lo, hi);
}

}  // namespace lisps::fog
