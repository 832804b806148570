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

// Mamdani fuzzy inference over triangular Ruspini partitions.
//
// Each variable is a domain [lo, hi] and a strictly increasing list of
// label apexes with the first apex at lo and the last at hi. Label k rises
// linearly from apex k-1 to 1 at apex k and falls to 0 at apex k+1, so at
// every point of the domain the degrees sum to 1.
//
// A rule fires with weight * min(antecedent degrees) and clips its
// consequent label; clipped consequents are combined with max. The crisp
// output is the centroid of that aggregate.

#ifndef LISPS_FOG_FUZZY_HPP_
#define LISPS_FOG_FUZZY_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lisps::fog {

class FuzzyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FuzzyVariable {
 public:
  FuzzyVariable(std::string name, std::vector<std::string> labels, std::vector<double> apexes);

  const std::string& name() const { return name_; }
  double lo() const { return apexes_.front(); }
  double hi() const { return apexes_.back(); }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& apexes() const { return apexes_; }

  // Throws FuzzyError for an unknown label.
  std::size_t label_index(const std::string& label) const;

  // Degree of label `k` at `x`; x is clamped to the domain.
  double membership(std::size_t k, double x) const;

  // Degrees of all labels, indexed like labels().
  std::vector<double> fuzzify(double x) const;
  std::map<std::string, double> fuzzify_labels(double x) const;

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<double> apexes_;
};

struct Antecedent {
  std::size_t variable;
  std::size_t label;
};

struct Rule {
  std::vector<Antecedent> antecedents;
  std::size_t consequent;
  double weight = 1.0;
};

class RuleBase {
 public:
  // Validates label references and weights, then checks that some rule
  // fires at every point of the input domain. Throws FuzzyError.
  RuleBase(std::vector<FuzzyVariable> inputs, FuzzyVariable output, std::vector<Rule> rules);

  const std::vector<FuzzyVariable>& inputs() const { return inputs_; }
  const FuzzyVariable& output() const { return output_; }
  const std::vector<Rule>& rules() const { return rules_; }

  // Index of the input variable called `name`; throws FuzzyError.
  std::size_t input_index(const std::string& name) const;

  // Line format (blank lines and '#' comments ignored):
  //   input  <name> <label>:<apex> ...
  //   output <name> <label>:<apex> ...
  //   rule   <var>=<label> [& <var>=<label> ...] -> <label> [<weight>]
  static RuleBase parse(const std::string& text);
  std::string to_text() const;

 private:
  void check_coverage() const;

  std::vector<FuzzyVariable> inputs_;
  FuzzyVariable output_;
  std::vector<Rule> rules_;
};

// Aggregated output membership: label k of the output variable clipped at
// levels[k], combined with max.
class AggregateMembership {
 public:
  AggregateMembership(FuzzyVariable output, std::vector<double> levels);

  const FuzzyVariable& output() const { return output_; }
  const std::vector<double>& levels() const { return levels_; }

  double operator()(double y) const;

  // Every point where the aggregate changes slope, including the domain
  // ends. Between consecutive breakpoints the aggregate is linear.
  std::vector<double> breakpoints() const;

 private:
  FuzzyVariable output_;
  std::vector<double> levels_;
};

// `degrees[i]` are the fuzzified degrees of input i. Throws FuzzyError when
// no rule fires.
AggregateMembership infer(const RuleBase& rb, std::span<const std::vector<double>> degrees);

inline constexpr std::size_t kCentroidGridPoints = 1001;

// Centroid over the output domain on the fixed 1001-point grid refined with
// the aggregate's breakpoints. The aggregate is linear on every cell, so
// both integrals are evaluated exactly per cell. Throws FuzzyError for an
// identically zero aggregate.
double defuzzify_centroid(const AggregateMembership& agg);

}  // namespace lisps::fog

#endif  // LISPS_FOG_FUZZY_HPP_
