// Copyright 2026 The bansec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#ifndef BANSEC_ASSESSMENT_HPP_
#define BANSEC_ASSESSMENT_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bansec/profile.hpp"
#include "bansec/result.hpp"

namespace bansec::assessment {

// Security-assessment methodology as data plus checks: attribute registries,
// use-case specifications with their attribute mappings, per-spec fulfillment
// verdicts, and the recommendation traceability graph. The dataset ships as a
// line-oriented text file (data/assessment.dat) embedded at build time; every
// verdict row carries its rationale and whether the cell was quotable or had
// to be reconstructed.

enum class FulfillStatus : uint8_t { NotSatisfied = 0, Partial = 1, Satisfied = 2 };

std::string_view status_name(FulfillStatus s);
std::string_view status_color(FulfillStatus s);  // Red / Yellow / Green legend

struct Attribute {
  std::string id;    // S1..S11, E1..T3, or a device-class name
  std::string name;
  enum class Group : uint8_t { Security, Physical, DeviceClass } group;
};

struct UseCase {
  std::string id;
  std::string name;
  std::vector<std::string> device_classes;
};

struct UseCaseSpec {
  std::string id;        // e.g. U1.3
  std::string use_case;  // UC1..UC3
  std::vector<std::string> attributes;  // mapped Sx/Px ids, never empty
  std::string summary;
};

struct Verdict {
  std::string spec_id;
  FulfillStatus status = FulfillStatus::NotSatisfied;
  std::string rationale;
  bool reconstructed = false;
};

struct Recommendation {
  std::string id;  // PO1..PO5, CC1..CC3, AA1..AA3, O1..O3
  std::string category;
  std::string summary;
  std::vector<std::string> motivating_specs;
  std::string feature;  // what implements it in this artifact
  bool reconstructed = false;
};

class Registry {
 public:
  // Parses the dataset text; validates cardinalities and cross-references.
  static Result<Registry> load(std::string_view text);
  // The copy embedded at build time.
  static const Registry& embedded();

  const std::vector<Attribute>& attributes() const { return attributes_; }
  const std::vector<UseCase>& use_cases() const { return use_cases_; }
  const std::vector<UseCaseSpec>& specs() const { return specs_; }
  const std::vector<Verdict>& baseline_verdicts() const { return verdicts_; }
  const std::vector<Recommendation>& recommendations() const { return recommendations_; }

  const UseCase* find_use_case(const std::string& id) const;

 private:
  std::vector<Attribute> attributes_;
  std::vector<UseCase> use_cases_;
  std::vector<UseCaseSpec> specs_;
  std::vector<Verdict> verdicts_;
  std::vector<Recommendation> recommendations_;
};

struct CoverageMatrix {
  std::vector<std::string> attribute_ids;  // rows
  std::vector<std::string> use_case_ids;   // columns
  std::vector<std::vector<bool>> cells;    // [row][col]

  bool covered(size_t row) const;
  bool operator==(const CoverageMatrix&) const = default;
};

// Cell true iff any spec (or declared device class) of the use case carries
// the attribute. Unknown use-case ids are a Registry error.
Result<CoverageMatrix> coverage_matrix(const Registry& reg,
                                       const std::vector<std::string>& use_case_ids);

// Uncovered attribute ids, in registry order; empty means the selection is
// collectively exhaustive.
Result<std::vector<std::string>> completeness_gaps(const Registry& reg,
                                                   const std::vector<std::string>& use_case_ids);

struct FulfillmentMatrix {
  Profile profile = Profile::Baseline;
  std::vector<Verdict> rows;

  bool operator==(const FulfillmentMatrix&) const = default;
};

// Baseline returns the embedded verdicts verbatim. Hardened upgrades a spec
// to Satisfied when every recommendation motivated by it is implemented in
// this artifact (all fourteen are), and never downgrades.
FulfillmentMatrix fulfillment_matrix(const Registry& reg, Profile profile);

// Recommendation id -> motivating spec ids. Fails with Traceability when a
// NotSatisfied/Partial baseline spec has no recommendation.
Result<std::map<std::string, std::vector<std::string>>> trace_recommendations(
    const Registry& reg);

// ---- report rendering ----

std::string coverage_csv(const CoverageMatrix& m);
Result<CoverageMatrix> parse_coverage_csv(std::string_view csv);
std::string fulfillment_csv(const FulfillmentMatrix& m);
Result<FulfillmentMatrix> parse_fulfillment_csv(std::string_view csv);

// Aligned text tables with the Red/Yellow/Green legend.
std::string coverage_table(const CoverageMatrix& m);
std::string fulfillment_table(const FulfillmentMatrix& m);

}  // namespace bansec::assessment

#endif  // BANSEC_ASSESSMENT_HPP_
