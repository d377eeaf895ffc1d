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

#include "bansec/assessment.hpp"

#include <algorithm>
#include <sstream>

namespace bansec::assessment {

std::string_view status_name(FulfillStatus s) {
  switch (s) {
    case FulfillStatus::NotSatisfied: return "NotSatisfied";
    case FulfillStatus::Partial: return "Partial";
    case FulfillStatus::Satisfied: return "Satisfied";
  }
  return "?";
}

std::string_view status_color(FulfillStatus s) {
  switch (s) {
    case FulfillStatus::NotSatisfied: return "Red";
    case FulfillStatus::Partial: return "Yellow";
    case FulfillStatus::Satisfied: return "Green";
  }
  return "?";
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

Result<FulfillStatus> parse_status(const std::string& s) {
  if (s == "NotSatisfied") return FulfillStatus::NotSatisfied;
  if (s == "Partial") return FulfillStatus::Partial;
  if (s == "Satisfied") return FulfillStatus::Satisfied;
  return Err::Malformed;
}

}  // namespace

Result<Registry> Registry::load(std::string_view text) {
  Registry reg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    auto fields = split(line, '|');
    if (section == "security_attributes" || section == "physical_attributes" ||
        section == "device_classes") {
      if (fields.size() != 2) return Err::Malformed;
      Attribute::Group g = section == "security_attributes" ? Attribute::Group::Security
                           : section == "physical_attributes" ? Attribute::Group::Physical
                                                               : Attribute::Group::DeviceClass;
      reg.attributes_.push_back({fields[0], fields[1], g});
    } else if (section == "use_cases") {
      if (fields.size() != 3) return Err::Malformed;
      reg.use_cases_.push_back({fields[0], fields[1], split(fields[2], ',')});
    } else if (section == "specs") {
      if (fields.size() != 4) return Err::Malformed;
      reg.specs_.push_back({fields[0], fields[1], split(fields[2], ','), fields[3]});
    } else if (section == "verdicts") {
      if (fields.size() != 4) return Err::Malformed;
      auto status = parse_status(fields[1]);
      if (!status) return status.error();
      reg.verdicts_.push_back({fields[0], *status, fields[2], fields[3] == "reconstructed"});
    } else if (section == "recommendations") {
      if (fields.size() != 6) return Err::Malformed;
      reg.recommendations_.push_back({fields[0], fields[1], fields[2], split(fields[3], ','),
                                      fields[4], fields[5] == "reconstructed"});
    } else {
      return Err::Malformed;
    }
  }

  // Cross-reference and cardinality checks: 11 Sx, 12 Px, 4 Dx, 26 specs
  // (one verdict each), 14 recommendations.
  size_t s_count = 0, p_count = 0, d_count = 0;
  std::set<std::string> attr_ids;
  for (const auto& a : reg.attributes_) {
    attr_ids.insert(a.id);
    if (a.group == Attribute::Group::Security) ++s_count;
    if (a.group == Attribute::Group::Physical) ++p_count;
    if (a.group == Attribute::Group::DeviceClass) ++d_count;
  }
  if (s_count != 11 || p_count != 12 || d_count != 4) return Err::Registry;
  if (reg.specs_.size() != 26 || reg.verdicts_.size() != 26) return Err::Registry;
  if (reg.recommendations_.size() != 14) return Err::Registry;

  std::set<std::string> spec_ids;
  for (const auto& spec : reg.specs_) {
    if (spec.attributes.empty()) return Err::Registry;
    if (!spec_ids.insert(spec.id).second) return Err::Registry;
    if (reg.find_use_case(spec.use_case) == nullptr) return Err::Registry;
    for (const auto& attr : spec.attributes) {
      if (!attr_ids.contains(attr)) return Err::Registry;
    }
  }
  for (const auto& uc : reg.use_cases_) {
    for (const auto& d : uc.device_classes) {
      if (!attr_ids.contains(d)) return Err::Registry;
    }
  }
  std::set<std::string> verdict_ids;
  for (const auto& v : reg.verdicts_) {
    if (!spec_ids.contains(v.spec_id) || !verdict_ids.insert(v.spec_id).second) {
      return Err::Registry;
    }
  }
  for (const auto& rec : reg.recommendations_) {
    for (const auto& spec : rec.motivating_specs) {
      if (!spec_ids.contains(spec)) return Err::Registry;
    }
  }
  return reg;
}

const UseCase* Registry::find_use_case(const std::string& id) const {
  for (const auto& uc : use_cases_) {
    if (uc.id == id) return &uc;
  }
  return nullptr;
}

bool CoverageMatrix::covered(size_t row) const {
  for (size_t c = 0; c < use_case_ids.size(); ++c) {
    if (cells[row][c]) return true;
  }
  return false;
}

Result<CoverageMatrix> coverage_matrix(const Registry& reg,
                                       const std::vector<std::string>& use_case_ids) {
  CoverageMatrix m;
  for (const auto& a : reg.attributes()) m.attribute_ids.push_back(a.id);
  m.use_case_ids = use_case_ids;

  std::vector<std::set<std::string>> per_case;
  for (const auto& id : use_case_ids) {
    const UseCase* uc = reg.find_use_case(id);
    if (uc == nullptr) return Err::Registry;
    std::set<std::string> attrs(uc->device_classes.begin(), uc->device_classes.end());
    for (const auto& spec : reg.specs()) {
      if (spec.use_case != id) continue;
      attrs.insert(spec.attributes.begin(), spec.attributes.end());
    }
    per_case.push_back(std::move(attrs));
  }

  m.cells.resize(m.attribute_ids.size(), std::vector<bool>(use_case_ids.size(), false));
  for (size_t r = 0; r < m.attribute_ids.size(); ++r) {
    for (size_t c = 0; c < use_case_ids.size(); ++c) {
      m.cells[r][c] = per_case[c].contains(m.attribute_ids[r]);
    }
  }
  return m;
}

Result<std::vector<std::string>> completeness_gaps(const Registry& reg,
                                                   const std::vector<std::string>& use_case_ids) {
  auto m = coverage_matrix(reg, use_case_ids);
  if (!m) return m.error();
  std::vector<std::string> gaps;
  for (size_t r = 0; r < m->attribute_ids.size(); ++r) {
    if (!m->covered(r)) gaps.push_back(m->attribute_ids[r]);
  }
  return gaps;
}

FulfillmentMatrix fulfillment_matrix(const Registry& reg, Profile profile) {
  FulfillmentMatrix m;
  m.profile = profile;
  m.rows = reg.baseline_verdicts();
  if (profile == Profile::Baseline) return m;

  for (auto& row : m.rows) {
    if (row.status == FulfillStatus::Satisfied) continue;
    size_t motivating = 0;
    size_t implemented = 0;
    for (const auto& rec : reg.recommendations()) {
      if (std::find(rec.motivating_specs.begin(), rec.motivating_specs.end(), row.spec_id) ==
          rec.motivating_specs.end()) {
        continue;
      }
      ++motivating;
      if (!rec.feature.empty()) ++implemented;
    }
    if (motivating > 0 && motivating == implemented) {
      row.status = FulfillStatus::Satisfied;
      row.rationale = "upgraded: motivating recommendations implemented";
    } else if (implemented > 0 && row.status == FulfillStatus::NotSatisfied) {
      row.status = FulfillStatus::Partial;
      row.rationale = "upgraded: some motivating recommendations implemented";
    }
  }
  return m;
}

Result<std::map<std::string, std::vector<std::string>>> trace_recommendations(
    const Registry& reg) {
  std::map<std::string, std::vector<std::string>> trace;
  std::set<std::string> motivated;
  for (const auto& rec : reg.recommendations()) {
    trace[rec.id] = rec.motivating_specs;
    motivated.insert(rec.motivating_specs.begin(), rec.motivating_specs.end());
  }
  for (const auto& v : reg.baseline_verdicts()) {
    if (v.status == FulfillStatus::Satisfied) continue;
    if (!motivated.contains(v.spec_id)) return Err::Traceability;
  }
  return trace;
}

// ---- rendering ----

std::string coverage_csv(const CoverageMatrix& m) {
  std::ostringstream out;
  out << "attribute";
  for (const auto& uc : m.use_case_ids) out << ',' << uc;
  out << ",covered\n";
  for (size_t r = 0; r < m.attribute_ids.size(); ++r) {
    out << m.attribute_ids[r];
    for (size_t c = 0; c < m.use_case_ids.size(); ++c) out << ',' << (m.cells[r][c] ? 1 : 0);
    out << ',' << (m.covered(r) ? 1 : 0) << '\n';
  }
  return out.str();
}

Result<CoverageMatrix> parse_coverage_csv(std::string_view csv) {
  CoverageMatrix m;
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) return Err::Malformed;
  auto headers = split(line, ',');
  if (headers.size() < 2 || headers.front() != "attribute" || headers.back() != "covered") {
    return Err::Malformed;
  }
  m.use_case_ids.assign(headers.begin() + 1, headers.end() - 1);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != headers.size()) return Err::Malformed;
    m.attribute_ids.push_back(fields[0]);
    std::vector<bool> row;
    for (size_t c = 1; c + 1 < fields.size(); ++c) row.push_back(fields[c] == "1");
    m.cells.push_back(std::move(row));
  }
  return m;
}

std::string fulfillment_csv(const FulfillmentMatrix& m) {
  std::ostringstream out;
  out << "spec,status,color,rationale\n";
  for (const auto& row : m.rows) {
    std::string rationale = row.rationale;
    std::replace(rationale.begin(), rationale.end(), ',', ';');
    out << row.spec_id << ',' << status_name(row.status) << ',' << status_color(row.status) << ','
        << rationale << '\n';
  }
  return out.str();
}

Result<FulfillmentMatrix> parse_fulfillment_csv(std::string_view csv) {
  FulfillmentMatrix m;
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "spec,status,color,rationale") return Err::Malformed;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() < 4) return Err::Malformed;
    auto status = parse_status(fields[1]);
    if (!status) return status.error();
    Verdict v;
    v.spec_id = fields[0];
    v.status = *status;
    v.rationale = fields[3];
    for (size_t i = 4; i < fields.size(); ++i) v.rationale += "," + fields[i];
    m.rows.push_back(std::move(v));
  }
  return m;
}

std::string coverage_table(const CoverageMatrix& m) {
  std::ostringstream out;
  out << "attribute   ";
  for (const auto& uc : m.use_case_ids) out << ' ' << uc;
  out << "\n";
  for (size_t r = 0; r < m.attribute_ids.size(); ++r) {
    out << m.attribute_ids[r];
    for (size_t pad = m.attribute_ids[r].size(); pad < 12; ++pad) out << ' ';
    for (size_t c = 0; c < m.use_case_ids.size(); ++c) {
      out << ' ' << (m.cells[r][c] ? " x " : " . ");
    }
    out << (m.covered(r) ? "" : "   <- uncovered") << "\n";
  }
  return out.str();
}

std::string fulfillment_table(const FulfillmentMatrix& m) {
  std::ostringstream out;
  out << "fulfillment (" << profile_name(m.profile)
      << ")  legend: Red=NotSatisfied Yellow=Partial Green=Satisfied\n";
  for (const auto& row : m.rows) {
    out << row.spec_id;
    for (size_t pad = row.spec_id.size(); pad < 6; ++pad) out << ' ';
    std::string status{status_name(row.status)};
    out << status;
    for (size_t pad = status.size(); pad < 14; ++pad) out << ' ';
    out << status_color(row.status);
    for (size_t pad = status_color(row.status).size(); pad < 8; ++pad) out << ' ';
    out << row.rationale << "\n";
  }
  return out.str();
}

}  // namespace bansec::assessment
