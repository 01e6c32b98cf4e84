// Copyright 2026 The Panoptic-Nav Authors.
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
#include <string>
#include <vector>

#include "json.hpp"
#include "pnav/metrics.hpp"
#include "pnav/schema.hpp"

namespace pnav {

// Number rendering. Fractions by default; {100, 1} gives percentages with
// one decimal.
struct ReportFormat {
  double scale = 1.0;
  int precision = 4;

  static ReportFormat fraction() { return {1.0, 4}; }
  static ReportFormat percent() { return {100.0, 1}; }
};

// One row of the summary table. Unset cells print as "-".
struct SummaryRow {
  std::string resolution;
  std::vector<std::optional<double>> class_iou;  // parallel to the highlighted class names
  std::optional<double> ap_d;
  std::optional<double> ap_i;
  std::optional<double> pq_th;
  std::optional<double> miou;
  std::optional<double> pq_st;
  std::optional<double> pq;
};

// Column order: Resolution, highlighted per-class IoUs, AP^d, AP^i, PQ^th,
// mIoU, PQ^st, PQ.
std::vector<std::string> summary_header(const std::vector<std::string>& class_names);
std::string format_summary(const std::vector<std::string>& class_names, const std::vector<SummaryRow>& rows,
                          const ReportFormat& format);

// pole, traffic-light, person, rider, bike and car when the schema has all
// of them; otherwise every thing class.
std::vector<ClassId> default_highlight_classes(const LabelSchema& schema);

struct EvalReport {
  std::string resolution;
  PqReport pq;
  SemReport sem;
  std::optional<ApReport> ap_box;
  std::optional<ApReport> ap_mask;
  std::vector<ClassId> highlight;

  SummaryRow summary_row() const;
  std::string to_text(const LabelSchema& schema, const ReportFormat& format) const;
  nlohmann::ordered_json to_json(const LabelSchema& schema) const;
};

// Per-class PQ/SQ/RQ with TP/FP/FN counts.
std::string format_pq_detail(const PqReport& report, const LabelSchema& schema, const ReportFormat& format);

}  // namespace pnav
