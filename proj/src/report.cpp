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

#include "pnav/report.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace pnav {
namespace {

std::string cell(const std::optional<double>& v, const ReportFormat& f) {
  if (!v) return "-";
  return fmt::format("{:.{}f}", *v * f.scale, f.precision);
}

std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0) {
        line += fmt::format("{:<{}}", row[i], widths[i]);
      } else {
        line += fmt::format("  {:>{}}", row[i], widths[i]);
      }
    }
    out += line + "\n";
  }
  return out;
}

std::optional<double> ap_value(const std::optional<ApReport>& r) {
  if (!r || r->per_class.empty()) return std::nullopt;
  return r->ap;
}

nlohmann::ordered_json ap_json(const ApReport& r, const LabelSchema& schema) {
  nlohmann::ordered_json j;
  j["kind"] = r.kind == IouKind::kBox ? "box" : "mask";
  j["thresholds"] = r.thresholds;
  j["ap"] = r.ap;
  auto& pc = j["per_class"] = nlohmann::ordered_json::array();
  for (const ClassAp& c : r.per_class) {
    pc.push_back({{"class_id", c.class_id}, {"name", schema.at(c.class_id).name}, {"ap", c.mean}, {"ap_at", c.ap_at}});
  }
  return j;
}

}  // namespace

std::vector<std::string> summary_header(const std::vector<std::string>& class_names) {
  std::vector<std::string> h{"Resolution"};
  h.insert(h.end(), class_names.begin(), class_names.end());
  for (const char* s : {"AP^d", "AP^i", "PQ^th", "mIoU", "PQ^st", "PQ"}) h.emplace_back(s);
  return h;
}

std::string format_summary(const std::vector<std::string>& class_names, const std::vector<SummaryRow>& rows,
                          const ReportFormat& format) {
  std::vector<std::vector<std::string>> grid{summary_header(class_names)};
  for (const SummaryRow& r : rows) {
    std::vector<std::string> line{r.resolution};
    for (std::size_t i = 0; i < class_names.size(); ++i) {
      line.push_back(i < r.class_iou.size() ? cell(r.class_iou[i], format) : "-");
    }
    for (const auto* v : {&r.ap_d, &r.ap_i, &r.pq_th, &r.miou, &r.pq_st, &r.pq}) line.push_back(cell(*v, format));
    grid.push_back(std::move(line));
  }
  return render_rows(grid);
}

std::vector<ClassId> default_highlight_classes(const LabelSchema& schema) {
  std::vector<ClassId> ids;
  for (const char* name : {"pole", "traffic-light", "person", "rider", "bike", "car"}) {
    const ClassDef* c = schema.find_by_name(name);
    if (c == nullptr) {
      ids.clear();
      break;
    }
    ids.push_back(c->id);
  }
  if (ids.empty()) ids = schema.thing_ids();
  return ids;
}

SummaryRow EvalReport::summary_row() const {
  SummaryRow row;
  row.resolution = resolution;
  for (ClassId id : highlight) {
    auto it = sem.class_iou.find(id);
    row.class_iou.push_back(it == sem.class_iou.end() ? std::nullopt : std::optional<double>(it->second));
  }
  row.ap_d = ap_value(ap_box);
  row.ap_i = ap_value(ap_mask);
  if (pq.n_things > 0) row.pq_th = pq.pq_th;
  if (!sem.class_iou.empty()) row.miou = sem.miou;
  if (pq.n_stuff > 0) row.pq_st = pq.pq_st;
  if (pq.n_classes > 0) row.pq = pq.pq;
  return row;
}

std::string EvalReport::to_text(const LabelSchema& schema, const ReportFormat& format) const {
  std::vector<std::string> names;
  for (ClassId id : highlight) names.push_back(schema.at(id).name);
  std::string out = format_summary(names, {summary_row()}, format);
  out += "\n";
  out += format_pq_detail(pq, schema, format);
  return out;
}

nlohmann::ordered_json EvalReport::to_json(const LabelSchema& schema) const {
  nlohmann::ordered_json j;
  j["resolution"] = resolution;
  j["pq"] = pq.pq;
  j["pq_th"] = pq.pq_th;
  j["pq_st"] = pq.pq_st;
  j["miou"] = sem.miou;
  j["ap_d"] = ap_box ? nlohmann::ordered_json(ap_box->ap) : nlohmann::ordered_json();
  j["ap_i"] = ap_mask ? nlohmann::ordered_json(ap_mask->ap) : nlohmann::ordered_json();
  auto& pc = j["pq_per_class"] = nlohmann::ordered_json::array();
  for (const ClassPq& c : pq.per_class) {
    pc.push_back({{"class_id", c.class_id},
                  {"name", schema.at(c.class_id).name},
                  {"is_thing", c.is_thing},
                  {"pq", c.pq},
                  {"sq", c.sq},
                  {"rq", c.rq},
                  {"tp", c.tp},
                  {"fp", c.fp},
                  {"fn", c.fn}});
  }
  auto& iou = j["class_iou"] = nlohmann::ordered_json::array();
  for (const auto& [id, v] : sem.class_iou) iou.push_back({{"class_id", id}, {"name", schema.at(id).name}, {"iou", v}});
  j["ap_box"] = ap_box ? ap_json(*ap_box, schema) : nlohmann::ordered_json();
  j["ap_mask"] = ap_mask ? ap_json(*ap_mask, schema) : nlohmann::ordered_json();
  return j;
}

std::string format_pq_detail(const PqReport& report, const LabelSchema& schema, const ReportFormat& format) {
  std::vector<std::vector<std::string>> grid{{"class", "kind", "PQ", "SQ", "RQ", "TP", "FP", "FN"}};
  for (const ClassPq& c : report.per_class) {
    grid.push_back({schema.at(c.class_id).name, c.is_thing ? "thing" : "stuff", cell(c.pq, format),
                    cell(c.sq, format), cell(c.rq, format), std::to_string(c.tp), std::to_string(c.fp),
                    std::to_string(c.fn)});
  }
  return render_rows(grid);
}

}  // namespace pnav
