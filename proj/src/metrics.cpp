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

#include "pnav/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>
#include <unordered_map>

#include "pnav/error.hpp"
#include "pnav/kernels.hpp"

namespace pnav {

void MatchResult::merge(const MatchResult& other) {
  for (const auto& [cls, m] : other.per_class) {
    ClassMatch& dst = per_class[cls];
    dst.is_thing = m.is_thing;
    dst.tp.insert(dst.tp.end(), m.tp.begin(), m.tp.end());
    dst.fp.insert(dst.fp.end(), m.fp.begin(), m.fp.end());
    dst.fn.insert(dst.fn.end(), m.fn.begin(), m.fn.end());
  }
}

MatchResult match_segments(const PanopticMap& pred, const PanopticMap& gt, const LabelSchema& schema,
                           std::uint32_t image) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw DimensionError(fmt::format("match_segments: prediction {}x{} vs ground truth {}x{}", pred.width(),
                                     pred.height(), gt.width(), gt.height()));
  }
  const ClassId void_id = schema.void_id();
  std::unordered_map<std::uint32_t, std::uint64_t> pred_area;
  std::unordered_map<std::uint32_t, std::uint64_t> gt_area;
  std::unordered_map<std::uint32_t, std::uint64_t> pred_on_void;
  for (const auto& [label, n] : kernels::parallel::label_histogram(pred.packed())) pred_area[label] = n;
  for (const auto& [label, n] : kernels::parallel::label_histogram(gt.packed())) gt_area[label] = n;
  const auto pairs = kernels::parallel::pair_histogram(pred.packed(), gt.packed());
  for (const auto& [key, n] : pairs) {
    const auto g = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
    if (label_class(g) == void_id) pred_on_void[static_cast<std::uint32_t>(key >> 32)] += n;
  }

  MatchResult result;
  auto entry = [&](ClassId cls) -> ClassMatch& {
    ClassMatch& m = result.per_class[cls];
    m.is_thing = schema.is_thing(cls);
    return m;
  };
  std::set<std::uint32_t> matched_pred;
  std::set<std::uint32_t> matched_gt;
  for (const auto& [key, inter] : pairs) {
    const auto p = static_cast<std::uint32_t>(key >> 32);
    const auto g = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
    const ClassId cls = label_class(g);
    if (cls == void_id || label_class(p) != cls) continue;
    const std::uint64_t uni = pred_area[p] + gt_area[g] - inter - pred_on_void[p];
    const double iou = static_cast<double>(inter) / static_cast<double>(uni);
    if (iou > 0.5) {
      entry(cls).tp.push_back({{image, p}, {image, g}, iou});
      matched_pred.insert(p);
      matched_gt.insert(g);
    }
  }
  std::vector<std::uint32_t> gt_labels;
  for (const auto& [label, n] : gt_area) gt_labels.push_back(label);
  std::sort(gt_labels.begin(), gt_labels.end());
  for (std::uint32_t g : gt_labels) {
    if (label_class(g) == void_id) continue;
    ClassMatch& m = entry(label_class(g));
    if (!matched_gt.contains(g)) m.fn.push_back({image, g});
  }
  std::vector<std::uint32_t> pred_labels;
  for (const auto& [label, n] : pred_area) pred_labels.push_back(label);
  std::sort(pred_labels.begin(), pred_labels.end());
  for (std::uint32_t p : pred_labels) {
    if (label_class(p) == void_id) continue;
    ClassMatch& m = entry(label_class(p));
    if (matched_pred.contains(p)) continue;
    const std::uint64_t on_void = pred_on_void.contains(p) ? pred_on_void[p] : 0;
    if (2 * on_void > pred_area[p]) continue;
    m.fp.push_back({image, p});
  }
  return result;
}

PqReport pq_scores(const MatchResult& match) {
  PqReport r;
  double sum_all = 0.0;
  double sum_th = 0.0;
  double sum_st = 0.0;
  for (const auto& [cls, m] : match.per_class) {
    const std::size_t tp = m.tp.size();
    const std::size_t fp = m.fp.size();
    const std::size_t fn = m.fn.size();
    if (tp + fp + fn == 0) continue;
    ClassPq c;
    c.class_id = cls;
    c.is_thing = m.is_thing;
    c.tp = tp;
    c.fp = fp;
    c.fn = fn;
    double iou_sum = 0.0;
    for (const TruePositive& t : m.tp) iou_sum += t.iou;
    c.sq = tp == 0 ? 0.0 : iou_sum / static_cast<double>(tp);
    c.rq = static_cast<double>(tp) / (static_cast<double>(tp) + 0.5 * static_cast<double>(fp) +
                                      0.5 * static_cast<double>(fn));
    c.pq = c.sq * c.rq;
    sum_all += c.pq;
    ++r.n_classes;
    if (c.is_thing) {
      sum_th += c.pq;
      ++r.n_things;
    } else {
      sum_st += c.pq;
      ++r.n_stuff;
    }
    r.per_class.push_back(c);
  }
  r.pq = r.n_classes == 0 ? 0.0 : sum_all / static_cast<double>(r.n_classes);
  r.pq_th = r.n_things == 0 ? 0.0 : sum_th / static_cast<double>(r.n_things);
  r.pq_st = r.n_stuff == 0 ? 0.0 : sum_st / static_cast<double>(r.n_stuff);
  return r;
}

SemAccumulator::SemAccumulator(const LabelSchema& schema) : schema_(&schema), lut_(0x10000, -1) {
  for (std::size_t i = 0; i < schema.classes().size(); ++i) lut_[schema.classes()[i].id] = static_cast<int>(i);
  const std::size_t n = schema.classes().size();
  confusion_.assign(n * n, 0);
}

void SemAccumulator::add(std::span<const ClassId> pred, std::span<const ClassId> gt) {
  if (pred.size() != gt.size()) {
    throw DimensionError(fmt::format("semantic maps differ in size: {} vs {}", pred.size(), gt.size()));
  }
  const int n = static_cast<int>(schema_->classes().size());
  const auto tally = kernels::parallel::confusion_tally(pred, gt, lut_, n, schema_->position(schema_->void_id()));
  for (std::size_t i = 0; i < tally.size(); ++i) confusion_[i] += tally[i];
}

SemReport SemAccumulator::report() const {
  SemReport r;
  const auto& classes = schema_->classes();
  const std::size_t n = classes.size();
  for (const ClassDef& c : classes) r.class_ids.push_back(c.id);
  r.confusion = confusion_;
  std::vector<std::uint64_t> row_sum(n, 0);
  std::vector<std::uint64_t> col_sum(n, 0);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t p = 0; p < n; ++p) {
      row_sum[g] += confusion_[g * n + p];
      col_sum[p] += confusion_[g * n + p];
    }
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (classes[k].id == schema_->void_id()) continue;
    const std::uint64_t tp = confusion_[k * n + k];
    const std::uint64_t denom = row_sum[k] + col_sum[k] - tp;
    if (denom == 0) continue;
    const double iou = static_cast<double>(tp) / static_cast<double>(denom);
    r.class_iou[classes[k].id] = iou;
    sum += iou;
  }
  r.miou = r.class_iou.empty() ? 0.0 : sum / static_cast<double>(r.class_iou.size());
  return r;
}

SemReport miou(const SemanticMap& pred, const SemanticMap& gt, const LabelSchema& schema) {
  if (pred.width != gt.width || pred.height != gt.height) {
    throw DimensionError(
        fmt::format("miou: prediction {}x{} vs ground truth {}x{}", pred.width, pred.height, gt.width, gt.height));
  }
  SemAccumulator acc(schema);
  acc.add(pred.ids, gt.ids);
  return acc.report();
}

std::vector<double> default_ap_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back((50 + 5 * i) / 100.0);
  return t;
}

namespace {

struct PredRef {
  std::uint32_t image;
  std::size_t index;
  const InstancePrediction* pred;
  std::vector<std::uint8_t> key;
};

double pair_iou(const InstancePrediction& p, const GtInstance& g, IouKind kind) {
  if (kind == IouKind::kMask) return mask_iou(p.mask, g.mask);
  const std::optional<Box> pb = p.box ? p.box : bbox_of_mask(p.mask);
  const std::optional<Box> gb = bbox_of_mask(g.mask);
  if (!pb || !gb) return 0.0;
  return box_iou(*pb, *gb);
}

double interpolated_ap(const std::vector<bool>& is_tp, std::size_t n_gt) {
  const std::size_t n = is_tp.size();
  std::vector<double> precision(n);
  std::vector<std::size_t> tp_cum(n);
  std::size_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    tp += is_tp[k] ? 1 : 0;
    tp_cum[k] = tp;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
  }
  for (std::size_t k = n; k-- > 1;) precision[k - 1] = std::max(precision[k - 1], precision[k]);
  double sum = 0.0;
  std::size_t k = 0;
  for (std::size_t level = 0; level <= 100; ++level) {
    // first k with recall >= level / 100, i.e. 100 * tp >= level * n_gt
    while (k < n && 100 * tp_cum[k] < level * n_gt) ++k;
    if (k == n) break;
    sum += precision[k];
  }
  return sum / 101.0;
}

}  // namespace

ApReport average_precision(std::span<const std::vector<InstancePrediction>> preds,
                           std::span<const std::vector<GtInstance>> gts, const LabelSchema& schema, IouKind kind,
                           std::span<const double> thresholds) {
  if (thresholds.empty()) throw InvalidArgument("average_precision: empty threshold list");
  for (double t : thresholds) {
    if (!(t > 0.0 && t < 1.0)) throw InvalidArgument(fmt::format("IoU threshold {} outside (0, 1)", t));
  }
  if (preds.size() != gts.size()) {
    throw InvalidArgument(fmt::format("{} prediction images vs {} ground-truth images", preds.size(), gts.size()));
  }
  ApReport report;
  report.kind = kind;
  report.thresholds.assign(thresholds.begin(), thresholds.end());

  std::set<ClassId> classes;
  for (const auto& img : gts) {
    for (const GtInstance& g : img) classes.insert(g.class_id);
  }
  double class_sum = 0.0;
  for (ClassId cls : classes) {
    if (!schema.contains(cls)) throw InvalidArgument(fmt::format("ground-truth instance of unknown class {}", cls));
    std::vector<PredRef> ranked;
    // gt indices per image for this class
    std::vector<std::vector<std::size_t>> gt_idx(gts.size());
    std::size_t n_gt = 0;
    for (std::uint32_t im = 0; im < gts.size(); ++im) {
      for (std::size_t j = 0; j < gts[im].size(); ++j) {
        if (gts[im][j].class_id == cls) {
          gt_idx[im].push_back(j);
          ++n_gt;
        }
      }
      for (std::size_t j = 0; j < preds[im].size(); ++j) {
        if (preds[im][j].class_id == cls) ranked.push_back({im, j, &preds[im][j], mask_key(preds[im][j].mask)});
      }
    }
    std::sort(ranked.begin(), ranked.end(), [](const PredRef& a, const PredRef& b) {
      if (a.pred->confidence != b.pred->confidence) return a.pred->confidence > b.pred->confidence;
      if (a.image != b.image) return a.image < b.image;
      if (a.key != b.key) return a.key < b.key;
      return a.index < b.index;
    });
    // IoU of each ranked prediction against the gts of its image.
    std::vector<std::vector<double>> ious(ranked.size());
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      for (std::size_t j : gt_idx[ranked[k].image]) {
        ious[k].push_back(pair_iou(*ranked[k].pred, gts[ranked[k].image][j], kind));
      }
    }
    ClassAp cap;
    cap.class_id = cls;
    for (double t : thresholds) {
      std::vector<std::vector<bool>> taken(gts.size());
      for (std::size_t im = 0; im < gts.size(); ++im) taken[im].assign(gt_idx[im].size(), false);
      std::vector<bool> is_tp(ranked.size(), false);
      for (std::size_t k = 0; k < ranked.size(); ++k) {
        auto& used = taken[ranked[k].image];
        int best = -1;
        double best_iou = -1.0;
        for (std::size_t j = 0; j < used.size(); ++j) {
          if (used[j] || ious[k][j] < t) continue;
          if (ious[k][j] > best_iou) {
            best_iou = ious[k][j];
            best = static_cast<int>(j);
          }
        }
        if (best >= 0) {
          used[best] = true;
          is_tp[k] = true;
        }
      }
      cap.ap_at.push_back(interpolated_ap(is_tp, n_gt));
    }
    double s = 0.0;
    for (double v : cap.ap_at) s += v;
    cap.mean = s / static_cast<double>(cap.ap_at.size());
    class_sum += cap.mean;
    report.per_class.push_back(std::move(cap));
  }
  report.ap = report.per_class.empty() ? 0.0 : class_sum / static_cast<double>(report.per_class.size());
  return report;
}

std::vector<GtInstance> gt_instances_from_panoptic(const PanopticMap& map, const LabelSchema& schema) {
  std::map<std::uint32_t, std::size_t> slot;
  std::vector<GtInstance> out;
  const auto px = map.packed();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const ClassId cls = label_class(px[i]);
    if (label_instance(px[i]) == 0 || !schema.is_thing(cls)) continue;
    auto [it, inserted] = slot.emplace(px[i], out.size());
    if (inserted) out.push_back({cls, BitMask(map.width(), map.height())});
    out[it->second].mask.mutable_bits()[i] = 1;
  }
  // order by packed label for determinism
  std::vector<GtInstance> sorted;
  sorted.reserve(out.size());
  for (const auto& [label, idx] : slot) sorted.push_back(std::move(out[idx]));
  return sorted;
}

}  // namespace pnav
