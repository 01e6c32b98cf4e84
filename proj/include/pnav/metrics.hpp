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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pnav/panoptic.hpp"
#include "pnav/schema.hpp"

namespace pnav {

// A segment is a maximal set of pixels sharing one packed (class, instance)
// label within one image.
struct SegmentId {
  std::uint32_t image = 0;
  std::uint32_t label = 0;
  friend auto operator<=>(const SegmentId&, const SegmentId&) = default;
};

struct TruePositive {
  SegmentId pred;
  SegmentId gt;
  double iou = 0.0;
};

struct ClassMatch {
  bool is_thing = false;
  std::vector<TruePositive> tp;
  std::vector<SegmentId> fp;
  std::vector<SegmentId> fn;
};

struct MatchResult {
  std::map<ClassId, ClassMatch> per_class;
  // Appends another image's matches (segment ids carry their image index).
  void merge(const MatchResult& other);
};

// Matches segments of the same class with IoU > 0.5. Ground-truth void
// pixels are left out of the union; an unmatched prediction lying mostly
// (> 0.5) on ground-truth void is not counted as a false positive.
MatchResult match_segments(const PanopticMap& pred, const PanopticMap& gt, const LabelSchema& schema,
                           std::uint32_t image = 0);

struct ClassPq {
  ClassId class_id = 0;
  bool is_thing = false;
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct PqReport {
  std::vector<ClassPq> per_class;  // ascending class id, included classes only
  double pq = 0.0;
  double pq_th = 0.0;
  double pq_st = 0.0;
  std::size_t n_classes = 0;
  std::size_t n_things = 0;
  std::size_t n_stuff = 0;
};

// Classes with TP + FP + FN = 0 are excluded from every mean.
PqReport pq_scores(const MatchResult& match);

struct SemReport {
  std::vector<ClassId> class_ids;        // schema order, includes void
  std::vector<std::uint64_t> confusion;  // row = gt, column = pred
  std::map<ClassId, double> class_iou;   // defined (non-void) classes only
  double miou = 0.0;

  std::uint64_t cell(std::size_t gt_row, std::size_t pred_col) const {
    return confusion[gt_row * class_ids.size() + pred_col];
  }
};

// Accumulates a confusion matrix over one or more map pairs. Pixels whose
// ground truth is void are ignored.
class SemAccumulator {
 public:
  explicit SemAccumulator(const LabelSchema& schema);
  void add(std::span<const ClassId> pred, std::span<const ClassId> gt);
  SemReport report() const;

 private:
  const LabelSchema* schema_;
  std::vector<int> lut_;
  std::vector<std::uint64_t> confusion_;
};

SemReport miou(const SemanticMap& pred, const SemanticMap& gt, const LabelSchema& schema);

enum class IouKind { kBox, kMask };

struct GtInstance {
  ClassId class_id = 0;
  BitMask mask;
};

struct ClassAp {
  ClassId class_id = 0;
  std::vector<double> ap_at;  // one per threshold
  double mean = 0.0;
};

struct ApReport {
  IouKind kind = IouKind::kMask;
  std::vector<double> thresholds;
  std::vector<ClassAp> per_class;  // classes with at least one gt instance
  double ap = 0.0;                 // mean over classes of per-class mean
};

// {0.50, 0.55, ..., 0.95}
std::vector<double> default_ap_thresholds();

// 101-point interpolated AP. Predictions are ranked by confidence (ties:
// image index, then RLE bytes) and greedily matched to the unmatched gt of
// the same class and image with the highest IoU >= threshold.
ApReport average_precision(std::span<const std::vector<InstancePrediction>> preds,
                           std::span<const std::vector<GtInstance>> gts, const LabelSchema& schema, IouKind kind,
                           std::span<const double> thresholds);

std::vector<GtInstance> gt_instances_from_panoptic(const PanopticMap& map, const LabelSchema& schema);

}  // namespace pnav
