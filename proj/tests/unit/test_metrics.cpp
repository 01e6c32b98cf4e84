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

#include <cmath>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "pnav/error.hpp"
#include "pnav/metrics.hpp"
#include "support/testkit.hpp"

using namespace pnav;

namespace {

const LabelSchema& S() { return testkit::small_schema(); }

PanopticMap row(std::vector<std::uint32_t> labels) {
  const int w = static_cast<int>(labels.size());
  return PanopticMap(w, 1, std::move(labels));
}

constexpr std::uint32_t kVoid = pack_label(0, 0);
constexpr std::uint32_t kRoad = pack_label(1, 0);
constexpr std::uint32_t kCar1 = pack_label(3, 1);
constexpr std::uint32_t kCar2 = pack_label(3, 2);

void check_against_oracle(const PanopticMap& pred, const PanopticMap& gt) {
  const MatchResult got = match_segments(pred, gt, S());
  const oracle::Matching want = oracle::match(pred, gt, S());
  CHECK(want.unique);
  std::map<ClassId, const ClassMatch*> nonempty;
  for (const auto& [cls, m] : got.per_class) {
    if (!m.tp.empty() || !m.fp.empty() || !m.fn.empty()) nonempty[cls] = &m;
  }
  std::size_t want_classes = 0;
  for (const auto& [cls, r] : want.per_class) want_classes += (!r.tp.empty() || !r.fp.empty() || !r.fn.empty());
  REQUIRE(nonempty.size() == want_classes);
  for (const auto& [cls, m] : nonempty) {
    const auto& r = want.per_class.at(cls);
    std::set<std::uint32_t> fp, fn;
    for (const auto& s : m->fp) fp.insert(s.label);
    for (const auto& s : m->fn) fn.insert(s.label);
    CHECK(fp == r.fp);
    CHECK(fn == r.fn);
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> tp_got, tp_want;
    for (const auto& t : m->tp) tp_got[{t.pred.label, t.gt.label}] = t.iou;
    for (const auto& t : r.tp) tp_want[{t.pred, t.gt}] = t.iou;
    REQUIRE(tp_got.size() == tp_want.size());
    for (const auto& [k, v] : tp_want) {
      REQUIRE(tp_got.contains(k));
      CHECK(std::fabs(tp_got[k] - v) <= 1e-9);
    }
  }
  const PqReport rep = pq_scores(got);
  const oracle::Scores os = oracle::pq(want, S());
  CHECK(std::fabs(rep.pq - os.pq) <= 1e-9);
  CHECK(std::fabs(rep.pq_th - os.pq_th) <= 1e-9);
  CHECK(std::fabs(rep.pq_st - os.pq_st) <= 1e-9);
  for (const ClassPq& c : rep.per_class) {
    const auto [q, sq, rq] = os.pq_sq_rq.at(c.class_id);
    CHECK(std::fabs(c.pq - q) <= 1e-9);
    CHECK(std::fabs(c.sq - sq) <= 1e-9);
    CHECK(std::fabs(c.rq - rq) <= 1e-9);
    CHECK(std::fabs(c.pq - c.sq * c.rq) <= 1e-12);
    CHECK(c.pq >= 0.0);
    CHECK(c.pq <= 1.0);
  }
}

}  // namespace

TEST_CASE("pred equal to gt: every segment is a TP with IoU 1") {
  const PanopticMap m = row({kRoad, kRoad, kCar1, kCar1, kCar2, kVoid});
  const MatchResult r = match_segments(m, m, S());
  for (const auto& [cls, cm] : r.per_class) {
    CHECK(cm.fp.empty());
    CHECK(cm.fn.empty());
    for (const auto& t : cm.tp) CHECK(t.iou == 1.0);
  }
  CHECK(r.per_class.at(3).tp.size() == 2);
  const PqReport p = pq_scores(r);
  CHECK(p.pq == 1.0);
  CHECK(p.pq_th == 1.0);
  CHECK(p.pq_st == 1.0);
  CHECK(p.n_things == 1);
  CHECK(p.n_stuff == 1);
}

TEST_CASE("all-void prediction against one car") {
  const MatchResult r = match_segments(row({kVoid, kVoid, kVoid}), row({kVoid, kCar1, kCar1}), S());
  const ClassMatch& car = r.per_class.at(3);
  CHECK(car.tp.empty());
  CHECK(car.fp.empty());
  CHECK(car.fn.size() == 1);
}

TEST_CASE("one TP at IoU 0.8 plus one FP gives PQ 0.5333") {
  MatchResult m;
  ClassMatch& c = m.per_class[3];
  c.is_thing = true;
  c.tp.push_back({{0, kCar1}, {0, kCar1}, 0.8});
  c.fp.push_back({0, kCar2});
  const PqReport r = pq_scores(m);
  REQUIRE(r.per_class.size() == 1);
  CHECK(r.per_class[0].sq == doctest::Approx(0.8));
  CHECK(r.per_class[0].rq == doctest::Approx(1.0 / 1.5));
  CHECK(r.per_class[0].pq == doctest::Approx(0.5333).epsilon(1e-4));
}

TEST_CASE("the same case built from pixels") {
  // gt: car#1 on 0..4, road on 5..9; pred: car#1 on 0..3, car#2 on 4..6, road on 7..9
  const PanopticMap gt = row({kCar1, kCar1, kCar1, kCar1, kCar1, kRoad, kRoad, kRoad, kRoad, kRoad});
  const PanopticMap pred = row({kCar1, kCar1, kCar1, kCar1, kCar2, kCar2, kCar2, kRoad, kRoad, kRoad});
  const PqReport r = pq_scores(match_segments(pred, gt, S()));
  REQUIRE(r.per_class.size() == 2);
  CHECK(r.per_class[0].class_id == 1);
  CHECK(r.per_class[0].pq == doctest::Approx(0.6));
  CHECK(r.per_class[1].class_id == 3);
  CHECK(r.per_class[1].pq == doctest::Approx(0.8 / 1.5));
}

TEST_CASE("gt-void handling") {
  // pred car covers 2 gt-car and 2 gt-void pixels: IoU ignores the void part
  const PanopticMap gt = row({kCar1, kCar1, kVoid, kVoid, kRoad});
  const PanopticMap pred = row({kCar1, kCar1, kCar1, kCar1, kRoad});
  const MatchResult r = match_segments(pred, gt, S());
  REQUIRE(r.per_class.at(3).tp.size() == 1);
  CHECK(r.per_class.at(3).tp[0].iou == 1.0);
  // unmatched prediction mostly on void is not a false positive
  const PanopticMap pred2 = row({kRoad, kCar2, kCar2, kCar2, kRoad});
  const MatchResult r2 = match_segments(pred2, row({kRoad, kRoad, kVoid, kVoid, kRoad}), S());
  CHECK(r2.per_class.at(3).fp.empty());
  // exactly half on void still counts
  const PanopticMap pred3 = row({kRoad, kRoad, kCar2, kCar2, kRoad});
  const MatchResult r3 = match_segments(pred3, row({kRoad, kRoad, kRoad, kVoid, kRoad}), S());
  CHECK(r3.per_class.at(3).fp.size() == 1);
}

TEST_CASE("IoU exactly 0.5 is not a match") {
  const MatchResult r = match_segments(row({kCar1, kCar1, kRoad, kRoad}), row({kCar1, kRoad, kRoad, kRoad}), S());
  CHECK(r.per_class.at(3).tp.empty());
  CHECK(r.per_class.at(3).fp.size() == 1);
  CHECK(r.per_class.at(3).fn.size() == 1);
}

TEST_CASE("dimension mismatch") {
  CHECK_THROWS_AS(match_segments(row({kRoad}), row({kRoad, kRoad}), S()), DimensionError);
  CHECK_THROWS_AS(miou(SemanticMap(2, 2), SemanticMap(2, 3), S()), DimensionError);
}

TEST_CASE("matching equals the exhaustive oracle on random maps") {
  testkit::Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    CAPTURE(i);
    const int w = rng.range(1, 16), h = rng.range(1, 16);
    const PanopticMap gt = testkit::random_panoptic(rng, w, h, 6);
    const PanopticMap pred = testkit::perturb(gt, rng, rng.range(0, 4), 6);
    check_against_oracle(pred, gt);
  }
}

TEST_CASE("classes absent from both maps do not affect scores") {
  MatchResult m = match_segments(row({kRoad, kCar1}), row({kRoad, kCar2}), S());
  const PqReport before = pq_scores(m);
  m.per_class[5].is_thing = true;  // empty entry
  const PqReport after = pq_scores(m);
  CHECK(after.pq == before.pq);
  CHECK(after.n_classes == before.n_classes);
}

TEST_CASE("mIoU examples") {
  SemanticMap gt(4, 1);
  gt.ids = {1, 1, 2, 2};
  SemanticMap all_a(4, 1, 1);
  const SemReport r = miou(all_a, gt, S());
  CHECK(r.class_iou.at(1) == 0.5);
  CHECK(r.class_iou.at(2) == 0.0);
  CHECK(r.miou == 0.25);
  CHECK(miou(gt, gt, S()).miou == 1.0);
  // confusion row = gt, column = pred
  CHECK(r.cell(static_cast<std::size_t>(S().position(2)), static_cast<std::size_t>(S().position(1))) == 2);
}

TEST_CASE("mIoU ignores gt-void pixels and equals the naive tally") {
  testkit::Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const int w = rng.range(1, 16), h = rng.range(1, 16);
    std::vector<std::vector<ClassId>> preds, gts;
    SemAccumulator acc(S());
    const int images = rng.range(1, 3);
    for (int k = 0; k < images; ++k) {
      const auto g = testkit::random_panoptic(rng, w, h, 6).class_plane();
      const auto p = testkit::perturb(PanopticMap(w, h, std::vector<std::uint32_t>(g.begin(), g.end())), rng, 3, 6)
                         .packed();
      std::vector<ClassId> pc(p.begin(), p.end());
      for (auto& c : pc) c = static_cast<ClassId>(c % 6);
      acc.add(pc, g);
      preds.push_back(pc);
      gts.push_back(g);
    }
    const SemReport got = acc.report();
    const auto want = oracle::miou(preds, gts, S());
    CHECK(got.class_iou == want.iou);
    CHECK(got.miou == want.miou);
  }
}

TEST_CASE("per-class IoU is symmetric when neither map has void") {
  testkit::Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    SemanticMap a(8, 8), b(8, 8);
    for (auto& v : a.ids) v = static_cast<ClassId>(rng.range(1, 5));
    for (auto& v : b.ids) v = static_cast<ClassId>(rng.range(1, 5));
    CHECK(miou(a, b, S()).class_iou == miou(b, a, S()).class_iou);
  }
}

// ---- average precision ----

namespace {

InstancePrediction ip(ClassId cls, double conf, BitMask m) { return {cls, conf, std::move(m), std::nullopt}; }

void check_ap(const std::vector<std::vector<InstancePrediction>>& preds, const std::vector<std::vector<GtInstance>>& gts) {
  const auto th = default_ap_thresholds();
  for (IouKind kind : {IouKind::kBox, IouKind::kMask}) {
    const ApReport got = average_precision(preds, gts, S(), kind, th);
    const auto want = oracle::average_precision(preds, gts, kind, th);
    CHECK(std::fabs(got.ap - want.ap) <= 1e-9);
    REQUIRE(got.per_class.size() == want.ap_at.size());
    for (const ClassAp& c : got.per_class) {
      const auto& w = want.ap_at.at(c.class_id);
      REQUIRE(c.ap_at.size() == w.size());
      for (std::size_t t = 0; t < w.size(); ++t) CHECK(std::fabs(c.ap_at[t] - w[t]) <= 1e-9);
    }
  }
}

}  // namespace

TEST_CASE("AP trivial cases") {
  const BitMask m = fill_box({1, 1, 4, 3}, 8, 8);
  const std::vector<std::vector<GtInstance>> gts{{{3, m}}};
  const auto th = default_ap_thresholds();
  for (IouKind kind : {IouKind::kBox, IouKind::kMask}) {
    const std::vector<std::vector<InstancePrediction>> exact{{ip(3, 0.7, m)}};
    const ApReport r = average_precision(exact, gts, S(), kind, th);
    REQUIRE(r.per_class.size() == 1);
    for (double v : r.per_class[0].ap_at) CHECK(v == doctest::Approx(1.0));
    CHECK(r.ap == doctest::Approx(1.0));
    const std::vector<std::vector<InstancePrediction>> none{{}};
    CHECK(average_precision(none, gts, S(), kind, th).ap == 0.0);
  }
  CHECK(th.size() == 10);
  CHECK(th.front() == 0.5);
  CHECK(th.back() == doctest::Approx(0.95));
  const std::vector<double> empty;
  CHECK_THROWS_AS(average_precision({}, {}, S(), IouKind::kMask, empty), InvalidArgument);
}

TEST_CASE("AP equals PR-curve enumeration on small random cases") {
  testkit::Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    CAPTURE(i);
    const int w = rng.range(2, 10), h = rng.range(2, 10);
    const int images = rng.range(1, 3);
    std::vector<std::vector<InstancePrediction>> preds(images);
    std::vector<std::vector<GtInstance>> gts(images);
    for (ClassId cls : {ClassId{3}, ClassId{4}}) {
      const int n_gt = rng.range(0, 3), n_pred = rng.range(0, 5);
      for (int k = 0; k < n_gt; ++k) {
        gts[rng.range(0, images - 1)].push_back({cls, testkit::random_blob(rng, w, h)});
      }
      for (int k = 0; k < n_pred; ++k) {
        const int im = rng.range(0, images - 1);
        InstancePrediction p = ip(cls, rng.range(1, 4) / 4.0, testkit::random_blob(rng, w, h));
        if (!gts[im].empty() && rng.chance(50)) p.mask = rng.pick(gts[im]).mask;  // near-copies
        if (rng.chance(30)) {
          const int x0 = rng.range(0, w - 1), y0 = rng.range(0, h - 1);
          p.box = Box{x0, y0, rng.range(x0, w - 1), rng.range(y0, h - 1)};
        }
        preds[im].push_back(std::move(p));
      }
    }
    check_ap(preds, gts);
  }
}

TEST_CASE("a duplicate of a matched prediction never raises AP") {
  testkit::Rng rng(12);
  const auto th = default_ap_thresholds();
  for (int i = 0; i < 100; ++i) {
    std::vector<std::vector<InstancePrediction>> preds(1);
    std::vector<std::vector<GtInstance>> gts(1);
    // disjoint gts, so the duplicate cannot match anything else
    const int n_gt = rng.range(1, 3);
    for (int k = 0; k < n_gt; ++k) {
      gts[0].push_back({3, fill_box({4 * k, rng.range(0, 4), 4 * k + rng.range(0, 3), rng.range(5, 9)}, 12, 10)});
    }
    const int n_pred = rng.range(1, 4);
    for (int k = 0; k < n_pred; ++k) {
      preds[0].push_back(ip(3, rng.range(1, 9) / 10.0, testkit::random_blob(rng, 12, 10)));
    }
    preds[0].push_back(ip(3, 0.95, gts[0][0].mask));
    const double before = average_precision(preds, gts, S(), IouKind::kMask, th).ap;
    preds[0].push_back(ip(3, rng.range(1, 9) / 10.0, gts[0][0].mask));
    const double after = average_precision(preds, gts, S(), IouKind::kMask, th).ap;
    CHECK(after <= before + 1e-12);
  }
}

TEST_CASE("gt instances come from thing segments of a panoptic map") {
  const PanopticMap m = row({kRoad, kCar1, kCar2, kCar1, kVoid});
  const auto g = gt_instances_from_panoptic(m, S());
  REQUIRE(g.size() == 2);
  CHECK(g[0].mask.area() == 2);
  CHECK(g[1].mask.area() == 1);
}
