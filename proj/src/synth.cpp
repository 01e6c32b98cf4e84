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

#include "pnav/synth.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pnav/error.hpp"

namespace pnav {
namespace {

// mt19937 output is fully specified; the std distributions are not, so
// draws are derived from raw outputs to keep fixtures reproducible.
class Rng {
 public:
  explicit Rng(std::uint32_t seed) : gen_(seed) {}
  int range(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint32_t>(hi - lo + 1)); }
  double unit() { return static_cast<double>(gen_()) / 4294967296.0; }

 private:
  std::mt19937 gen_;
};

struct Classes {
  ClassId sky, building, sidewalk, road, vegetation, person, car, pole, bike, light;
};

Classes lookup(const LabelSchema& schema) {
  auto id = [&](const char* name) {
    const ClassDef* c = schema.find_by_name(name);
    if (c == nullptr) throw SchemaError(fmt::format("synthetic scenes need a \"{}\" class", name));
    return c->id;
  };
  return {id("sky"), id("building"), id("sidewalk"), id("road"), id("vegetation"),
          id("person"), id("car"), id("pole"), id("bike"), id("traffic-light")};
}

enum class Shape { kBox, kEllipse };

struct Obj {
  ClassId cls;
  Shape shape;
  double cx, cy;    // center, pixels
  double hw, hh;    // half extents, pixels
  double dist_mm;
  double vx;        // sideways drift per frame
  double approach;  // fractional distance change per frame
  double conf;
};

void background(const Classes& k, int w, int h, SemanticMap& sem, DepthMap& depth) {
  const int horizon = h * 2 / 5;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      ClassId cls;
      std::uint16_t d = 0;
      if (r < horizon) {
        const bool side = c < w / 5 || c >= w - w / 5;
        cls = side ? k.building : k.sky;
        if (r > horizon * 3 / 4 && !side && (c / 7) % 3 == 0) cls = k.vegetation;
        d = cls == k.sky ? 0 : static_cast<std::uint16_t>(side ? 9000 : 25000);
      } else {
        cls = c < w * 9 / 20 ? k.sidewalk : k.road;
        const double rows_below = static_cast<double>(r - horizon + 1);
        d = static_cast<std::uint16_t>(std::min(30000.0, 1.4e3 * h / rows_below));
      }
      sem.ids[static_cast<std::size_t>(r) * w + c] = cls;
      depth.mm[static_cast<std::size_t>(r) * w + c] = d;
    }
  }
}

BitMask rasterize(const Obj& o, int w, int h) {
  BitMask m(w, h);
  const int r0 = std::max(0, static_cast<int>(std::floor(o.cy - o.hh)));
  const int r1 = std::min(h - 1, static_cast<int>(std::ceil(o.cy + o.hh)));
  const int c0 = std::max(0, static_cast<int>(std::floor(o.cx - o.hw)));
  const int c1 = std::min(w - 1, static_cast<int>(std::ceil(o.cx + o.hw)));
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const double dx = (c - o.cx) / std::max(o.hw, 0.5);
      const double dy = (r - o.cy) / std::max(o.hh, 0.5);
      const bool in = o.shape == Shape::kBox ? (std::fabs(dx) <= 1.0 && std::fabs(dy) <= 1.0) : dx * dx + dy * dy <= 1.0;
      if (in) m.set(r, c);
    }
  }
  return m;
}

Obj spawn(Rng& rng, const Classes& k, int w, int h) {
  Obj o{};
  const int kind = rng.range(0, 9);
  const double scale = h / 120.0;
  o.dist_mm = 4000 + rng.range(0, 12000);
  const double size = 1.0 + 8000.0 / o.dist_mm;  // nearer objects look larger
  o.cx = rng.range(w / 10, w - w / 10);
  if (kind < 4) {
    o.cls = k.person, o.shape = Shape::kEllipse, o.hw = 2.5 * size * scale, o.hh = 7 * size * scale;
  } else if (kind < 7) {
    o.cls = k.car, o.shape = Shape::kBox, o.hw = 9 * size * scale, o.hh = 5 * size * scale;
  } else if (kind < 8) {
    o.cls = k.pole, o.shape = Shape::kBox, o.hw = 1 * size * scale, o.hh = 14 * size * scale;
  } else if (kind < 9) {
    o.cls = k.bike, o.shape = Shape::kEllipse, o.hw = 5 * size * scale, o.hh = 4 * size * scale;
  } else {
    o.cls = k.light, o.shape = Shape::kBox, o.hw = 1.5 * size * scale, o.hh = 4 * size * scale;
  }
  const int horizon = h * 2 / 5;
  o.cy = std::min<double>(h - 1, horizon + 1.4e3 * h / o.dist_mm) - o.hh;
  if (o.cls == k.light) o.cy = horizon - o.hh - 2;
  o.vx = (rng.unit() - 0.5) * 3.0 * scale;
  o.approach = 0.02 + 0.06 * rng.unit();
  o.conf = 0.35 + 0.64 * rng.unit();
  return o;
}

Frame compose(const Classes& k, const std::vector<Obj>& objs, int w, int h, Rng& rng, bool with_rgb,
              const LabelSchema& schema) {
  Frame f;
  f.width = w;
  f.height = h;
  SemanticMap sem(w, h);
  DepthMap depth(w, h);
  background(k, w, h, sem, depth);
  std::vector<InstancePrediction> preds;
  // Paint far objects first so nearer ones occlude them.
  std::vector<const Obj*> order;
  for (const Obj& o : objs) order.push_back(&o);
  std::stable_sort(order.begin(), order.end(), [](const Obj* a, const Obj* b) { return a->dist_mm > b->dist_mm; });
  for (const Obj* o : order) {
    BitMask m = rasterize(*o, w, h);
    if (m.empty()) continue;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m.bits()[i]) continue;
      sem.ids[i] = o->cls;
      // Depth speckle: a few invalid returns on every object.
      depth.mm[i] = rng.range(0, 40) == 0 ? 0 : static_cast<std::uint16_t>(std::clamp(o->dist_mm, 300.0, 60000.0));
    }
    InstancePrediction p;
    p.class_id = o->cls;
    p.confidence = std::round(o->conf * 1e6) / 1e6;
    p.mask = std::move(m);
    p.box = bbox_of_mask(p.mask);
    preds.push_back(std::move(p));
  }
  // Occasional duplicate detection with lower confidence.
  if (!preds.empty() && rng.range(0, 2) == 0) {
    InstancePrediction dup = preds[static_cast<std::size_t>(rng.range(0, static_cast<int>(preds.size()) - 1))];
    dup.confidence = std::round(dup.confidence * 0.7 * 1e6) / 1e6;
    preds.push_back(std::move(dup));
  }
  if (with_rgb) {
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < sem.ids.size(); ++i) {
      const Rgb c = schema.at(sem.ids[i]).color;
      const int noise = rng.range(-12, 12);
      rgb[i * 3] = static_cast<std::uint8_t>(std::clamp(c.r + noise, 0, 255));
      rgb[i * 3 + 1] = static_cast<std::uint8_t>(std::clamp(c.g + noise, 0, 255));
      rgb[i * 3 + 2] = static_cast<std::uint8_t>(std::clamp(c.b + noise, 0, 255));
    }
    f.rgb = std::move(rgb);
  }
  f.semantic = std::move(sem);
  f.depth = std::move(depth);
  f.instances = std::move(preds);
  return f;
}

}  // namespace

std::vector<Frame> synthesize_walk(const WalkConfig& cfg, const LabelSchema& schema) {
  const Classes k = lookup(schema);
  Rng rng(cfg.seed);
  std::vector<Obj> objs;
  for (int i = 0; i < 4; ++i) objs.push_back(spawn(rng, k, cfg.width, cfg.height));
  std::vector<Frame> frames;
  const double scale = cfg.height / 120.0;
  for (std::size_t t = 0; t < cfg.frames; ++t) {
    Frame f = compose(k, objs, cfg.width, cfg.height, rng, cfg.with_rgb, schema);
    f.frame_id = t;
    f.timestamp_us = t * cfg.cadence_us;
    frames.push_back(std::move(f));
    // Advance: objects approach (grow, slide down), drift, and leave.
    std::vector<Obj> next;
    for (Obj o : objs) {
      const double old = o.dist_mm;
      o.dist_mm *= 1.0 - o.approach;
      const double grow = old / o.dist_mm;
      o.hw *= grow;
      o.hh *= grow;
      o.cy = std::min<double>(cfg.height - 1, cfg.height * 2 / 5 + 1.4e3 * cfg.height / o.dist_mm) - o.hh;
      o.cx += o.vx + (o.cx - cfg.width / 2.0) * 0.04;
      const bool gone = o.dist_mm < 900 || o.cx < -o.hw || o.cx > cfg.width + o.hw || o.hh > cfg.height * 0.9;
      if (!gone) next.push_back(o);
    }
    objs = std::move(next);
    while (objs.size() < 3 || (objs.size() < 7 && rng.range(0, 3) == 0)) {
      objs.push_back(spawn(rng, k, cfg.width, cfg.height));
    }
    (void)scale;
  }
  return frames;
}

Frame synthesize_dense_frame(int width, int height, int instances, std::uint32_t seed, const LabelSchema& schema) {
  const Classes k = lookup(schema);
  Rng rng(seed);
  std::vector<Obj> objs;
  while (static_cast<int>(objs.size()) < instances) objs.push_back(spawn(rng, k, width, height));
  Frame f = compose(k, objs, width, height, rng, false, schema);
  // compose may append a duplicate or skip off-image objects; pin the count.
  auto& preds = *f.instances;
  while (static_cast<int>(preds.size()) > instances) preds.pop_back();
  while (static_cast<int>(preds.size()) < instances) {
    InstancePrediction extra = preds.empty() ? InstancePrediction{k.person, 0.9, BitMask(width, height), std::nullopt}
                                             : preds[preds.size() % std::max<std::size_t>(1, preds.size())];
    if (extra.mask.empty()) extra.mask.set(height / 2, width / 2);
    extra.confidence = 0.42;
    preds.push_back(std::move(extra));
  }
  return f;
}

}  // namespace pnav
