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

#include "pnav/fusion.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "pnav/error.hpp"
#include "pnav/kernels.hpp"

namespace pnav {

std::uint64_t FusionConfig::scaled_min_stuff_area(int width, int height) {
  const double pixels = static_cast<double>(width) * height;
  return static_cast<std::uint64_t>(std::llround(4096.0 * pixels / (480.0 * 640.0)));
}

FusionConfig FusionConfig::defaults_for(int width, int height) {
  FusionConfig cfg;
  cfg.min_stuff_area = scaled_min_stuff_area(width, height);
  return cfg;
}

void FusionConfig::validate() const {
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    throw InvalidArgument(fmt::format("confidence_threshold {} outside [0, 1]", confidence_threshold));
  }
  if (!(overlap_keep_fraction >= 0.0 && overlap_keep_fraction <= 1.0)) {
    throw InvalidArgument(fmt::format("overlap_keep_fraction {} outside [0, 1]", overlap_keep_fraction));
  }
}

namespace {

struct Ranked {
  const InstancePrediction* pred;
  std::vector<std::uint8_t> key;
  std::uint64_t area;
};

void check_inputs(const SemanticMap& semantic, const std::vector<InstancePrediction>& instances,
                  const LabelSchema& schema) {
  if (semantic.ids.size() != static_cast<std::size_t>(semantic.width) * semantic.height) {
    throw DimensionError("semantic map size does not match its dimensions");
  }
  if (auto bad = validate_map(semantic.ids, semantic.width, schema)) {
    throw InvalidArgument(fmt::format("semantic pixel ({}, {}) has unknown class {}", bad->row, bad->col, bad->id));
  }
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const InstancePrediction& p = instances[i];
    if (p.mask.width() != semantic.width || p.mask.height() != semantic.height) {
      throw DimensionError(fmt::format("instance {} mask is {}x{}, semantic map is {}x{}", i, p.mask.width(),
                                       p.mask.height(), semantic.width, semantic.height));
    }
    const ClassDef* def = schema.find(p.class_id);
    if (def == nullptr) throw InvalidArgument(fmt::format("instance {} has unknown class {}", i, p.class_id));
    if (!def->is_thing) {
      throw InvalidArgument(fmt::format("instance {} references stuff class \"{}\"", i, def->name));
    }
    if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
      throw InvalidArgument(fmt::format("instance {} confidence {} outside [0, 1]", i, p.confidence));
    }
  }
}

}  // namespace

PanopticMap fuse_frame(const SemanticMap& semantic, const std::vector<InstancePrediction>& instances,
                       const LabelSchema& schema, const FusionConfig& cfg) {
  cfg.validate();
  check_inputs(semantic, instances, schema);

  std::vector<Ranked> ranked;
  ranked.reserve(instances.size());
  for (const InstancePrediction& p : instances) {
    if (p.confidence < cfg.confidence_threshold) continue;
    ranked.push_back({&p, mask_key(p.mask), p.mask.area()});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.pred->confidence != b.pred->confidence) return a.pred->confidence > b.pred->confidence;
    if (a.pred->class_id != b.pred->class_id) return a.pred->class_id < b.pred->class_id;
    return a.key < b.key;
  });

  const std::size_t n = semantic.ids.size();
  // owner[i] = 1-based position in `kept`, 0 = unclaimed.
  std::vector<std::int32_t> owner(n, 0);
  std::vector<ClassId> kept_class;
  for (const Ranked& r : ranked) {
    if (r.area == 0) continue;
    const std::uint64_t remaining = kernels::parallel::count_unowned(r.pred->mask.bits(), owner);
    const double fraction = static_cast<double>(remaining) / static_cast<double>(r.area);
    if (fraction < cfg.overlap_keep_fraction || remaining < cfg.min_instance_area || remaining == 0) continue;
    if (kept_class.size() >= 0xFFFF) throw InvalidArgument("more than 65535 instances in one frame");
    kept_class.push_back(r.pred->class_id);
    kernels::parallel::claim_unowned(r.pred->mask.bits(), owner, static_cast<std::int32_t>(kept_class.size()));
  }

  const std::uint64_t min_stuff =
      cfg.scale_stuff_area ? FusionConfig::scaled_min_stuff_area(semantic.width, semantic.height) : cfg.min_stuff_area;
  std::vector<std::uint8_t> stuff_kept(0x10000, 0);
  for (const auto& [cls, area] : kernels::parallel::unowned_class_histogram(semantic.ids, owner)) {
    const auto id = static_cast<ClassId>(cls);
    stuff_kept[id] = schema.is_stuff(id) && id != schema.void_id() && area >= min_stuff;
  }

  const std::uint32_t void_label = pack_label(schema.void_id(), 0);
  std::vector<std::uint32_t> packed(n);
  const std::int64_t count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (n >= kernels::kParallelMinPixels)
  for (std::int64_t i = 0; i < count; ++i) {
    const std::int32_t o = owner[i];
    if (o != 0) {
      packed[i] = pack_label(kept_class[o - 1], static_cast<InstanceId>(o));
    } else {
      const ClassId cls = semantic.ids[i];
      packed[i] = stuff_kept[cls] != 0 ? pack_label(cls, 0) : void_label;
    }
  }
  return PanopticMap(semantic.width, semantic.height, std::move(packed));
}

PanopticMap relabel_canonical(const PanopticMap& map) {
  std::unordered_map<InstanceId, InstanceId> remap;
  std::vector<std::uint32_t> out(map.packed().begin(), map.packed().end());
  for (std::uint32_t& v : out) {
    const InstanceId inst = label_instance(v);
    if (inst == 0) continue;
    auto [it, inserted] = remap.emplace(inst, static_cast<InstanceId>(remap.size() + 1));
    v = pack_label(label_class(v), it->second);
  }
  return PanopticMap(map.width(), map.height(), std::move(out));
}

}  // namespace pnav
