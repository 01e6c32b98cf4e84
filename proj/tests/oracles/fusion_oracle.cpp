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

#include <algorithm>

#include "oracles.hpp"

namespace oracle {
namespace {

// Row-major runs starting with a zero-run, as little-endian u32 bytes.
std::vector<std::uint8_t> encoded_bytes(const pnav::BitMask& m) {
  std::vector<std::uint32_t> runs;
  int current = 0;
  std::uint32_t len = 0;
  for (int r = 0; r < m.height(); ++r) {
    for (int c = 0; c < m.width(); ++c) {
      const int v = m.at(r, c) ? 1 : 0;
      if (v == current) {
        ++len;
      } else {
        runs.push_back(len);
        current = v;
        len = 1;
      }
    }
  }
  runs.push_back(len);
  std::vector<std::uint8_t> out;
  for (std::uint32_t x : runs) {
    out.push_back(x & 0xFF);
    out.push_back((x >> 8) & 0xFF);
    out.push_back((x >> 16) & 0xFF);
    out.push_back((x >> 24) & 0xFF);
  }
  return out;
}

}  // namespace

pnav::PanopticMap fuse(const pnav::SemanticMap& semantic, const std::vector<pnav::InstancePrediction>& instances,
                       const pnav::LabelSchema& schema, const pnav::FusionConfig& cfg) {
  const int w = semantic.width, h = semantic.height;

  // 1. confidence filter
  std::vector<const pnav::InstancePrediction*> kept;
  for (const auto& p : instances) {
    if (p.confidence >= cfg.confidence_threshold) kept.push_back(&p);
  }

  // 2. ordering: selection sort on (confidence desc, class asc, bytes asc)
  std::vector<const pnav::InstancePrediction*> order;
  std::vector<bool> used(kept.size(), false);
  for (std::size_t round = 0; round < kept.size(); ++round) {
    int best = -1;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (used[i]) continue;
      if (best < 0) {
        best = static_cast<int>(i);
        continue;
      }
      const auto* a = kept[i];
      const auto* b = kept[static_cast<std::size_t>(best)];
      bool better = false;
      if (a->confidence != b->confidence) {
        better = a->confidence > b->confidence;
      } else if (a->class_id != b->class_id) {
        better = a->class_id < b->class_id;
      } else {
        better = encoded_bytes(a->mask) < encoded_bytes(b->mask);
      }
      if (better) best = static_cast<int>(i);
    }
    used[static_cast<std::size_t>(best)] = true;
    order.push_back(kept[static_cast<std::size_t>(best)]);
  }

  // 3. claiming
  std::vector<std::vector<int>> owner(h, std::vector<int>(w, 0));
  std::vector<pnav::ClassId> instance_class{0};
  for (const auto* p : order) {
    std::uint64_t area = 0, remaining = 0;
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (!p->mask.at(r, c)) continue;
        ++area;
        if (owner[r][c] == 0) ++remaining;
      }
    }
    if (area == 0 || remaining == 0) continue;
    if (static_cast<double>(remaining) / static_cast<double>(area) < cfg.overlap_keep_fraction) continue;
    if (remaining < cfg.min_instance_area) continue;
    const int id = static_cast<int>(instance_class.size());
    instance_class.push_back(p->class_id);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (p->mask.at(r, c) && owner[r][c] == 0) owner[r][c] = id;
      }
    }
  }

  // 4. unclaimed pixels
  const std::uint64_t min_stuff =
      cfg.scale_stuff_area ? pnav::FusionConfig::scaled_min_stuff_area(w, h) : cfg.min_stuff_area;
  std::map<pnav::ClassId, std::uint64_t> unclaimed;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (owner[r][c] == 0) ++unclaimed[semantic.at(r, c)];
    }
  }
  std::vector<std::uint32_t> packed(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      std::uint32_t label;
      if (owner[r][c] != 0) {
        label = pnav::pack_label(instance_class[static_cast<std::size_t>(owner[r][c])],
                                 static_cast<pnav::InstanceId>(owner[r][c]));
      } else {
        const pnav::ClassId s = semantic.at(r, c);
        const bool stuff = !schema.at(s).is_thing && s != schema.void_id();
        label = pnav::pack_label(stuff && unclaimed[s] >= min_stuff ? s : schema.void_id(), 0);
      }
      packed[static_cast<std::size_t>(r) * w + c] = label;
    }
  }
  return pnav::PanopticMap(w, h, std::move(packed));
}

}  // namespace oracle
