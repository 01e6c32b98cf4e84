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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pnav {

using ClassId = std::uint16_t;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct ClassDef {
  ClassId id = 0;
  std::string name;
  bool is_thing = false;
  double weight = 0.0;  // feedback priority weight, >= 0
  Rgb color;
  friend bool operator==(const ClassDef&, const ClassDef&) = default;
};

// Immutable class catalog. Ids need not be contiguous; lookups go through a
// hash index rather than array offsets.
class LabelSchema {
 public:
  LabelSchema() = default;
  // Validates and builds. Throws SchemaError on duplicate ids, missing void
  // class, negative weights, or a void class that is a thing / has weight.
  LabelSchema(std::vector<ClassDef> classes, ClassId void_id);

  const std::vector<ClassDef>& classes() const { return classes_; }
  ClassId void_id() const { return void_id_; }

  bool contains(ClassId id) const { return index_.contains(id); }
  // Throws InvalidArgument for unknown ids.
  const ClassDef& at(ClassId id) const;
  const ClassDef* find(ClassId id) const;
  const ClassDef* find_by_name(std::string_view name) const;
  bool is_thing(ClassId id) const;
  bool is_stuff(ClassId id) const;  // void counts as stuff
  // Dense position of `id` in classes(), or -1.
  int position(ClassId id) const;

  std::vector<ClassId> thing_ids() const;
  std::vector<ClassId> stuff_ids() const;  // excludes void

  // Canonical JSON document (the format accepted by load_schema).
  std::string to_json() const;

  friend bool operator==(const LabelSchema& a, const LabelSchema& b) {
    return a.void_id_ == b.void_id_ && a.classes_ == b.classes_;
  }

 private:
  std::vector<ClassDef> classes_;
  ClassId void_id_ = 0;
  std::unordered_map<ClassId, int> index_;
};

// Parses a UTF-8 JSON schema document:
//   {"void_id": 0, "classes": [{"id", "name", "is_thing", "weight",
//   "color": [r, g, b]}, ...]}
// Unknown keys are ignored. Errors name the offending class or position.
LabelSchema load_schema(std::string_view document);
LabelSchema load_schema_file(const std::string& path);

// The built-in street-scene schema (void + 28 stuff + 37 thing classes).
const LabelSchema& default_schema();
std::string_view default_schema_json();

struct MapViolation {
  int row = 0;
  int col = 0;
  ClassId id = 0;
};

// Returns the first pixel (raster order) whose id is not in the schema.
std::optional<MapViolation> validate_map(std::span<const ClassId> ids, int width,
                                         const LabelSchema& schema);

}  // namespace pnav
