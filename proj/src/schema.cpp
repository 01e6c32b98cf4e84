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

#include "pnav/schema.hpp"

#include <fmt/format.h>

#include <fstream>
#include "json.hpp"
#include <sstream>
#include <unordered_set>

#include "pnav/error.hpp"

namespace pnav {
namespace detail {
std::string_view embedded_default_schema();
}  // namespace detail

LabelSchema::LabelSchema(std::vector<ClassDef> classes, ClassId void_id)
    : classes_(std::move(classes)), void_id_(void_id) {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const ClassDef& c = classes_[i];
    if (c.name.empty()) {
      throw SchemaError(fmt::format("class at position {} (id {}) has an empty name", i, c.id));
    }
    if (!(c.weight >= 0.0)) {
      throw SchemaError(fmt::format("class \"{}\" (position {}) has negative weight {}", c.name, i,
                                    c.weight));
    }
    if (!index_.emplace(c.id, static_cast<int>(i)).second) {
      throw SchemaError(fmt::format("duplicate class id {} at position {} (\"{}\")", c.id, i, c.name));
    }
  }
  const ClassDef* v = find(void_id_);
  if (v == nullptr) {
    throw SchemaError(fmt::format("void class id {} is not in the class list", void_id_));
  }
  if (v->is_thing || v->weight != 0.0) {
    throw SchemaError(fmt::format("void class \"{}\" must be stuff with weight 0", v->name));
  }
}

const ClassDef* LabelSchema::find(ClassId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &classes_[it->second];
}

const ClassDef& LabelSchema::at(ClassId id) const {
  const ClassDef* c = find(id);
  if (c == nullptr) throw InvalidArgument(fmt::format("class id {} not in schema", id));
  return *c;
}

const ClassDef* LabelSchema::find_by_name(std::string_view name) const {
  for (const ClassDef& c : classes_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool LabelSchema::is_thing(ClassId id) const {
  const ClassDef* c = find(id);
  return c != nullptr && c->is_thing;
}

bool LabelSchema::is_stuff(ClassId id) const {
  const ClassDef* c = find(id);
  return c != nullptr && !c->is_thing;
}

int LabelSchema::position(ClassId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

std::vector<ClassId> LabelSchema::thing_ids() const {
  std::vector<ClassId> out;
  for (const ClassDef& c : classes_) {
    if (c.is_thing) out.push_back(c.id);
  }
  return out;
}

std::vector<ClassId> LabelSchema::stuff_ids() const {
  std::vector<ClassId> out;
  for (const ClassDef& c : classes_) {
    if (!c.is_thing && c.id != void_id_) out.push_back(c.id);
  }
  return out;
}

std::string LabelSchema::to_json() const {
  nlohmann::ordered_json doc;
  doc["void_id"] = void_id_;
  auto& arr = doc["classes"] = nlohmann::ordered_json::array();
  for (const ClassDef& c : classes_) {
    arr.push_back({{"id", c.id},
                   {"name", c.name},
                   {"is_thing", c.is_thing},
                   {"weight", c.weight},
                   {"color", {c.color.r, c.color.g, c.color.b}}});
  }
  return doc.dump();
}

namespace {

std::string describe(const nlohmann::json& entry, std::size_t pos) {
  if (entry.is_object() && entry.contains("name") && entry["name"].is_string()) {
    return fmt::format("class \"{}\" (position {})", entry["name"].get<std::string>(), pos);
  }
  return fmt::format("class at position {}", pos);
}

}  // namespace

LabelSchema load_schema(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(fmt::format("malformed schema document: {}", e.what()));
  }
  if (!doc.is_object()) throw SchemaError("malformed schema document: top level is not an object");
  if (!doc.contains("classes") || !doc["classes"].is_array()) {
    throw SchemaError("malformed schema document: missing \"classes\" array");
  }
  if (!doc.contains("void_id") || !doc["void_id"].is_number_integer()) {
    throw SchemaError("malformed schema document: missing integer \"void_id\"");
  }
  const auto void_raw = doc["void_id"].get<std::int64_t>();
  if (void_raw < 0 || void_raw > 0xFFFF) {
    throw SchemaError(fmt::format("void_id {} out of range [0, 65535]", void_raw));
  }

  std::vector<ClassDef> classes;
  const auto& arr = doc["classes"];
  classes.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& e = arr[i];
    const std::string where = describe(e, i);
    if (!e.is_object()) throw SchemaError(where + ": not an object");
    ClassDef c;
    if (!e.contains("id") || !e["id"].is_number_integer()) throw SchemaError(where + ": missing integer \"id\"");
    const auto id = e["id"].get<std::int64_t>();
    if (id < 0 || id > 0xFFFF) throw SchemaError(fmt::format("{}: id {} out of range [0, 65535]", where, id));
    c.id = static_cast<ClassId>(id);
    if (!e.contains("name") || !e["name"].is_string()) throw SchemaError(where + ": missing string \"name\"");
    c.name = e["name"].get<std::string>();
    if (!e.contains("is_thing") || !e["is_thing"].is_boolean()) {
      throw SchemaError(where + ": missing boolean \"is_thing\"");
    }
    c.is_thing = e["is_thing"].get<bool>();
    if (!e.contains("weight") || !e["weight"].is_number()) throw SchemaError(where + ": missing numeric \"weight\"");
    c.weight = e["weight"].get<double>();
    if (!e.contains("color") || !e["color"].is_array() || e["color"].size() != 3) {
      throw SchemaError(where + ": \"color\" must be [r, g, b]");
    }
    std::array<std::uint8_t, 3> rgb{};
    for (int k = 0; k < 3; ++k) {
      const auto& v = e["color"][k];
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0 || v.get<std::int64_t>() > 255) {
        throw SchemaError(where + ": color components must be integers in [0, 255]");
      }
      rgb[k] = static_cast<std::uint8_t>(v.get<int>());
    }
    c.color = {rgb[0], rgb[1], rgb[2]};
    classes.push_back(std::move(c));
  }
  return LabelSchema(std::move(classes), static_cast<ClassId>(void_raw));
}

LabelSchema load_schema_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open schema file {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_schema(ss.str());
}

std::string_view default_schema_json() { return detail::embedded_default_schema(); }

const LabelSchema& default_schema() {
  static const LabelSchema schema = load_schema(default_schema_json());
  return schema;
}

std::optional<MapViolation> validate_map(std::span<const ClassId> ids, int width,
                                         const LabelSchema& schema) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!schema.contains(ids[i])) {
      return MapViolation{static_cast<int>(i / width), static_cast<int>(i % width), ids[i]};
    }
  }
  return std::nullopt;
}

}  // namespace pnav
