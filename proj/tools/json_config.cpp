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

#include "json_config.hpp"

#include "json.hpp"

namespace pnav::cli {
namespace {

using nlohmann::ordered_json;

std::string scalar_text(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

void flatten(const ordered_json& obj, std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object()) {
      parents.push_back(key);
      flatten(value, parents, items);
      parents.pop_back();
      continue;
    }
    if (value.is_null()) continue;
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = key;
    if (value.is_array()) {
      for (const auto& e : value) item.inputs.push_back(scalar_text(e));
    } else {
      item.inputs.push_back(scalar_text(value));
    }
    items.push_back(std::move(item));
  }
}

ordered_json typed(const std::string& text) {
  ordered_json parsed = ordered_json::parse(text, nullptr, false);
  if (!parsed.is_discarded() && (parsed.is_number() || parsed.is_boolean())) return parsed;
  return text;
}

ordered_json dump_app(const CLI::App* app, bool default_also) {
  ordered_json j = ordered_json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    const auto& results = opt->results();
    if (!results.empty()) {
      if (opt->get_expected_max() > 1) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : results) arr.push_back(typed(r));
        j[name] = arr;
      } else {
        j[name] = opt->get_expected_min() == 0 ? ordered_json(opt->as<bool>()) : typed(results.back());
      }
    } else if (default_also && !opt->get_default_str().empty()) {
      j[name] = typed(opt->get_default_str());
    }
  }
  for (const CLI::App* sub : app->get_subcommands({})) {
    ordered_json s = dump_app(sub, default_also);
    if (!s.empty()) j[sub->get_name()] = s;
  }
  return j;
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool, std::string) const {
  return dump_app(app, default_also).dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  ordered_json root;
  try {
    input >> root;
  } catch (const nlohmann::json::exception& e) {
    throw CLI::ConversionError("config", std::string("invalid JSON config: ") + e.what());
  }
  if (!root.is_object()) throw CLI::ConversionError("config", "JSON config must be an object");
  std::vector<CLI::ConfigItem> items;
  std::vector<std::string> parents;
  flatten(root, parents, items);
  return items;
}

}  // namespace pnav::cli
