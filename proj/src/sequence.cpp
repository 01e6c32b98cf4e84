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

#include "pnav/sequence.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "json.hpp"
#include "pnav/error.hpp"

namespace pnav {

namespace fs = std::filesystem;

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(fmt::format("short write to {}", path.string()));
}

void write_text(const fs::path& path, std::string_view text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string blob_name(std::uint64_t frame_id) { return fmt::format("frame_{:06d}.pframe", frame_id); }

std::vector<ManifestEntry> read_manifest(const fs::path& dir) {
  const fs::path manifest = dir / "manifest.json";
  if (!fs::exists(manifest)) throw IoError(fmt::format("missing manifest {}", manifest.string()));
  const auto raw = read_file(manifest);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(raw.begin(), raw.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(fmt::format("malformed manifest {}: {}", manifest.string(), e.what()));
  }
  std::vector<ManifestEntry> out;
  std::set<std::uint64_t> seen;
  try {
    for (const auto& j : doc.at("frames")) {
      ManifestEntry e;
      e.frame_id = j.at("id").get<std::uint64_t>();
      e.timestamp_us = j.at("timestamp_us").get<std::uint64_t>();
      e.blob = j.at("blob").get<std::string>();
      e.width = j.at("width").get<int>();
      e.height = j.at("height").get<int>();
      e.planes = j.at("planes").get<std::vector<std::string>>();
      if (!seen.insert(e.frame_id).second) {
        throw InvalidArgument(fmt::format("duplicate frame id {} in {}", e.frame_id, manifest.string()));
      }
      if (e.blob.find('/') != std::string::npos || e.blob == ".." || e.blob.empty()) {
        throw InvalidArgument(fmt::format("blob name \"{}\" must be a plain file name", e.blob));
      }
      out.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("malformed manifest {}: {}", manifest.string(), e.what()));
  }
  std::sort(out.begin(), out.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.frame_id < b.frame_id; });
  return out;
}

Frame load_frame(const fs::path& dir, const ManifestEntry& e) {
  const fs::path blob = dir / e.blob;
  if (!fs::exists(blob)) throw IoError(fmt::format("manifest references missing blob {}", blob.string()));
  const auto bytes = read_file(blob);
  Frame f;
  try {
    f = decode_frame(bytes);
  } catch (const DecodeError& err) {
    throw DecodeError(err.code(), fmt::format("{}: {}", blob.string(), err.what()));
  }
  if (f.frame_id != e.frame_id || f.width != e.width || f.height != e.height) {
    throw InvalidArgument(fmt::format("{} does not match its manifest entry (id {} vs {}, {}x{} vs {}x{})",
                                      blob.string(), f.frame_id, e.frame_id, f.width, f.height, e.width, e.height));
  }
  return f;
}

std::vector<Frame> read_sequence(const fs::path& dir) {
  std::vector<Frame> frames;
  for (const ManifestEntry& e : read_manifest(dir)) frames.push_back(load_frame(dir, e));
  return frames;
}

void write_sequence(const std::vector<Frame>& frames, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<const Frame*> order;
  std::set<std::uint64_t> seen;
  for (const Frame& f : frames) {
    if (!seen.insert(f.frame_id).second) throw InvalidArgument(fmt::format("duplicate frame id {}", f.frame_id));
    order.push_back(&f);
  }
  std::sort(order.begin(), order.end(), [](const Frame* a, const Frame* b) { return a->frame_id < b->frame_id; });
  nlohmann::ordered_json doc;
  doc["frames"] = nlohmann::ordered_json::array();
  for (const Frame* f : order) {
    const std::string name = blob_name(f->frame_id);
    write_file(dir / name, encode_frame(*f));
    doc["frames"].push_back({{"id", f->frame_id},
                             {"timestamp_us", f->timestamp_us},
                             {"blob", name},
                             {"width", f->width},
                             {"height", f->height},
                             {"planes", plane_names(f->plane_bits())}});
  }
  write_text(dir / "manifest.json", doc.dump(2) + "\n");
}

}  // namespace pnav
