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
#include <filesystem>
#include <string>
#include <vector>

#include "pnav/frame.hpp"

namespace pnav {

struct ManifestEntry {
  std::uint64_t frame_id = 0;
  std::uint64_t timestamp_us = 0;
  std::string blob;  // file name relative to the sequence directory
  int width = 0;
  int height = 0;
  std::vector<std::string> planes;
};

// A sequence directory holds manifest.json plus one .pframe blob (the
// encode_frame bytes) per frame.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& dir);

// Loads a single blob and checks it against its manifest entry.
Frame load_frame(const std::filesystem::path& dir, const ManifestEntry& entry);

// Frames sorted by frame id. Throws IoError for a missing manifest or blob
// (naming the file) and InvalidArgument for duplicate ids.
std::vector<Frame> read_sequence(const std::filesystem::path& dir);

// Creates the directory if needed and writes frames in id order.
void write_sequence(const std::vector<Frame>& frames, const std::filesystem::path& dir);

std::string blob_name(std::uint64_t frame_id);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace pnav
