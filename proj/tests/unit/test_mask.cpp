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

#include "doctest.h"
#include "pnav/error.hpp"
#include "pnav/mask.hpp"
#include "support/testkit.hpp"

using namespace pnav;

namespace {

BitMask grid(int w, int h, std::vector<std::uint8_t> bits) { return BitMask(w, h, std::move(bits)); }

}  // namespace

TEST_CASE("rle_encode examples") {
  CHECK(rle_encode(grid(2, 2, {0, 0, 0, 0})).runs == std::vector<std::uint32_t>{4});
  CHECK(rle_encode(grid(2, 2, {1, 1, 1, 1})).runs == std::vector<std::uint32_t>{0, 4});
  CHECK(rle_encode(grid(2, 2, {0, 1, 1, 0})).runs == std::vector<std::uint32_t>{1, 2, 1});
}

TEST_CASE("rle_decode examples") {
  CHECK(rle_decode({2, 2, {4}}) == grid(2, 2, {0, 0, 0, 0}));
  CHECK(rle_decode({2, 2, {1, 2, 1}}) == grid(2, 2, {0, 1, 1, 0}));
  CHECK_THROWS_AS(rle_decode({2, 2, {3}}), MalformedMask);
  CHECK(rle_check({2, 2, {3}}).has_value());
  CHECK_FALSE(rle_check({2, 2, {0, 4}}).has_value());
}

TEST_CASE("rle round trip and text form") {
  testkit::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const int w = rng.range(1, 20), h = rng.range(1, 20);
    const BitMask m = testkit::random_blob(rng, w, h);
    const RleMask r = rle_encode(m);
    CHECK(rle_decode(r) == m);
    CHECK(rle_from_text(rle_to_text(r)) == r);
  }
  CHECK(rle_to_text({2, 2, {1, 2, 1}}) == "2 2: 1 2 1");
  CHECK_THROWS_AS(rle_from_text("2 2 1 2 1"), MalformedMask);
}

TEST_CASE("mask_iou examples") {
  const BitMask full = grid(2, 2, {1, 1, 1, 1});
  const BitMask top = grid(2, 2, {1, 1, 0, 0});
  const BitMask bottom = grid(2, 2, {0, 0, 1, 1});
  CHECK(mask_iou(full, full) == 1.0);
  CHECK(mask_iou(top, bottom) == 0.0);
  CHECK(mask_iou(top, full) == doctest::Approx(0.5));
  CHECK(mask_iou(BitMask(2, 2), BitMask(2, 2)) == 0.0);
  CHECK_THROWS_AS(mask_iou(top, BitMask(3, 2)), DimensionError);
}

TEST_CASE("box_iou examples") {
  CHECK(box_iou({1, 1, 4, 4}, {1, 1, 4, 4}) == 1.0);
  CHECK(box_iou({0, 0, 1, 1}, {3, 3, 4, 4}) == 0.0);
  CHECK(box_iou({0, 0, 1, 1}, {1, 1, 2, 2}) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("bbox_of_mask examples") {
  BitMask m(8, 6);
  m.set(3, 5);
  const auto b = bbox_of_mask(m);
  REQUIRE(b.has_value());
  CHECK(*b == Box{5, 3, 5, 3});
  BitMask f(7, 4, std::vector<std::uint8_t>(28, 1));
  CHECK(*bbox_of_mask(f) == Box{0, 0, 6, 3});
  CHECK_FALSE(bbox_of_mask(BitMask(3, 3)).has_value());
  CHECK(bbox_of_mask(fill_box({1, 2, 3, 4}, 6, 6)) == Box{1, 2, 3, 4});
}

TEST_CASE("mask_key orders by encoded bytes") {
  const BitMask a = grid(2, 2, {0, 1, 1, 0});
  const BitMask b = grid(2, 2, {1, 1, 1, 1});
  CHECK(mask_key(a) == rle_bytes(rle_encode(a)));
  CHECK(rle_bytes({2, 2, {1, 2, 1}}) ==
        std::vector<std::uint8_t>{1, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0});
  CHECK(mask_key(b) < mask_key(a));  // leading zero-run 0 < 1
}
