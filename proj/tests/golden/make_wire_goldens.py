#!/usr/bin/env python3
# Copyright 2026 The Panoptic-Nav Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the golden wire vectors under wire/ using only struct and zlib.

Layout: b"PANO" | u8 version=1 | u8 type | u32 payload length | payload |
u32 CRC-32 of everything before it. All integers little-endian.
"""
import json
import os
import struct
import zlib

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "wire")

FRAME, FEEDBACK, HEARTBEAT, SCHEMA = 1, 2, 3, 4


def message(kind, payload):
    head = b"PANO" + struct.pack("<BBI", 1, kind, len(payload))
    body = head + payload
    return body + struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF)


def frame_header(frame_id, ts, w, h, bits):
    return struct.pack("<QQHHB", frame_id, ts, w, h, bits)


def plane(data):
    return struct.pack("<I", len(data)) + data


def tiny_frame():
    # 1x1, semantic plane only, class 7
    return frame_header(7, 0, 1, 1, 0x02) + plane(struct.pack("<H", 7))


def small_frame():
    # 2x2 with depth, panoptic and one instance (class 3, confidence 0.75, box)
    w, h = 2, 2
    depth = struct.pack("<4H", 1500, 0, 2500, 3000)
    pan = struct.pack("<4I", (1 << 16) | 0, (3 << 16) | 1, (1 << 16) | 0, (3 << 16) | 1)
    runs = [1, 1, 1, 1]  # column 1 set: 0 1 / 0 1
    inst = struct.pack("<H", 1)
    inst += struct.pack("<HIB4H", 3, 750000, 1, 1, 0, 1, 1)
    inst += struct.pack("<I", len(runs)) + struct.pack("<%dI" % len(runs), *runs)
    bits = 0x04 | 0x08 | 0x10
    return frame_header(42, 250000, w, h, bits) + plane(depth) + plane(pan) + plane(inst)


def vectors():
    feedback = (b'{"frame_id":3,"class_id":19,"sector":"left","distance_mm":1500,'
                b'"priority":0.25,"emitted_at_us":750000}\n')
    schema = json.dumps({"void_id": 0, "classes": [
        {"id": 0, "name": "void", "is_thing": False, "weight": 0, "color": [0, 0, 0]},
        {"id": 1, "name": "road", "is_thing": False, "weight": 0, "color": [128, 64, 128]},
        {"id": 3, "name": "car", "is_thing": True, "weight": 2, "color": [0, 0, 142]}]},
        separators=(",", ":")).encode()
    return [
        ("heartbeat.bin", HEARTBEAT, b""),
        ("feedback.bin", FEEDBACK, feedback),
        ("schema.bin", SCHEMA, schema),
        ("frame_tiny.bin", FRAME, tiny_frame()),
        ("frame_small.bin", FRAME, small_frame()),
    ]


def main():
    os.makedirs(OUT, exist_ok=True)
    index = []
    for name, kind, payload in vectors():
        data = message(kind, payload)
        with open(os.path.join(OUT, name), "wb") as f:
            f.write(data)
        index.append({"file": name, "type": kind, "payload_hex": payload.hex(),
                      "crc32": "%08x" % struct.unpack("<I", data[-4:])[0], "size": len(data)})
    with open(os.path.join(OUT, "index.json"), "w") as f:
        json.dump(index, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
