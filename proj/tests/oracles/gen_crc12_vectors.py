#!/usr/bin/env python3
# Copyright 2026 The RIFL Simulator Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Golden vectors for the CRC-12 and the 264-byte frame layout.

Independent of the C++ code: bit-at-a-time CRC (poly 0x80F, init 0, no
reflection, no final xor) and a direct transcription of the byte layout.

Usage: gen_crc12_vectors.py > tests/data/crc12_vectors.txt
"""

POLY = 0x80F


def crc12(data: bytes) -> int:
    crc = 0
    for byte in data:
        for bit in range(7, -1, -1):
            fb = ((crc >> 11) & 1) ^ ((byte >> bit) & 1)
            crc = (crc << 1) & 0xFFF
            if fb:
                crc ^= POLY
    return crc


def payload_byte(seed: int, i: int) -> int:
    return (seed * 31 + i * 7 + (i >> 3)) & 0xFF


def frame(total, remain, ports, valid, eop, seq, seed) -> bytes:
    f = bytearray(264)
    f[2] = (total << 4) | remain
    f[3:8] = bytes(ports)
    for i in range(valid):
        f[8 + i] = payload_byte(seed, i)
    partial = valid < 256
    if partial:
        f[263] = valid & 0xFF
    meta = (8 if eop else 0) | (4 if partial else 0) | (seq % 4)
    crc = crc12(bytes([meta << 4]) + bytes(f[2:]))
    word = (meta << 12) | crc
    f[0] = word >> 8
    f[1] = word & 0xFF
    return bytes(f)


def main():
    print("# crc <input hex> <crc12 hex>")
    print("# frame <total> <remain> <p0..p4> <valid> <eop> <seq> <payload seed> <frame hex>")
    raw = [b"", b"\x00", b"\xff", b"123456789", bytes(range(256)), b"RIFL" * 16]
    for r in raw:
        print("crc", r.hex() or "-", f"{crc12(r):03x}")
    cases = [
        (1, 1, [3, 0, 0, 0, 0], 256, True, 0, 1),
        (1, 1, [30, 0, 0, 0, 0], 88, True, 1, 2),
        (2, 2, [5, 7, 0, 0, 0], 256, False, 2, 3),
        (5, 3, [1, 2, 3, 4, 5], 1, True, 3, 4),
        (3, 0, [9, 8, 7, 0, 0], 255, True, 0, 5),
        (1, 1, [255, 0, 0, 0, 0], 64, True, 2, 6),
    ]
    for total, remain, ports, valid, eop, seq, seed in cases:
        f = frame(total, remain, ports, valid, eop, seq, seed)
        print("frame", total, remain, *ports, valid, int(eop), seq, seed, f.hex())


if __name__ == "__main__":
    main()
