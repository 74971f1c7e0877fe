# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Binary storage of match sets.

The format is an 8-byte magic, five little-endian u32 values `t, t_hat, H, W, K` and then, for
every source pixel in row-major order, a u8 match count followed by that many
`(u16 x, u16 y, f32 distance)` records.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import FormatError, TruncatedPayloadError, ValidationError
from .matching import MatchSet

MATCH_MAGIC = b"MFVISMCH"
MATCH_HEADER_SIZE = len(MATCH_MAGIC) + 5 * 4
MATCH_RECORD = np.dtype([("x", "<u2"), ("y", "<u2"), ("distance", "<f4")])


def matchset_nbytes(match_set: MatchSet) -> int:
    """The size of a match set in the binary format, in bytes."""
    pixels = match_set.height * match_set.width
    return MATCH_HEADER_SIZE + pixels + MATCH_RECORD.itemsize * match_set.total_matches


def encode_matchset(match_set: MatchSet) -> bytes:
    """Serialize a match set.

    Args:
        match_set (MatchSet): The match set.

    Returns:
        bytes: The encoded match set.

    Raises:
        ValidationError: If the frame is larger than 65535 pixels in a direction or has more than 255 slots.
    """
    if max(match_set.height, match_set.width) > 0xFFFF or match_set.slots > 0xFF:
        msg = "Match sets with frames above 65535 pixels or more than 255 slots cannot be stored."
        raise ValidationError(msg)
    header = np.array(
        [match_set.source_frame, match_set.target_frame, match_set.height, match_set.width, match_set.slots],
        dtype="<u4",
    )
    chunks = [MATCH_MAGIC, header.tobytes()]
    for y in range(match_set.height):
        for x in range(match_set.width):
            n = int(match_set.counts[y, x])
            chunks.append(bytes((n,)))
            if n:
                records = np.empty(n, dtype=MATCH_RECORD)
                records["x"] = match_set.positions[y, x, :n, 0]
                records["y"] = match_set.positions[y, x, :n, 1]
                records["distance"] = match_set.distances[y, x, :n]
                chunks.append(records.tobytes())
    return b"".join(chunks)


def decode_matchset(data: bytes) -> MatchSet:
    """Deserialize a match set.

    Distances are read back in single precision.

    Args:
        data (bytes): The encoded match set.

    Returns:
        MatchSet: The decoded match set.

    Raises:
        FormatError: If the magic is wrong, a count exceeds the slot number or trailing bytes remain.
        TruncatedPayloadError: If the data ends early.
    """
    if len(data) < MATCH_HEADER_SIZE or data[: len(MATCH_MAGIC)] != MATCH_MAGIC:
        msg = "Data is not an encoded match set."
        raise FormatError(msg)
    t, t_hat, height, width, slots = (int(v) for v in np.frombuffer(data, "<u4", count=5, offset=len(MATCH_MAGIC)))
    positions = np.full((height, width, slots, 2), -1, dtype=np.int64)
    distances = np.full((height, width, slots), np.inf)
    counts = np.zeros((height, width), dtype=np.int64)
    offset = MATCH_HEADER_SIZE
    for y in range(height):
        for x in range(width):
            if offset >= len(data):
                msg = f"Match set data ends at pixel ({x}, {y})."
                raise TruncatedPayloadError(msg)
            n = data[offset]
            offset += 1
            if n > slots:
                msg = f"Pixel ({x}, {y}) declares {n} matches but only {slots} slots exist."
                raise FormatError(msg)
            end = offset + n * MATCH_RECORD.itemsize
            if end > len(data):
                msg = f"Match records of pixel ({x}, {y}) are truncated."
                raise TruncatedPayloadError(msg)
            records = np.frombuffer(data, dtype=MATCH_RECORD, count=n, offset=offset)
            positions[y, x, :n, 0] = records["x"]
            positions[y, x, :n, 1] = records["y"]
            distances[y, x, :n] = records["distance"]
            counts[y, x] = n
            offset = end
    if offset != len(data):
        msg = f"Match set data has {len(data) - offset} unexpected trailing bytes."
        raise FormatError(msg)
    return MatchSet(source_frame=t, target_frame=t_hat, positions=positions, distances=distances, counts=counts)


def save_matchset(match_set: MatchSet, path: Path | str) -> None:
    """Write a match set to a file."""
    Path(path).write_bytes(encode_matchset(match_set))


def load_matchset(path: Path | str) -> MatchSet:
    """Read a match set from a file.

    Raises:
        FormatError: If the file is missing or malformed.
    """
    path = Path(path)
    if not path.is_file():
        msg = f"Match set file '{path}' does not exist."
        raise FormatError(msg)
    return decode_matchset(path.read_bytes())
