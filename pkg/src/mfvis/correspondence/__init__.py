# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""One-to-K temporal patch matching, frame connection schemes and correspondence accuracy."""

from __future__ import annotations

from .accuracy import correspondence_accuracy, pair_accuracy
from .bruteforce import find_matches_bruteforce
from .config import ConnectionScheme, PatchConfig, PatchMetric
from .connections import build_tube_connections
from .matching import MatchPairs, MatchSet, compute_match_sets, find_matches, search_offsets
from .overlay import render_correspondence_overlay
from .patches import PatchDistance, extract_patch, patch_distance
from .storage import decode_matchset, encode_matchset, load_matchset, matchset_nbytes, save_matchset

__all__ = [
    "ConnectionScheme",
    "MatchPairs",
    "MatchSet",
    "PatchConfig",
    "PatchDistance",
    "PatchMetric",
    "build_tube_connections",
    "compute_match_sets",
    "correspondence_accuracy",
    "decode_matchset",
    "encode_matchset",
    "extract_patch",
    "find_matches",
    "find_matches_bruteforce",
    "load_matchset",
    "matchset_nbytes",
    "pair_accuracy",
    "patch_distance",
    "render_correspondence_overlay",
    "save_matchset",
    "search_offsets",
]
