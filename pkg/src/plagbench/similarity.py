"""Shared result type for the two detectors."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Detector(enum.Enum):
    ABA = "ABA"  # attribute-based: cosine over token-frequency vectors
    SBA = "SBA"  # structure-based: greedy string tiling over token order


@dataclass(frozen=True)
class SimilarityDegree:
    value: float
    detector: Detector

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"similarity degree out of range: {self.value}")
