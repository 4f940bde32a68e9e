from dataclasses import dataclass
from typing import Optional


@dataclass
class TreeConfig:
    delta: int = 4
    profile: str = "wide"  # "wide" or "packed"
    w_max: Optional[int] = None  # vertex weight cap; 2**20 wide, 63 packed
    safe_words: int = 128

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError("delta must be at least 1")
        if self.profile not in ("wide", "packed"):
            raise ValueError(f"unknown profile {self.profile!r}")
        if self.w_max is None:
            self.w_max = 63 if self.profile == "packed" else 1 << 20
        if self.profile == "packed":
            if self.w_max > 63:
                raise ValueError("packed profile stores 6-bit weights (w_max <= 63)")
            if 2 * self.delta > 255:
                raise ValueError("packed profile stores 8-bit annotation distances (delta <= 127)")
