"""Gap intervals for the dimensions of proper monomial maps between balls."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class GapIntervals:
    n: int
    K: int
    intervals: tuple[tuple[int, ...], ...]  # members of I_1, ..., I_K

    def bounds(self) -> list[list[int]]:
        """[min, max] of each interval; [] for an empty one."""
        return [[I[0], I[-1]] if I else [] for I in self.intervals]

    def to_json(self) -> dict:
        return {"n": self.n, "K": self.K, "I": self.bounds()}


def gap_intervals(n: int) -> GapIntervals:
    """K(n) = max{k : k(k+1)/2 < n} and I_k = {m : kn < m < (k+1)n - k(k+1)/2}."""
    if n <= 2:
        raise ValueError(f"gap intervals are defined for n > 2, got n = {n}")
    K = 0
    while (K + 1) * (K + 2) // 2 < n:
        K += 1
    out = []
    for k in range(1, K + 1):
        hi = (k + 1) * n - k * (k + 1) // 2
        out.append(tuple(range(k * n + 1, hi)))
    return GapIntervals(n, K, tuple(out))
