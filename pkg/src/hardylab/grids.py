"""Truncated monomial bases for vector-valued Hardy spaces on the polydisc.

Everything downstream works on a finite grid: fix per-variable degree caps
d = (d_1, ..., d_n) and a channel count m, and represent a C^m-valued
analytic function by its Taylor coefficients on the multi-indices k with
0 <= k_i <= d_i.  The monomials e_s z^k form an orthonormal basis of the
truncated space, so operators become plain complex matrices and subspaces
become column spans.

Basis order is graded: multi-indices sort by total degree, ties broken by
the reversed tuple, and the channel index varies fastest.  The order is part
of the file-format contract (coefficient files address entries by
multi-index, reports address basis vectors by flat index) and is pinned by
tests; do not change it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = ["TruncationGrid", "order_key"]


def order_key(k: tuple[int, ...]) -> tuple:
    """Sort key giving the graded basis order of multi-indices."""
    return (sum(k), tuple(reversed(k)))


@dataclass(frozen=True)
class TruncationGrid:
    """Degree-truncated monomial basis of C^m-valued polynomials.

    ``caps[i]`` is the largest allowed exponent of the i-th variable;
    ``channels`` is the dimension m of the coefficient space.  The flat
    basis index of the monomial e_s z^k is ``rank(k) * channels + s``.
    """

    caps: tuple[int, ...]
    channels: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "caps", tuple(int(c) for c in self.caps))
        object.__setattr__(self, "channels", int(self.channels))
        if len(self.caps) == 0:
            raise ValueError("need at least one variable")
        if any(c < 0 for c in self.caps):
            raise ValueError(f"caps must be nonnegative, got {self.caps}")
        if self.channels < 1:
            raise ValueError(f"channels must be >= 1, got {self.channels}")

    @property
    def nvars(self) -> int:
        return len(self.caps)

    @cached_property
    def multi_indices(self) -> tuple[tuple[int, ...], ...]:
        ranges = [range(c + 1) for c in self.caps]
        return tuple(sorted(itertools.product(*ranges), key=order_key))

    @cached_property
    def rank(self) -> dict[tuple[int, ...], int]:
        # inverse of multi_indices
        return {k: r for r, k in enumerate(self.multi_indices)}

    @property
    def dim(self) -> int:
        return len(self.multi_indices) * self.channels

    def with_channels(self, channels: int) -> "TruncationGrid":
        """Same caps, different coefficient-space dimension."""
        return TruncationGrid(self.caps, channels)

    # ---- indexing -------------------------------------------------------

    def flat_index(self, k: tuple[int, ...], s: int = 0) -> int:
        if not 0 <= s < self.channels:
            raise ValueError(f"channel {s} out of range for m={self.channels}")
        try:
            r = self.rank[tuple(k)]
        except KeyError:
            raise ValueError(f"multi-index {tuple(k)} outside caps {self.caps}") from None
        return r * self.channels + s

    def unflatten(self, i: int) -> tuple[tuple[int, ...], int]:
        r, s = divmod(int(i), self.channels)
        return self.multi_indices[r], s

    def basis_vector(self, k: tuple[int, ...], s: int = 0) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.flat_index(k, s)] = 1.0
        return v

    def bumped(self, k: tuple[int, ...], t: int) -> tuple[int, ...] | None:
        """k + e_t, or None if the bump leaves the grid."""
        if k[t] >= self.caps[t]:
            return None
        out = list(k)
        out[t] += 1
        return tuple(out)

    # ---- distinguished index sets ---------------------------------------

    def window_indices(self, margins: tuple[int, ...]) -> np.ndarray:
        """Flat indices of the low-degree window k_i <= d_i - margins[i].

        All channels of a surviving multi-index are kept.  The window is
        where degree-raising truncation damage cannot reach, so two-sided
        compressions to it see the true (untruncated) operator products.
        """
        margins = tuple(int(w) for w in margins)
        if len(margins) != self.nvars:
            raise ValueError("one margin per variable")
        if any(w < 0 for w in margins):
            raise ValueError(f"margins must be nonnegative, got {margins}")
        keep: list[int] = []
        for r, k in enumerate(self.multi_indices):
            if all(k[i] <= self.caps[i] - margins[i] for i in range(self.nvars)):
                keep.extend(range(r * self.channels, (r + 1) * self.channels))
        return np.asarray(keep, dtype=int)

    def top_slice_indices(self, t: int) -> np.ndarray:
        """Flat indices with k_t == caps[t].

        This is the slice annihilated going up: the truncated shift in
        variable t satisfies S_t* S_t = I - E_t with E_t the orthogonal
        projection onto this slice.
        """
        keep: list[int] = []
        for r, k in enumerate(self.multi_indices):
            if k[t] == self.caps[t]:
                keep.extend(range(r * self.channels, (r + 1) * self.channels))
        return np.asarray(keep, dtype=int)
