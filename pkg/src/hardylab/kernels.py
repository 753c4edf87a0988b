"""Reproducing kernels of the polydisc and one instructive rational symbol.

The Szego kernel of the polydisc reproduces point evaluation on the Hardy
grid; dropping its constant term gives the kernel of the subspace of
functions vanishing at the origin.  On the bidisc that reduced kernel
factors through the Szego kernel as

    S(z, w) - 1 = (z1 (1 - z2 conj(w2)) conj(w1) + z2 conj(w2)) * S(z, w)

and the scalar factor in front, taken as a kernel in its own right, fails
to be positive definite.  A seeded search produces a small Gram-matrix
certificate of that failure.

The rational symbol phi = (2 z1 z2 - z1 - z2) / (2 - z1 - z2) is inner on
the bidisc and vanishes at the origin, so its submodule sits strictly
between the vanishing-at-origin subspace and the whole grid; the quotient
by the vanishing-at-origin subspace fails the defect-product test with
residual exactly one.  reduced_kernel_suite packages all of those checks
into one report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .criteria import beurling_criterion, quotient_data
from .grids import TruncationGrid
from .operators import innerness_check, spectral_norm
from .subspaces import subspace_from_columns, submodule_projection
from .symbols import AnalyticSymbol

__all__ = [
    "szego_kernel",
    "reduced_szego_kernel",
    "kernel_factor",
    "kernel_sum_oracle",
    "gram_matrix",
    "GramWitness",
    "gram_negativity_search",
    "rational_inner_witness",
    "reduced_kernel_suite",
]


def _check_interior(z, label: str):
    z = tuple(complex(v) for v in z)
    for i, v in enumerate(z):
        if abs(v) >= 1:
            raise ValueError(f"{label}[{i}] = {v} is not inside the open polydisc")
    return z


def szego_kernel(z, w) -> complex:
    """prod_i 1 / (1 - z_i conj(w_i)) for points of the open polydisc."""
    z = _check_interior(z, "z")
    w = _check_interior(w, "w")
    if len(z) != len(w):
        raise ValueError("points must have the same number of coordinates")
    out = 1.0 + 0j
    for zi, wi in zip(z, w):
        out /= 1 - zi * np.conj(wi)
    return complex(out)


def kernel_factor(z, w) -> complex:
    """The bidisc factor z1 (1 - z2 conj(w2)) conj(w1) + z2 conj(w2)."""
    z = _check_interior(z, "z")
    w = _check_interior(w, "w")
    if len(z) != 2 or len(w) != 2:
        raise ValueError("the factored form is specific to two variables")
    w1, w2 = np.conj(w[0]), np.conj(w[1])
    return complex(z[0] * (1 - z[1] * w2) * w1 + z[1] * w2)


def reduced_szego_kernel(z, w) -> complex:
    """Kernel of the functions vanishing at the origin, in factored form."""
    return complex(kernel_factor(z, w) * szego_kernel(z, w))


def kernel_sum_oracle(z, w, caps) -> complex:
    """Direct basis sum over all nonzero multi-indices within the caps."""
    z = _check_interior(z, "z")
    w = _check_interior(w, "w")
    grid = TruncationGrid(tuple(caps))
    out = 0.0 + 0j
    for k in grid.multi_indices:
        if sum(k) == 0:
            continue
        term = 1.0 + 0j
        for zi, wi, ki in zip(z, w, k):
            term *= zi ** ki * np.conj(wi) ** ki
        out += term
    return complex(out)


def gram_matrix(points) -> np.ndarray:
    """Hermitian Gram matrix of the bidisc factor over a finite point set."""
    pts = [_check_interior(p, f"points[{i}]") for i, p in enumerate(points)]
    n = len(pts)
    g = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            g[a, b] = kernel_factor(pts[a], pts[b])
    return (g + g.conj().T) / 2


@dataclass(frozen=True)
class GramWitness:
    found: bool
    min_eigenvalue: float
    points: tuple            # the point set attaining the minimum
    matrix: np.ndarray
    candidates: int


def gram_negativity_search(budget: int = 64, seed: int = 0,
                           radius: float = 0.9, sizes=(2, 3, 4),
                           threshold: float = -1e-6) -> GramWitness:
    """Seeded search for a Gram matrix of the factor with a negative eigenvalue.

    Every candidate draws its own generator from (seed, index), so the
    result is independent of how a batch runner partitions the budget.  All
    candidates are evaluated and the best witness is returned; not finding
    one within the budget is reported as found=False, never as a verdict
    that the kernel is positive.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    best = (np.inf, None, None)
    for idx in range(int(budget)):
        rng = np.random.default_rng([int(seed), idx])
        size = int(rng.choice(np.asarray(sizes)))
        rad = radius * np.sqrt(rng.uniform(size=(size, 2)))
        ang = rng.uniform(0.0, 2 * np.pi, size=(size, 2))
        pts = tuple(tuple(rad[i] * np.exp(1j * ang[i])) for i in range(size))
        g = gram_matrix(pts)
        low = float(np.linalg.eigvalsh(g)[0])
        if low < best[0]:
            best = (low, pts, g)
    low, pts, g = best
    return GramWitness(
        found=bool(low < threshold),
        min_eigenvalue=low,
        points=pts,
        matrix=g,
        candidates=int(budget),
    )


def rational_inner_witness() -> AnalyticSymbol:
    """(2 z1 z2 - z1 - z2) / (2 - z1 - z2): inner, vanishing at the origin."""
    one = np.array([[1.0 + 0j]])
    numerator = {(1, 1): 2 * one, (1, 0): -one, (0, 1): -one}
    denominator = {(0, 0): 2.0, (1, 0): -1.0, (0, 1): -1.0}
    return AnalyticSymbol.rational(numerator, denominator, nvars=2)


def _origin_complement(grid: TruncationGrid):
    cols = np.eye(grid.dim, dtype=complex)[:, 1:]
    s, _ = subspace_from_columns(grid, cols)
    return s


def reduced_kernel_suite(caps=(20, 20), pairs: int = 20, seed: int = 0,
                         pair_radius: float = 0.6, budget: int = 64,
                         torus_samples: int = 64, kernel_tol: float = 1e-8,
                         inner_tol: float = 1e-10, criterion_tol: float = 1e-8,
                         inclusion_caps=(6, 6), sample_pairs=None) -> dict:
    """Kernel identity, Gram negativity, and the inner-witness checks.

    sample_pairs, when given, is an iterable of (z, w) interior point pairs
    that replaces the seeded draw.  Returns a JSON-ready report: every leaf
    is a float, int, bool, string, or a list of those, so the serialized
    form is stable across runs.
    """
    caps = tuple(int(c) for c in caps)
    if sample_pairs is None:
        rng = np.random.default_rng(int(seed))
        sample_pairs = []
        for _ in range(int(pairs)):
            rad = pair_radius * np.sqrt(rng.uniform(size=(2, 2)))
            ang = rng.uniform(0.0, 2 * np.pi, size=(2, 2))
            sample_pairs.append((tuple(rad[0] * np.exp(1j * ang[0])),
                                 tuple(rad[1] * np.exp(1j * ang[1]))))
    else:
        sample_pairs = list(sample_pairs)

    worst_dev = 0.0
    for z, w in sample_pairs:
        dev = abs(reduced_szego_kernel(z, w) - kernel_sum_oracle(z, w, caps))
        worst_dev = max(worst_dev, dev)

    witness = gram_negativity_search(budget=budget, seed=seed)

    phi = rational_inner_witness()
    at_zero = abs(complex(phi.evaluate([(0.0, 0.0)])[0, 0, 0]))
    origin_coeff = phi.numerator.get((0, 0))
    numerator_origin = 0.0 if origin_coeff is None else float(np.abs(origin_coeff).max())
    inner = innerness_check(phi, TruncationGrid(caps), torus_samples=torus_samples,
                            tol=inner_tol)

    small = TruncationGrid(tuple(int(c) for c in inclusion_caps))
    s_phi = submodule_projection(phi, small, inner_tol=criterion_tol)
    s_origin = _origin_complement(small)
    inclusion_residual = spectral_norm(
        (np.eye(small.dim) - s_origin.projection) @ s_phi.basis
    )
    ranks = (s_phi.rank, s_origin.rank, small.dim)
    strict = ranks[0] < ranks[1] < ranks[2] and inclusion_residual <= criterion_tol

    data = quotient_data(s_origin, margins=(1, 1))
    beurling = beurling_criterion(data, tol=criterion_tol)
    constants_residual = beurling.residuals["beurling_defect_product"]

    verdicts = {
        "kernel_identity": bool(worst_dev <= kernel_tol),
        "gram_negative": bool(witness.found),
        "witness_vanishes_at_origin": bool(at_zero == 0.0 and numerator_origin == 0.0),
        "witness_inner": bool(inner.verdict),
        "strict_inclusions": bool(strict),
        "constants_quotient_fails": bool(not beurling.verdict),
    }
    return {
        "kernel": {
            "max_deviation": float(worst_dev),
            "pairs": len(sample_pairs),
            "caps": list(caps),
            "pair_radius": float(pair_radius),
        },
        "gram": {
            "found": bool(witness.found),
            "min_eigenvalue": float(witness.min_eigenvalue),
            "points": [[[float(p.real), float(p.imag)] for p in pt]
                       for pt in witness.points],
            "matrix": [[[float(v.real), float(v.imag)] for v in row]
                       for row in witness.matrix],
            "candidates": int(witness.candidates),
            "inconclusive": bool(not witness.found),
        },
        "witness_symbol": {
            "at_origin": float(at_zero),
            "numerator_origin_coefficient": float(numerator_origin),
            "torus_deviation": float(inner.torus_deviation),
            "torus_samples": int(torus_samples),
        },
        "inclusions": {
            "rank_symbol_submodule": int(ranks[0]),
            "rank_vanishing_at_origin": int(ranks[1]),
            "rank_full": int(ranks[2]),
            "inclusion_residual": float(inclusion_residual),
            "caps": list(small.caps),
        },
        "constants_quotient": {
            "beurling_residual": float(constants_residual),
        },
        "verdicts": verdicts,
    }
