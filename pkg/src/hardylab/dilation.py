"""Commuting contraction tuples and their canonical shift dilations.

A tuple whose alternating defect sum is PSD and whose entries are pure
embeds isometrically into a truncated vector-valued Hardy grid: the row of
the embedding at multi-index k is D T*^k, with D the positive square root
of the defect sum.  On a finite grid the construction is exact for
nilpotent tuples once the caps reach the nilpotency indices, and that
exactness is verified, not assumed: the isometry and intertwining residuals
are computed and reported every time.

The same circle of ideas runs backwards: compressing the coordinate shifts
to the quotient of an inner-symbol submodule yields a tuple whose defect
products vanish, and a tuple with vanishing defect products is (up to
unitary equivalence) of that form.  model_correspondence checks whichever
direction matches its input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .criteria import (
    CriterionReport,
    beurling_criterion,
    psd_sqrt,
    quotient_data,
)
from .grids import TruncationGrid
from .operators import eval_margins, shift_matrices, spectral_norm
from .subspaces import RANK_TOL, submodule_projection
from .symbols import AnalyticSymbol

__all__ = [
    "ContractionTuple",
    "PurenessReport",
    "DilationData",
    "DilationError",
    "brehmer_defect",
    "pureness_check",
    "canonical_dilation",
    "model_correspondence",
    "random_brehmer_pair",
    "parse_tuple_text",
    "dump_tuple_text",
]

NORM_SLACK = 1e-10
COMMUTATION_TOL = 1e-10


class DilationError(ValueError):
    """A dilation precondition failed (defect, pureness, or grid size)."""


@dataclass(frozen=True)
class ContractionTuple:
    """Commuting square contractions on a common finite-dimensional space."""

    matrices: tuple

    def __post_init__(self):
        mats = tuple(np.asarray(m, dtype=complex) for m in self.matrices)
        if not mats:
            raise ValueError("need at least one matrix")
        d = mats[0].shape[0]
        for m in mats:
            if m.ndim != 2 or m.shape != (d, d):
                raise ValueError("all matrices must be square and of equal size")
        object.__setattr__(self, "matrices", mats)

    @classmethod
    def checked(cls, matrices, norm_slack: float = NORM_SLACK,
                commutation_tol: float = COMMUTATION_TOL) -> "ContractionTuple":
        t = cls(tuple(matrices))
        for i, m in enumerate(t.matrices):
            nm = spectral_norm(m)
            if nm > 1 + norm_slack:
                raise ValueError(f"matrix {i} has norm {nm:.6f} > 1")
        for i in range(t.n):
            for j in range(i + 1, t.n):
                a, b = t.matrices[i], t.matrices[j]
                dev = spectral_norm(a @ b - b @ a)
                if dev > commutation_tol:
                    raise ValueError(
                        f"matrices {i} and {j} do not commute: deviation {dev:.3e}"
                    )
        return t

    @property
    def n(self) -> int:
        return len(self.matrices)

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    def subset_product(self, subset) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for i in subset:
            out = out @ self.matrices[i]
        return out

    def power(self, k) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for m, p in zip(self.matrices, k):
            for _ in range(int(p)):
                out = out @ m
        return out


def brehmer_defect(t: ContractionTuple, eig_tol: float = 1e-10,
                   rank_tol: float = RANK_TOL):
    """Alternating defect sum, its PSD verdict, and a defect-space basis.

    defect = sum over subsets F of (-1)^|F| T_F T_F*.  The returned basis
    spans the range of the clamped square root.
    """
    dim = t.dim
    defect = np.zeros((dim, dim), dtype=complex)
    for r in range(t.n + 1):
        for subset in itertools.combinations(range(t.n), r):
            tf = t.subset_product(subset)
            defect += (-1) ** r * tf @ tf.conj().T
    defect = (defect + defect.conj().T) / 2
    w, v = np.linalg.eigh(defect)
    psd = bool(w[0] >= -eig_tol)
    top = float(w[-1]) if w.size else 0.0
    keep = w > max(rank_tol * max(top, 0.0), 0.0)
    basis = v[:, keep]
    return defect, psd, basis


@dataclass(frozen=True)
class PurenessReport:
    verdict: bool
    rule: str      # "nilpotent", "spectral_radius", "power_norm", or "none"
    value: float   # the quantity the rule examined


def pureness_check(t_i: np.ndarray, max_power: int = 64,
                   tol: float = 1e-10) -> PurenessReport:
    """Decide whether adjoint powers of one contraction tend to zero.

    Finite dimensions make this exact: nilpotency or spectral radius below
    one each settle it, with an explicit power-norm fallback for matrices
    whose radius sits inside the tolerance band.
    """
    m = np.asarray(t_i, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("pureness_check needs a square matrix")
    power = np.linalg.matrix_power(m, m.shape[0])
    if spectral_norm(power) == 0.0:
        return PurenessReport(True, "nilpotent", 0.0)
    radius = float(np.abs(np.linalg.eigvals(m)).max())
    if radius < 1 - tol:
        return PurenessReport(True, "spectral_radius", radius)
    tail = spectral_norm(np.linalg.matrix_power(m.conj().T, max_power))
    return PurenessReport(tail <= tol, "power_norm", tail)


@dataclass(frozen=True)
class DilationData:
    grid: TruncationGrid
    defect_sq: np.ndarray
    defect_space_basis: np.ndarray
    pi: np.ndarray
    isometry_residual: float
    intertwining_residuals: tuple
    tail_mass: float

    @property
    def intertwining_residual(self) -> float:
        return max(self.intertwining_residuals)


def canonical_dilation(t: ContractionTuple, caps, tail_tol: float = 1e-8,
                       eig_tol: float = 1e-10, max_power: int = 64) -> DilationData:
    """Assemble the row map Pi with rows D T*^k on the truncated grid.

    Preconditions (PSD defect, pure entries) are enforced.  The truncation
    is certified by the mass of the first multi-index shell beyond the
    caps: those are the rows the grid drops, identically zero for nilpotent
    tuples once the caps reach the nilpotency indices.
    """
    caps = tuple(int(c) for c in caps)
    if len(caps) != t.n:
        raise ValueError(f"need {t.n} caps, got {len(caps)}")
    defect, psd, basis = brehmer_defect(t, eig_tol=eig_tol)
    if not psd:
        w = np.linalg.eigvalsh(defect)
        raise DilationError(f"defect sum is not PSD: min eigenvalue {w[0]:.3e}")
    for i, m in enumerate(t.matrices):
        rep = pureness_check(m, max_power=max_power)
        if not rep.verdict:
            raise DilationError(
                f"matrix {i} is not pure ({rep.rule} = {rep.value:.3e})"
            )
    r = basis.shape[1]
    if r == 0:
        raise DilationError("defect space is trivial; nothing to dilate into")
    grid = TruncationGrid(caps, channels=r)
    d_root = psd_sqrt(defect)
    rows_in_defect = basis.conj().T @ d_root   # r x dim, rows in defect coordinates

    # adjoint powers T*^k, filled along the graded order via one-step parents
    adj = [m.conj().T for m in t.matrices]
    powers = {}
    for k in grid.multi_indices:
        if sum(k) == 0:
            powers[k] = np.eye(t.dim, dtype=complex)
            continue
        i = next(idx for idx, ki in enumerate(k) if ki > 0)
        parent = tuple(ki - (1 if idx == i else 0) for idx, ki in enumerate(k))
        powers[k] = adj[i] @ powers[parent]

    pi = np.zeros((grid.dim, t.dim), dtype=complex)
    for k in grid.multi_indices:
        block = rows_in_defect @ powers[k]
        for s in range(r):
            pi[grid.flat_index(k, s)] = block[s]

    tail = 0.0
    for i in range(t.n):
        step = adj[i]
        for k in grid.multi_indices:
            if k[i] == caps[i]:
                dropped = rows_in_defect @ step @ powers[k]
                tail += float(np.sum(np.abs(dropped) ** 2))
    if tail > tail_tol:
        raise DilationError(
            f"grid too small: dropped-shell mass {tail:.3e} exceeds {tail_tol:g}; "
            "raise the caps"
        )

    iso = spectral_norm(pi.conj().T @ pi - np.eye(t.dim))
    shifts = shift_matrices(grid)
    inter = tuple(
        spectral_norm(pi @ adj[i] - shifts[i].conj().T @ pi)
        for i in range(t.n)
    )
    return DilationData(
        grid=grid,
        defect_sq=defect,
        defect_space_basis=basis,
        pi=pi,
        isometry_residual=iso,
        intertwining_residuals=inter,
        tail_mass=tail,
    )


def _annihilation_full(t: ContractionTuple) -> float:
    eye = np.eye(t.dim)
    worst = 0.0
    for i in range(t.n):
        for j in range(t.n):
            if i == j:
                continue
            di = eye - t.matrices[i].conj().T @ t.matrices[i]
            dj = eye - t.matrices[j].conj().T @ t.matrices[j]
            worst = max(worst, spectral_norm(di @ dj))
    return worst


def model_correspondence(source, caps=None, tol: float = 1e-8,
                         margins=None, max_power: int = 64) -> CriterionReport:
    """Both directions of the quotient-module model for contraction tuples.

    Symbol input: compress the shifts to the quotient of the symbol's
    submodule and verify the extracted tuple satisfies everything the model
    promises (PSD defect, pure entries, vanishing defect products measured
    through the core window).  Tuple input: report whether the defect
    products vanish, which is the computable face of being unitarily
    equivalent to module operators on such a quotient.
    """
    residuals: dict = {}
    verdicts: dict = {}
    if isinstance(source, AnalyticSymbol):
        if caps is None:
            raise ValueError("symbol input needs grid caps")
        grid = TruncationGrid(tuple(caps))
        s = submodule_projection(source, grid)
        data = quotient_data(s, margins=eval_margins(source) if margins is None else margins)
        worst = beurling_criterion(data, tol=tol).residuals["beurling_defect_product"]
        residuals["annihilation"] = worst
        verdicts["annihilation"] = worst <= tol
        extracted = ContractionTuple(data.compressions.operators)
        name = "model_correspondence_symbol"
    else:
        extracted = source if isinstance(source, ContractionTuple) else \
            ContractionTuple.checked(source)
        worst = _annihilation_full(extracted)
        residuals["annihilation"] = worst
        verdicts["annihilation"] = worst <= tol
        name = "model_correspondence_tuple"

    defect, psd, _ = brehmer_defect(extracted)
    min_eig = float(np.linalg.eigvalsh(defect)[0]) if defect.size else 0.0
    residuals["brehmer_min_eig"] = min_eig
    verdicts["brehmer_min_eig"] = min_eig >= -tol
    for i, m in enumerate(extracted.matrices):
        rep = pureness_check(m, max_power=max_power)
        key = f"pureness_{i}"
        residuals[key] = rep.value
        verdicts[key] = rep.verdict
    return CriterionReport(name=name, tolerance=tol, residuals=residuals,
                           verdicts=verdicts)


def random_brehmer_pair(seed, size: int = 4, max_tries: int = 64) -> ContractionTuple:
    """Seeded commuting nilpotent pair with PSD defect sum.

    Both entries are strictly upper-triangular polynomials in one Jordan
    block, so they commute exactly and are nilpotent; the pair is shrunk
    geometrically until the alternating defect sum is PSD.
    """
    rng = np.random.default_rng(seed)
    nil = np.zeros((size, size), dtype=complex)
    for i in range(size - 1):
        nil[i, i + 1] = 1.0
    def poly():
        coeffs = rng.normal(size=size - 1) + 1j * rng.normal(size=size - 1)
        m = np.zeros_like(nil)
        p = np.eye(size, dtype=complex)
        for c in coeffs:
            p = p @ nil
            m = m + c * p
        return m
    a, b = poly(), poly()
    scale = 0.9 / max(spectral_norm(a), spectral_norm(b), 1e-12)
    a, b = a * scale, b * scale
    for _ in range(max_tries):
        t = ContractionTuple.checked((a, b))
        _, psd, _ = brehmer_defect(t)
        if psd:
            return t
        a, b = 0.8 * a, 0.8 * b
    raise DilationError("could not reach a PSD defect sum by shrinking")


# ---- tuple file format ----------------------------------------------------

def parse_tuple_text(text: str) -> ContractionTuple:
    """Labeled block format: 'dim d' and 'count n' headers, then for each
    matrix a 'matrix i' label followed by d rows of d re/im pairs."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 2:
        raise ValueError("tuple text needs 'dim' and 'count' headers")
    def header(line, word):
        parts = line.split()
        if len(parts) != 2 or parts[0] != word:
            raise ValueError(f"expected '{word} <integer>', got {line!r}")
        return int(parts[1])
    dim = header(lines[0], "dim")
    count = header(lines[1], "count")
    if dim < 1 or count < 1:
        raise ValueError("dim and count must be positive")
    pos = 2
    mats = []
    for mi in range(count):
        if pos >= len(lines) or lines[pos].split() != ["matrix", str(mi)]:
            raise ValueError(f"expected 'matrix {mi}' label at line {pos + 1}")
        pos += 1
        rows = []
        for ri in range(dim):
            if pos >= len(lines):
                raise ValueError(f"matrix {mi} row {ri}: unexpected end of text")
            fields = lines[pos].replace(",", " ").split()
            if len(fields) != 2 * dim:
                raise ValueError(
                    f"matrix {mi} row {ri}: want {2 * dim} floats, got {len(fields)}"
                )
            vals = np.array([float(x) for x in fields])
            rows.append(vals[0::2] + 1j * vals[1::2])
            pos += 1
        mats.append(np.stack(rows))
    if pos != len(lines):
        raise ValueError("trailing content after the last matrix block")
    return ContractionTuple.checked(mats)


def dump_tuple_text(t: ContractionTuple) -> str:
    out = [f"dim {t.dim}", f"count {t.n}"]
    for mi, m in enumerate(t.matrices):
        out.append(f"matrix {mi}")
        for row in m:
            out.append(" ".join(f"{float(v.real)!r} {float(v.imag)!r}" for v in row))
    return "\n".join(out) + "\n"
