"""Exact dot product and distance sets, the counting function nu, and the
two lower bounds for |Pi(E, F)| (Cauchy-Schwarz and Fourier-energy forms)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import geometry as geo
from .pointset import PointSet, check_compatible
from .spectral import LineTable, Spectrum, dft, energy_B, line_table

# Pair enumeration is chunked over E to cap the temporary |chunk| x |F| array.
_PAIR_BUDGET = 1 << 22


def _require_nonempty(*sets: PointSet) -> None:
    for S in sets:
        if S.size == 0:
            raise ValueError("empty point set")


def _chunks(n_rows: int, width: int):
    step = max(1, _PAIR_BUDGET // max(1, width))
    for start in range(0, n_rows, step):
        yield slice(start, min(n_rows, start + step))


def _dot_values(E: PointSet, F: PointSet):
    # d (q-1)^2 is far below 2^53, so the float product (BLAS) is exact.
    q = E.q
    A = E.points().astype(np.float64)
    B = F.points().astype(np.float64)
    for sl in _chunks(len(A), len(B)):
        yield (A[sl] @ B.T).astype(np.int64) % q


@dataclass(frozen=True)
class NuHistogram:
    """counts[t] = nu(t) = #{(x, y) in E x F : x.y = t}."""

    counts: np.ndarray

    @property
    def second_moment(self) -> int:
        return int(sum(int(c) * int(c) for c in self.counts))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def support(self) -> set[int]:
        return {int(t) for t in np.flatnonzero(self.counts)}


def nu_histogram(E: PointSet, F: PointSet) -> NuHistogram:
    check_compatible(E, F)
    counts = np.zeros(E.q, dtype=np.int64)
    for block in _dot_values(E, F):
        counts += np.bincount(block.ravel(), minlength=E.q)
    return NuHistogram(counts)


def dot_product_set(E: PointSet, F: PointSet) -> set[int]:
    check_compatible(E, F)
    _require_nonempty(E, F)
    return nu_histogram(E, F).support


def pinned_product_set(x: Sequence[int], E: PointSet) -> set[int]:
    """Pi(x, E) = {x.y : y in E}."""
    _require_nonempty(E)
    if len(x) != E.d:
        raise ValueError(f"dimension mismatch: {len(x)} != {E.d}")
    vals = (E.points() @ np.asarray(x, dtype=np.int64)) % E.q
    return {int(t) for t in np.unique(vals)}


def pinned_sizes(E: PointSet, F: PointSet | None = None) -> np.ndarray:
    """|Pi(x, F)| for each x in E (rank order); F defaults to E."""
    F = E if F is None else F
    check_compatible(E, F)
    _require_nonempty(E, F)
    q = E.q
    out = []
    for block in _dot_values(E, F):
        hit = np.zeros((block.shape[0], q), dtype=bool)
        hit[np.arange(block.shape[0])[:, None], block] = True
        out.append(hit.sum(axis=1))
    return np.concatenate(out)


def distance_set(E: PointSet, F: PointSet) -> set[int]:
    """D(E, F) = {||x - y|| : x in E, y in F}, from coordinate differences."""
    check_compatible(E, F)
    _require_nonempty(E, F)
    q = E.q
    A, B = E.points(), F.points()
    seen = np.zeros(q, dtype=bool)
    for sl in _chunks(len(A), len(B) * E.d):
        diff = A[sl, None, :] - B[None, :, :]
        seen[np.unique((diff * diff).sum(axis=2) % q)] = True
    return {int(t) for t in np.flatnonzero(seen)}


@dataclass(frozen=True)
class BoundReport:
    """Lower bounds for |Pi(E, F)|.

    ``cs_num / cs_den`` is the Cauchy-Schwarz bound |E|^2|F|^2 / sum nu^2,
    kept as exact integers.  ``fourier_bound`` replaces sum nu^2 by its
    upper estimate |E|^2|F|^2/q + q^(2d-1)|E| B(E, F); it is only a valid
    bound when the origin is not in E.
    """

    cs_num: int
    cs_den: int
    fourier_bound: float
    valid_fourier: bool
    energy: float

    @property
    def cs_bound(self) -> Fraction:
        return Fraction(self.cs_num, self.cs_den)

    def cs_holds(self, pi_size: int) -> bool:
        return self.cs_num <= pi_size * self.cs_den


def fourier_bound_value(q: int, d: int, e_size: int, f_size: int, energy: float) -> float:
    mass = float(e_size) ** 2 * float(f_size) ** 2
    return mass / (mass / q + float(q) ** (2 * d - 1) * e_size * energy)


def bounds(
    E: PointSet,
    F: PointSet,
    nu: NuHistogram | None = None,
    spectrum_F: Spectrum | None = None,
    table_E: LineTable | None = None,
) -> BoundReport:
    check_compatible(E, F)
    _require_nonempty(E, F)
    nu = nu_histogram(E, F) if nu is None else nu
    energy = energy_B(E, F, spectrum_F=spectrum_F, table_E=table_E)
    return BoundReport(
        cs_num=E.size**2 * F.size**2,
        cs_den=nu.second_moment,
        fourier_bound=fourier_bound_value(E.q, E.d, E.size, F.size, energy),
        valid_fourier=not E.has_origin,
        energy=energy,
    )


def second_moment_rhs(E: PointSet, F: PointSet, energy: float) -> float:
    """|E|^2|F|^2/q + q^(2d-1)|E| B(E, F): the upper estimate for sum nu^2."""
    q, d = E.q, E.d
    return float(E.size) ** 2 * float(F.size) ** 2 / q + float(q) ** (2 * d - 1) * E.size * energy


def extract_E0(E: PointSet) -> PointSet:
    """One point of E per line through the origin that E meets.

    The smallest-rank point on each line is kept, so the result is
    deterministic and |E0| equals the number of lines hit.
    """
    ranks = E.ranks()
    ranks = ranks[ranks != 0]
    if len(ranks) == 0:
        raise ValueError("E has no point other than the origin")
    _, line_of = geo.line_index(E.q, E.d)
    _, first = np.unique(line_of[ranks], return_index=True)
    return PointSet.from_ranks(E.q, E.d, ranks[first])
