"""Fourier transforms of indicator functions, line tables and the energy B(E, F)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .field import make_field
from .pointset import PointSet, check_compatible


@dataclass(frozen=True)
class Spectrum:
    """``values[rank(m)]`` = E^(m) = q^-d sum_x E(x) psi(-x.m)."""

    q: int
    d: int
    values: np.ndarray

    def __getitem__(self, m) -> complex:
        return complex(self.values[geo.rank(m, self.q)])

    @property
    def power(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def _as_grid(values: np.ndarray, q: int, d: int) -> np.ndarray:
    # Fortran order makes grid[x_0, ..., x_{d-1}] sit at rank sum x_i q^i.
    return values.reshape((q,) * d, order="F")


def dft(E: PointSet) -> Spectrum:
    """Separable transform: one length-q character sum along each axis."""
    q, d = E.q, E.d
    f = make_field(q)
    u = np.arange(q)
    kernel = f.roots[(-np.outer(u, u)) % q]
    grid = _as_grid(E.members.astype(np.complex128), q, d)
    for axis in range(d):
        grid = np.moveaxis(np.tensordot(kernel, grid, axes=([1], [axis])), 0, axis)
    values = grid.reshape(-1, order="F") / float(q**d)
    values.setflags(write=False)
    return Spectrum(q, d, values)


def naive_dft(E: PointSet) -> Spectrum:
    """Direct double sum over (m, x); O(q^d |E|).  Reference for ``dft``."""
    q, d = E.q, E.d
    f = make_field(q)
    pts = geo.all_points(q, d)
    phases = (-(pts @ E.points().T)) % q
    values = f.roots[phases].sum(axis=1) / float(q**d)
    return Spectrum(q, d, values)


def plancherel_defect(S: Spectrum, size: int) -> float:
    return abs(float(S.power.sum()) - size / S.q**S.d)


def salem_constant(E: PointSet, spectrum: Spectrum | None = None) -> float:
    """max over m != 0 of |E^(m)| q^d / sqrt(|E|)."""
    if E.size == 0:
        raise ValueError("Salem constant of the empty set is undefined")
    S = dft(E) if spectrum is None else spectrum
    if len(S.values) == 1:
        return 0.0
    return float(np.abs(S.values[1:]).max()) * E.q**E.d / np.sqrt(E.size)


@dataclass(frozen=True)
class LineTable:
    """|E cap l_x| for every line through the origin.

    ``reps[i]`` is the rank of the canonical representative of line ``i`` and
    ``counts[i]`` the number of points of E on it (origin excluded).
    """

    q: int
    d: int
    reps: np.ndarray
    counts: np.ndarray

    @property
    def max_count(self) -> int:
        return int(self.counts.max()) if len(self.counts) else 0

    @property
    def lines_hit(self) -> int:
        return int(np.count_nonzero(self.counts))

    def count(self, x) -> int:
        r = geo.rank(geo.line_rep(x, self.q), self.q)
        return int(self.counts[np.searchsorted(self.reps, r)])

    def as_dict(self) -> dict[geo.Vector, int]:
        return {geo.unrank(int(r), self.q, self.d): int(c) for r, c in zip(self.reps, self.counts)}


def line_table(E: PointSet) -> LineTable:
    reps, line_of = geo.line_index(E.q, E.d)
    idx = line_of[E.ranks()]
    counts = np.bincount(idx[idx >= 0], minlength=len(reps))
    counts.setflags(write=False)
    return LineTable(E.q, E.d, reps, counts)


def line_power(S: Spectrum) -> np.ndarray:
    """sum of |F^(x)|^2 over the punctured line, for every line."""
    reps, line_of = geo.line_index(S.q, S.d)
    return np.bincount(line_of[1:], weights=S.power[1:], minlength=len(reps))


def energy_B(
    E: PointSet,
    F: PointSet,
    spectrum_F: Spectrum | None = None,
    table_E: LineTable | None = None,
) -> float:
    """B(E, F) = sum_{x != 0} |E cap l_x| |F^(x)|^2, accumulated line by line.

    Every x on a line L sees the same count |E cap L|, so the sum collapses to
    sum_L |E cap L| * sum_{x in L} |F^(x)|^2.
    """
    check_compatible(E, F)
    table = line_table(E) if table_E is None else table_E
    S = dft(F) if spectrum_F is None else spectrum_F
    return float(np.dot(table.counts, line_power(S)))
