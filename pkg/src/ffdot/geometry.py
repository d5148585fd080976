"""Vectors of F_q^d, lines through the origin, and diagonal quadratic varieties.

Vectors are plain tuples of ints in ``[0, q)``.  A vector is identified with
its rank ``sum(x[i] * q**i)``, so coordinate 0 is the least significant digit.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .field import inv, make_field

Vector = tuple[int, ...]


def _check_same_dim(x: Sequence[int], y: Sequence[int]) -> None:
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} != {len(y)}")


def rank(v: Sequence[int], q: int) -> int:
    r = 0
    for c in reversed(v):
        if not 0 <= c < q:
            raise ValueError(f"coordinate {c} outside [0, {q})")
        r = r * q + int(c)
    return r


def unrank(r: int, q: int, d: int) -> Vector:
    if not 0 <= r < q**d:
        raise ValueError(f"rank {r} outside [0, {q}**{d})")
    out = []
    for _ in range(d):
        r, c = divmod(r, q)
        out.append(c)
    return tuple(out)


def powers(q: int, d: int) -> np.ndarray:
    return q ** np.arange(d, dtype=np.int64)


@lru_cache(maxsize=64)
def all_points(q: int, d: int) -> np.ndarray:
    """Every point of F_q^d as a ``(q**d, d)`` array, row ``r`` = unrank(r)."""
    r = np.arange(q**d, dtype=np.int64)
    pts = (r[:, None] // powers(q, d)[None, :]) % q
    pts.setflags(write=False)
    return pts


def ranks_of(points: np.ndarray, q: int) -> np.ndarray:
    points = np.asarray(points, dtype=np.int64)
    return points @ powers(q, points.shape[-1])


def dot(x: Sequence[int], y: Sequence[int], q: int) -> int:
    _check_same_dim(x, y)
    return sum(a * b for a, b in zip(x, y)) % q


def norm(x: Sequence[int], q: int) -> int:
    """The quadratic form x_1^2 + ... + x_d^2 (not a metric)."""
    return sum(a * a for a in x) % q


def line_rep(x: Sequence[int], q: int) -> Vector:
    """Canonical point of {s x : s != 0}: the one whose first nonzero entry is 1."""
    f = make_field(q)
    for c in x:
        if c % q:
            s = inv(f, c)
            return tuple((s * a) % q for a in x)
    raise ValueError("the zero vector lies on no line through the origin")


@lru_cache(maxsize=64)
def line_index(q: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised line bookkeeping for F_q^d.

    Returns ``(rep_ranks, line_of)``: ``rep_ranks`` lists the ranks of all
    canonical representatives in increasing order, and ``line_of[r]`` is the
    position in ``rep_ranks`` of the line through point ``r`` (``-1`` for the
    origin).
    """
    f = make_field(q)
    pts = all_points(q, d)
    nz = pts != 0
    has = nz.any(axis=1)
    first = np.argmax(nz, axis=1)
    lead = pts[np.arange(len(pts)), first]
    scaled = (pts * f.inverses[lead][:, None]) % q
    reps = ranks_of(scaled, q)
    rep_ranks = np.unique(reps[has])
    line_of = np.full(len(pts), -1, dtype=np.int64)
    line_of[has] = np.searchsorted(rep_ranks, reps[has])
    rep_ranks.setflags(write=False)
    line_of.setflags(write=False)
    return rep_ranks, line_of


def enumerate_lines(q: int, d: int) -> list[Vector]:
    """All (q^d - 1)/(q - 1) canonical line representatives, ordered by rank."""
    rep_ranks, _ = line_index(q, d)
    return [unrank(int(r), q, d) for r in rep_ranks]


def line_points(rep: Sequence[int], q: int) -> list[Vector]:
    """The punctured line {s x : s in F_q^*}."""
    return [tuple((s * a) % q for a in rep) for s in range(1, q)]


def project(x: Sequence[int]) -> Vector:
    """Drop the last coordinate."""
    if len(x) < 2:
        raise ValueError("projection needs d >= 2")
    return tuple(x[:-1])


@dataclass(frozen=True)
class Variety:
    """V = {x : sum a_i x_i^2 + sum b_i x_i + c = 0} over F_q."""

    q: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: int

    def __post_init__(self):
        make_field(self.q)
        if len(self.a) != len(self.b) or not self.a:
            raise ValueError("quadratic and linear coefficient vectors must share d >= 1")
        object.__setattr__(self, "a", tuple(int(v) % self.q for v in self.a))
        object.__setattr__(self, "b", tuple(int(v) % self.q for v in self.b))
        object.__setattr__(self, "c", int(self.c) % self.q)

    @property
    def d(self) -> int:
        return len(self.a)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.int64)
        a = np.asarray(self.a, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64)
        return ((pts * pts) @ a + pts @ b + self.c) % self.q

    def translate(self, t: Sequence[int]) -> "Variety":
        """The variety V + t, i.e. Q(x - t) = 0 expanded back into diagonal form."""
        _check_same_dim(self.a, t)
        q = self.q
        b = tuple((bi - 2 * ai * ti) % q for ai, bi, ti in zip(self.a, self.b, t))
        c = (self.c + sum(ai * ti * ti - bi * ti for ai, bi, ti in zip(self.a, self.b, t))) % q
        return Variety(q, self.a, b, c)

    def to_text(self) -> str:
        return f"{','.join(map(str, self.a))};{','.join(map(str, self.b))};{self.c}"


def variety_contains(V: Variety, x: Sequence[int]) -> bool:
    _check_same_dim(V.a, x)
    return int(V.evaluate(np.asarray([x]))[0]) == 0


def parse_variety(text: str, q: int) -> Variety:
    """Parse ``a1,...,ad;b1,...,bd;c`` (integers, reduced mod q)."""
    parts = text.strip().split(";")
    if len(parts) != 3:
        raise ValueError(f"variety spec {text!r} must have the form a1,..,ad;b1,..,bd;c")
    try:
        a = tuple(int(v) for v in parts[0].split(","))
        b = tuple(int(v) for v in parts[1].split(","))
        c = int(parts[2])
    except ValueError as exc:
        raise ValueError(f"variety spec {text!r}: {exc}") from None
    return Variety(q, a, b, c)


def sphere(q: int, d: int, j: int) -> Variety:
    """S_j = {x : ||x|| = j}."""
    return Variety(q, (1,) * d, (0,) * d, -j)


def paraboloid(q: int, d: int) -> Variety:
    """P = {x : x_1^2 + ... + x_{d-1}^2 = x_d}."""
    return Variety(q, (1,) * (d - 1) + (0,), (0,) * (d - 1) + (-1,), 0)


def conjugate_paraboloid(q: int, d: int) -> Variety:
    """{x : x_1^2 + ... + x_{d-1}^2 = -x_d}; translates P + a with a outside it
    meet every line through the origin at most twice."""
    return Variety(q, (1,) * (d - 1) + (0,), (0,) * (d - 1) + (1,), 0)
