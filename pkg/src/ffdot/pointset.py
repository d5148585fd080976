"""Dense subsets of F_q^d, the named set families, seeded sampling and file I/O."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import geometry as geo
from .field import make_field

HEADER = "# ffdot pointset v1"
MASK64 = (1 << 64) - 1

FAMILIES = (
    "variety",
    "variety-translate",
    "sphere",
    "paraboloid",
    "paraboloid-base",
    "line-union",
    "uniform-random",
    "full-space",
)


class PointSet:
    """A subset of F_q^d held as a boolean membership table indexed by rank."""

    __slots__ = ("q", "d", "members", "size")

    def __init__(self, q: int, d: int, members: np.ndarray):
        make_field(q)
        if d < 1:
            raise ValueError("d must be >= 1")
        members = np.asarray(members, dtype=bool)
        if members.shape != (q**d,):
            raise ValueError(f"membership table must have length {q}**{d}")
        members = members.copy()
        members.setflags(write=False)
        self.q = q
        self.d = d
        self.members = members
        self.size = int(members.sum())

    @classmethod
    def from_ranks(cls, q: int, d: int, ranks: Iterable[int]) -> "PointSet":
        m = np.zeros(q**d, dtype=bool)
        m[np.asarray(list(ranks) if not isinstance(ranks, np.ndarray) else ranks, dtype=np.int64)] = True
        return cls(q, d, m)

    @classmethod
    def from_points(cls, q: int, d: int, points: Iterable[Sequence[int]]) -> "PointSet":
        pts = np.asarray(list(points), dtype=np.int64).reshape(-1, d)
        if pts.size and (pts.min() < 0 or pts.max() >= q):
            raise ValueError(f"coordinate outside [0, {q})")
        return cls.from_ranks(q, d, geo.ranks_of(pts, q))

    @classmethod
    def empty(cls, q: int, d: int) -> "PointSet":
        return cls(q, d, np.zeros(q**d, dtype=bool))

    @classmethod
    def full(cls, q: int, d: int) -> "PointSet":
        return cls(q, d, np.ones(q**d, dtype=bool))

    def ranks(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def points(self) -> np.ndarray:
        """Members as a ``(size, d)`` array in increasing rank order."""
        return geo.all_points(self.q, self.d)[self.ranks()]

    def tuples(self) -> list[geo.Vector]:
        return [tuple(int(c) for c in p) for p in self.points()]

    @property
    def has_origin(self) -> bool:
        return bool(self.members[0])

    def without_origin(self) -> "PointSet":
        m = self.members.copy()
        m[0] = False
        return PointSet(self.q, self.d, m)

    def __len__(self) -> int:
        return self.size

    def __contains__(self, x) -> bool:
        return bool(self.members[geo.rank(x, self.q)])

    def __iter__(self):
        return iter(self.tuples())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PointSet)
            and (self.q, self.d) == (other.q, other.d)
            and bool(np.array_equal(self.members, other.members))
        )

    def __le__(self, other: "PointSet") -> bool:
        check_compatible(self, other)
        return not bool(np.any(self.members & ~other.members))

    def __or__(self, other: "PointSet") -> "PointSet":
        check_compatible(self, other)
        return PointSet(self.q, self.d, self.members | other.members)

    def __repr__(self) -> str:
        return f"PointSet(q={self.q}, d={self.d}, size={self.size})"


def check_compatible(E: PointSet, F: PointSet) -> None:
    if (E.q, E.d) != (F.q, F.d):
        raise ValueError(f"incompatible sets: F_{E.q}^{E.d} vs F_{F.q}^{F.d}")


def construct_variety(V: geo.Variety, q: int | None = None, d: int | None = None) -> PointSet:
    """All zeros of V, by exhaustive evaluation over F_q^d."""
    q = V.q if q is None else q
    d = V.d if d is None else d
    if (q, d) != (V.q, V.d):
        raise ValueError("variety does not live in F_q^d")
    return PointSet(q, d, V.evaluate(geo.all_points(q, d)) == 0)


def translate(E: PointSet, a: Sequence[int]) -> PointSet:
    if len(a) != E.d:
        raise ValueError(f"dimension mismatch: {len(a)} != {E.d}")
    shift = np.asarray(a, dtype=np.int64) % E.q
    return PointSet.from_ranks(E.q, E.d, geo.ranks_of((E.points() + shift) % E.q, E.q))


def project_set(E: PointSet) -> PointSet:
    """pi(E) in F_q^{d-1}."""
    if E.d < 2:
        raise ValueError("projection needs d >= 2")
    return PointSet.from_ranks(E.q, E.d - 1, geo.ranks_of(E.points()[:, :-1], E.q))


def paraboloid_split(E: PointSet) -> tuple[PointSet, PointSet]:
    """Split E (a subset of the paraboloid) into G = {x_d != 0} and B = {x_d = 0}."""
    P = construct_variety(geo.paraboloid(E.q, E.d))
    if not E <= P:
        raise ValueError("set is not contained in the paraboloid")
    last = geo.all_points(E.q, E.d)[:, -1]
    return PointSet(E.q, E.d, E.members & (last != 0)), PointSet(E.q, E.d, E.members & (last == 0))


def line_union(q: int, d: int, reps: Iterable[Sequence[int]]) -> PointSet:
    """Union of the punctured lines l_x for the given directions."""
    _, line_of = geo.line_index(q, d)
    wanted = {int(line_of[geo.rank(geo.line_rep(x, q), q)]) for x in reps}
    return PointSet(q, d, np.isin(line_of, sorted(wanted)))


# --- seeding ---------------------------------------------------------------

def mix64(x: int) -> int:
    """SplitMix64 finaliser."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(master: int, *keys: int) -> int:
    """Fold integer keys (cell id, trial index, ...) into a master seed."""
    h = mix64(int(master) & MASK64)
    for k in keys:
        h = mix64(h ^ (int(k) & MASK64))
    return h


@dataclass(frozen=True)
class SampleSpec:
    """Which family to draw from, its parameters, the target size and seed.

    ``size=None`` means the whole ambient family set.
    """

    family: str
    q: int
    d: int
    size: int | None = None
    seed: int = 0
    j: int = 1
    translate: tuple[int, ...] | None = None
    lines: tuple[tuple[int, ...], ...] = field(default_factory=tuple)
    variety: geo.Variety | None = None
    exclude_origin: bool = False


def family_set(spec: SampleSpec) -> PointSet:
    """The ambient set a SampleSpec draws from."""
    q, d = spec.q, spec.d
    fam = spec.family
    if fam in ("variety", "variety-translate"):
        if spec.variety is None:
            raise ValueError(f"family {fam!r} needs a variety")
        V = spec.variety
        if fam == "variety-translate":
            if spec.translate is None:
                raise ValueError("family 'variety-translate' needs a translate vector")
            V = V.translate(spec.translate)
        S = construct_variety(V, q, d)
    elif fam == "sphere":
        S = construct_variety(geo.sphere(q, d, spec.j))
    elif fam == "paraboloid":
        S = construct_variety(geo.paraboloid(q, d))
        if spec.translate is not None:
            S = translate(S, spec.translate)
    elif fam == "paraboloid-base":
        _, S = paraboloid_split(construct_variety(geo.paraboloid(q, d)))
    elif fam == "line-union":
        S = line_union(q, d, spec.lines)
    elif fam in ("uniform-random", "full-space"):
        S = PointSet.full(q, d)
    else:
        raise ValueError(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}")
    if spec.exclude_origin:
        S = S.without_origin()
    return S


def sample(spec: SampleSpec) -> PointSet:
    """Uniform ``size``-subset of the family set, reproducible from ``spec.seed``."""
    ambient = family_set(spec)
    if spec.size is None:
        if spec.family == "uniform-random":
            raise ValueError("uniform-random needs an explicit size")
        return ambient
    m = int(spec.size)
    if not 0 <= m <= ambient.size:
        raise ValueError(f"cannot draw {m} points from a family set of size {ambient.size}")
    if m == ambient.size:
        return ambient
    rng = np.random.Generator(np.random.PCG64(spec.seed & MASK64))
    picked = rng.permutation(ambient.ranks())[:m]
    return PointSet.from_ranks(spec.q, spec.d, picked)


def random_subset(E: PointSet, m: int, rng: np.random.Generator) -> PointSet:
    if not 0 <= m <= E.size:
        raise ValueError(f"cannot draw {m} points from a set of size {E.size}")
    return PointSet.from_ranks(E.q, E.d, rng.permutation(E.ranks())[:m])


# --- file format -----------------------------------------------------------

def format_set(E: PointSet) -> str:
    lines = [HEADER, f"q={E.q} d={E.d}"]
    lines += [",".join(str(int(c)) for c in p) for p in E.points()]
    return "\n".join(lines) + "\n"


def write_set(E: PointSet, path: str | Path) -> None:
    Path(path).write_text(format_set(E))


def read_set(path: str | Path) -> PointSet:
    text = Path(path).read_text().splitlines()
    if len(text) < 2 or text[0].strip() != HEADER:
        raise ValueError(f"{path}: missing header {HEADER!r}")
    try:
        kv = dict(tok.split("=", 1) for tok in text[1].split())
        q, d = int(kv["q"]), int(kv["d"])
    except (ValueError, KeyError):
        raise ValueError(f"{path}: malformed parameter line {text[1]!r}") from None
    make_field(q)
    if d < 1:
        raise ValueError(f"{path}: d must be >= 1")
    rows = []
    for lineno, row in enumerate(text[2:], start=3):
        if not row.strip():
            continue
        try:
            coords = [int(c) for c in row.split(",")]
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-integer coordinate in {row!r}") from None
        if len(coords) != d:
            raise ValueError(f"{path}:{lineno}: expected {d} coordinates")
        if any(not 0 <= c < q for c in coords):
            raise ValueError(f"{path}:{lineno}: coordinate outside [0, {q})")
        rows.append(coords)
    ranks = geo.ranks_of(np.asarray(rows, dtype=np.int64).reshape(-1, d), q)
    if len(np.unique(ranks)) != len(ranks):
        raise ValueError(f"{path}: duplicate points")
    return PointSet.from_ranks(q, d, ranks)
