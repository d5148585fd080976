"""Prime field arithmetic and the canonical additive character."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class Field:
    """The prime field F_q (q odd) with psi(u) = exp(2 pi i u / q) tabulated.

    ``roots[u]`` holds psi(u); ``inverses[a]`` holds a^{-1} for a != 0 and 0
    at index 0.
    """

    q: int
    roots: np.ndarray = field(repr=False, compare=False)
    inverses: np.ndarray = field(repr=False, compare=False)

    def __hash__(self):
        return hash(self.q)

    def __eq__(self, other):
        return isinstance(other, Field) and other.q == self.q


_FIELDS: dict[int, Field] = {}


def make_field(q: int) -> Field:
    """Build (or fetch the cached) field of odd prime order ``q``."""
    q = int(q)
    if q in _FIELDS:
        return _FIELDS[q]
    if q < 3 or q % 2 == 0:
        raise ValueError(f"unsupported characteristic: q={q} (need an odd prime)")
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")
    u = np.arange(q)
    roots = np.exp(2j * np.pi * u / q)
    roots[0] = 1.0
    inverses = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inverses[a] = pow(a, q - 2, q)
    roots.setflags(write=False)
    inverses.setflags(write=False)
    f = Field(q, roots, inverses)
    _FIELDS[q] = f
    return f


def inv(f: Field, a: int) -> int:
    a %= f.q
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in F_q")
    return int(f.inverses[a])


def character(f: Field, u) -> complex | np.ndarray:
    """psi(u); accepts an int or an integer array, reduced mod q."""
    out = f.roots[np.asarray(u) % f.q]
    return complex(out) if np.ndim(out) == 0 else out
