"""Finite permutations of {1..m} with cycle-notation I/O.

Points are 1-based at the public surface; the image table is stored
0-based.  Composition applies right-to-left: ``compose(a, b)(x) == a(b(x))``.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence


class PermError(ValueError):
    """Malformed permutation input."""


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Perm:
    __slots__ = ("_images",)

    def __init__(self, images: Iterable[int]):
        # images are 0-based: point i goes to images[i]
        imgs = tuple(int(i) for i in images)
        if not imgs:
            raise PermError("degree must be positive")
        if sorted(imgs) != list(range(len(imgs))):
            raise PermError(f"not a bijection of 0..{len(imgs) - 1}: {imgs}")
        object.__setattr__(self, "_images", imgs)

    def __setattr__(self, name, value):
        raise AttributeError("Perm is immutable")

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "Perm":
        """Build from 1-based images: ``images[i-1]`` is the image of ``i``."""
        return cls(x - 1 for x in images)

    @property
    def degree(self) -> int:
        return len(self._images)

    @property
    def images(self) -> tuple[int, ...]:
        """0-based image table."""
        return self._images

    def __call__(self, x: int) -> int:
        """Image of the 1-based point ``x``."""
        if not 1 <= x <= self.degree:
            raise PermError(f"point {x} out of range 1..{self.degree}")
        return self._images[x - 1] + 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self._images == other._images

    def __hash__(self) -> int:
        return hash(self._images)

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Perm({self.cycles_str()!r}, degree={self.degree})"

    def __str__(self) -> str:
        return self.cycles_str()

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, 1-based, each starting at its smallest point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i + 1)
                i = self._images[i]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycles_str(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse a product of disjoint cycles such as ``"(1 4)(2 3)"``.

    Entries may be separated by spaces or commas.  ``""`` and ``"()"``
    give the identity.  A point may appear at most once in the whole
    string; use :func:`compose` for products of overlapping cycles.
    """
    if degree < 1:
        raise PermError("degree must be positive")
    stripped = text.strip()
    images = list(range(degree))
    seen: set[int] = set()
    pos = 0
    for m in _CYCLE_RE.finditer(stripped):
        if stripped[pos:m.start()].strip():
            raise PermError(f"unexpected text {stripped[pos:m.start()]!r} in {text!r}")
        pos = m.end()
        body = m.group(1).replace(",", " ").split()
        try:
            pts = [int(t) for t in body]
        except ValueError:
            raise PermError(f"non-integer entry in cycle ({m.group(1)})") from None
        for p in pts:
            if not 1 <= p <= degree:
                raise PermError(f"point {p} out of range 1..{degree}")
            if p in seen:
                raise PermError(f"point {p} repeated in {text!r}")
            seen.add(p)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a - 1] = b - 1
    if stripped[pos:].strip():
        raise PermError(f"unexpected text {stripped[pos:]!r} in {text!r}")
    return Perm(images)


def compose(a: Perm, b: Perm) -> Perm:
    """``a`` after ``b``."""
    if a.degree != b.degree:
        raise PermError(f"degree mismatch: {a.degree} vs {b.degree}")
    ai = a.images
    return Perm(ai[j] for j in b.images)


def inverse(a: Perm) -> Perm:
    inv = [0] * a.degree
    for i, j in enumerate(a.images):
        inv[j] = i
    return Perm(inv)


def is_symmetric_set(ps: Sequence[Perm]) -> bool:
    """True iff ``ps`` has no duplicates and is closed under inversion."""
    if len({p.degree for p in ps}) > 1:
        raise PermError("permutations of different degrees")
    members = set(ps)
    if len(members) != len(ps):
        return False
    return all(inverse(p) in members for p in ps)


def inverse_index(ps: Sequence[Perm]) -> list[int]:
    """0-based table ``j = table[i]`` with ``ps[j] == inverse(ps[i])``."""
    where = {p: i for i, p in enumerate(ps)}
    out = []
    for p in ps:
        q = inverse(p)
        if q not in where:
            raise PermError(f"inverse of {p} missing from the set")
        out.append(where[q])
    return out
