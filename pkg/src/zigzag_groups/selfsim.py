"""Wreath recursions and the self-similar actions they define.

A recursion over the alphabet ``X = {1..d}`` lists generators
``s_i = root_i (w_i1, ..., w_id)``, so that ``s_i(xv) = root_i(x) w_ix(v)``.
Words are tuples of signed 1-based generator indices; ``-i`` stands for
``s_i^-1`` and words act right-to-left (left actions).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import RotationGraph
from .perm import Perm, inverse, parse_cycles

Word = tuple[int, ...]


class WreathError(ValueError):
    pass


def invert_word(w: Word) -> Word:
    return tuple(-g for g in reversed(w))


def free_reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for g in w:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


@dataclass(frozen=True)
class WreathRecursion:
    d: int
    roots: tuple[Perm, ...]
    children: tuple[tuple[Word, ...], ...]
    inv: Optional[tuple[int, ...]] = None  # 1-based: s_{inv[i-1]} = s_i^-1
    names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        roots = tuple(self.roots)
        children = tuple(tuple(tuple(int(g) for g in w) for w in row) for row in self.children)
        m = len(roots)
        if m == 0:
            raise WreathError("at least one generator required")
        if len(children) != m:
            raise WreathError("one child row per generator required")
        for i, (r, row) in enumerate(zip(roots, children), 1):
            if r.degree != self.d:
                raise WreathError(f"root of generator {i} has degree {r.degree}, expected {self.d}")
            if len(row) != self.d:
                raise WreathError(f"generator {i} needs {self.d} children, got {len(row)}")
            for w in row:
                for g in w:
                    if g == 0 or abs(g) > m:
                        raise WreathError(f"generator {i}: child references undeclared index {g}")
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "children", children)
        if self.inv is not None:
            inv = tuple(int(j) for j in self.inv)
            if len(inv) != m or sorted(inv) != list(range(1, m + 1)):
                raise WreathError("inverse table must be a permutation of the generators")
            if any(inv[inv[i] - 1] != i + 1 for i in range(m)):
                raise WreathError("inverse table must be an involution")
            object.__setattr__(self, "inv", inv)
        names = self.names or tuple(f"s{i}" for i in range(1, m + 1))
        names = tuple(names)
        if len(names) != m or len(set(names)) != m or "e" in names:
            raise WreathError("generator names must be distinct, one per generator, and not 'e'")
        object.__setattr__(self, "names", names)

    @property
    def n_generators(self) -> int:
        return len(self.roots)

    def max_child_length(self) -> int:
        return max(len(w) for row in self.children for w in row)

    # -- words as text -------------------------------------------------------

    def format_word(self, w: Word) -> str:
        if not w:
            return "e"
        return " ".join(self.names[g - 1] if g > 0 else f"{self.names[-g - 1]}^-1" for g in w)

    def parse_word(self, text: str) -> Word:
        return _parse_word(text, {n: i for i, n in enumerate(self.names, 1)})

    # -- JSON ----------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "generators": [
                {"name": n, "root": r.cycles_str(), "children": [self.format_word(w) for w in row]}
                for n, r, row in zip(self.names, self.roots, self.children)
            ],
            "inv": list(self.inv) if self.inv is not None else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "WreathRecursion":
        d = int(data["d"])
        gens = data["generators"]
        names = tuple(g["name"] for g in gens)
        lookup = {n: i for i, n in enumerate(names, 1)}
        roots = tuple(parse_cycles(g["root"], d) for g in gens)
        children = tuple(tuple(_parse_word(w, lookup) for w in g["children"]) for g in gens)
        inv = data.get("inv")
        return cls(d, roots, children, tuple(inv) if inv is not None else None, names)

    @classmethod
    def from_json(cls, text: str) -> "WreathRecursion":
        return cls.from_dict(json.loads(text))


def _parse_word(text: str, lookup: dict[str, int]) -> Word:
    out = []
    for tok in text.replace("*", " ").split():
        if tok == "e":
            continue
        sign = 1
        if tok.endswith("^-1"):
            tok, sign = tok[:-3], -1
        if tok not in lookup:
            raise WreathError(f"unknown generator {tok!r}")
        out.append(sign * lookup[tok])
    return tuple(out)


# ----------------------------------------------------------------------------
# the action on words


def evaluate(rec: WreathRecursion, g: Word, letters: Sequence[int]) -> tuple[int, ...]:
    """Image of the word ``letters`` (1-based) under the group element ``g``.

    Works one position at a time, carrying the section of ``g`` at the
    prefix read so far, so there is no recursion depth to worry about.
    """
    inv_roots = [inverse(r) for r in rec.roots]
    out = []
    cur = free_reduce(g)
    for x in letters:
        if not 1 <= x <= rec.d:
            raise WreathError(f"letter {x} out of range 1..{rec.d}")
        sections = []
        for s in reversed(cur):
            if s > 0:
                sections.append(rec.children[s - 1][x - 1])
                x = rec.roots[s - 1](x)
            else:
                x = inv_roots[-s - 1](x)
                sections.append(invert_word(rec.children[-s - 1][x - 1]))
        out.append(x)
        cur = free_reduce(itertools.chain.from_iterable(reversed(sections)))
    return tuple(out)


def words(d: int, n: int):
    """All words of length ``n`` over ``1..d`` in lexicographic order."""
    return itertools.product(range(1, d + 1), repeat=n)


def action_tables(rec: WreathRecursion, n: int) -> np.ndarray:
    """Array ``T`` of shape ``(m, d**n)``; ``T[i, v]`` is the index of ``s_{i+1}(v)``.

    Built level by level from ``s_i(xv) = root_i(x) w_ix(v)``, with words
    indexed lexicographically so that ``index(xv) = (x-1) d^(n-1) + index(v)``.
    """
    m, d = rec.n_generators, rec.d
    table = np.zeros((m, 1), dtype=np.int64)
    roots = np.array([r.images for r in rec.roots], dtype=np.int64)
    for _ in range(n):
        N = table.shape[1]
        inv_table = np.argsort(table, axis=1)
        nxt = np.empty((m, d * N), dtype=np.int64)
        for i in range(m):
            for x in range(d):
                idx = np.arange(N)
                for s in reversed(rec.children[i][x]):
                    idx = table[s - 1][idx] if s > 0 else inv_table[-s - 1][idx]
                nxt[i, x * N:(x + 1) * N] = roots[i, x] * N + idx
        table = nxt
    return table


def check_symmetric(rec: WreathRecursion, n_max: int) -> bool:
    """True iff ``s_inv(i)`` undoes ``s_i`` on every ``X^n``, ``n <= n_max``."""
    if rec.inv is None:
        raise WreathError("recursion has no inverse table")
    inv = np.array(rec.inv) - 1
    for n in range(1, n_max + 1):
        T = action_tables(rec, n)
        ident = np.arange(T.shape[1])
        for i in range(rec.n_generators):
            if not np.array_equal(T[inv[i]][T[i]], ident):
                return False
    return True


def action_graph(rec: WreathRecursion, n: int) -> RotationGraph:
    """Graph of the action on ``X^n``; port ``x`` at ``v`` leads to ``s_x(v)``.

    The back-port is ``inv(x)``.  Vertices are words in lexicographic order.
    """
    if rec.inv is None:
        raise WreathError("action graph needs an inverse table")
    if n < 1:
        raise WreathError("level must be >= 1")
    T = action_tables(rec, n)
    N = T.shape[1]
    port = np.tile(np.array(rec.inv, dtype=np.int64) - 1, (N, 1))
    return RotationGraph(T.T, port, port_names=rec.names)


# ----------------------------------------------------------------------------
# automata


@dataclass(frozen=True)
class Automaton:
    states: tuple[str, ...]
    # (source, input, output, target), letters 1-based
    transitions: tuple[tuple[str, int, int, str], ...]

    def to_dot(self, name: str = "A") -> str:
        lines = [f"digraph {name} {{"]
        for s in self.states:
            lines.append(f'  "{s}";')
        for src, x, y, dst in self.transitions:
            lines.append(f'  "{src}" -> "{dst}" [label="{x}|{y}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def automaton_export(rec: WreathRecursion) -> Automaton:
    """Mealy automaton of a recursion whose children are single letters or empty."""
    if rec.max_child_length() > 1:
        raise WreathError("children of length >= 2: not an automaton presentation")
    for row in rec.children:
        for w in row:
            if w and w[0] < 0:
                raise WreathError("inverse letters as children are not automaton states")
    names = rec.names
    needs_e = any(not w for row in rec.children for w in row)
    states = names + (("e",) if needs_e else ())
    trans = []
    for i, (r, row) in enumerate(zip(rec.roots, rec.children)):
        for x in range(1, rec.d + 1):
            w = row[x - 1]
            trans.append((names[i], x, r(x), names[w[0] - 1] if w else "e"))
    if needs_e:
        trans += [("e", x, x, "e") for x in range(1, rec.d + 1)]
    return Automaton(states, tuple(trans))
