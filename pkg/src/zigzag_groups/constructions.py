"""The four group families and their base graphs.

``P`` presets model iterated zig-zag products, ``Q`` presets iterated
replacement products.  All derived orders (pairs of permutations,
length-``k`` words) are lexicographic in the user's ordering of ``P`` or
``Q``.  A length-``k`` word is ordered by its letters in the order they
act, so that the word with index ``x`` is the walk that port ``x`` of the
``k``-th graph power takes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import RotationGraph
from .perm import Perm, PermError, compose, inverse_index, is_symmetric_set, parse_cycles
from .selfsim import Word, WreathRecursion


class PresetError(ValueError):
    pass


@dataclass(frozen=True)
class Preset:
    """``kind`` is ``"P"`` (zig-zag) or ``"Q"`` (replacement)."""

    kind: str
    perms: tuple[Perm, ...]
    k: int = 1
    padding: int = 0
    # replaces the canonical involution on X; only for negative controls
    gamma: Optional[Perm] = None

    def __post_init__(self):
        object.__setattr__(self, "perms", tuple(self.perms))
        if self.kind not in ("P", "Q"):
            raise PresetError(f"preset type must be 'P' or 'Q', got {self.kind!r}")
        if self.k < 1:
            raise PresetError("k must be >= 1")
        if self.padding < 0:
            raise PresetError("padding must be >= 0")
        if self.kind == "Q" and self.padding:
            raise PresetError("padding applies to P presets only")
        if self.kind == "P" and len(self.perms) < 2:
            raise PresetError("P needs at least two permutations")
        if not self.perms:
            raise PresetError("Q needs at least one permutation")
        deg = self.alphabet_size
        for p in self.perms:
            if p.degree != deg:
                raise PresetError(f"permutation {p} has degree {p.degree}; alphabet has {deg} letters")
        if not is_symmetric_set(self.perms):
            raise PresetError("permutation set is not symmetric (duplicates or missing inverses)")
        if self.gamma is not None and self.gamma.degree != deg:
            raise PresetError(f"gamma has degree {self.gamma.degree}; alphabet has {deg} letters")

    @property
    def alphabet_size(self) -> int:
        n = len(self.perms)
        if self.kind == "P":
            return n ** (2 * self.k) + self.padding
        return (n + 1) ** self.k

    @classmethod
    def parse(
        cls, kind: str, perms: Sequence[str], k: int = 1, padding: int = 0, gamma: Optional[str] = None
    ) -> "Preset":
        n = len(perms)
        # structural errors first, so they are not reported as degree errors
        if k < 1:
            raise PresetError("k must be >= 1")
        if padding < 0:
            raise PresetError("padding must be >= 0")
        if kind == "P" and n < 2:
            raise PresetError("P needs at least two permutations")
        if kind == "P":
            deg = n ** (2 * k) + padding
        elif kind == "Q":
            deg = (n + 1) ** k
        else:
            raise PresetError(f"preset type must be 'P' or 'Q', got {kind!r}")
        try:
            parsed = tuple(parse_cycles(t, deg) for t in perms)
            g = parse_cycles(gamma, deg) if gamma is not None else None
        except PermError as exc:
            raise PresetError(str(exc)) from None
        return cls(kind, parsed, k, padding, g)

    def to_dict(self) -> dict:
        out = {
            "type": self.kind,
            "perms": [p.cycles_str() for p in self.perms],
            "k": self.k,
            "padding": self.padding,
        }
        if self.gamma is not None:
            out["gamma"] = self.gamma.cycles_str()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Preset":
        try:
            return cls.parse(
                data["type"], list(data["perms"]), int(data.get("k", 1)), int(data.get("padding", 0)), data.get("gamma")
            )
        except KeyError as exc:
            raise PresetError(f"preset is missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, PresetError):
                raise
            raise PresetError(f"malformed preset: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "Preset":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PresetError(f"invalid preset JSON: {exc}") from None
        return cls.from_dict(data)

    def recursion(self) -> WreathRecursion:
        return build_GP(self) if self.kind == "P" else build_GQ(self)

    def base_graph(self) -> RotationGraph:
        return perm_action_graph(self.perms)


def perm_action_graph(perms: Sequence[Perm]) -> RotationGraph:
    """Port ``i`` at ``x`` goes to ``perms[i](x)``, arriving at the port of the inverse."""
    inv = inverse_index(perms)
    nbr = np.array([p.images for p in perms], dtype=np.int64).T
    port = np.tile(np.array(inv, dtype=np.int64), (nbr.shape[0], 1))
    return RotationGraph(nbr, port)


base_graph_P = perm_action_graph
base_graph_Q = perm_action_graph


# ----------------------------------------------------------------------------
# zig-zag family


def order_SP(P: Sequence[Perm]) -> list[tuple[int, int]]:
    """Pairs ``(i, j)`` (0-based indices of ``pi``, ``tau``) in generator order."""
    n = len(P)
    return [(i, j) for i in range(n) for j in range(n)]


def gamma_SP(P: Sequence[Perm]) -> list[int]:
    """0-based inverse table on generators: ``(pi, tau) -> (tau^-1, pi^-1)``."""
    inv = inverse_index(P)
    n = len(P)
    return [n * inv[j] + inv[i] for i, j in order_SP(P)]


def _word_index(letters: Sequence[int], base: int) -> int:
    x = 0
    for a in letters:
        x = x * base + a
    return x


def _reverse_inverse_table(sym_inv: Sequence[int], k: int) -> list[int]:
    """Index map of ``w -> w^-1`` on length-``k`` words over ``len(sym_inv)`` symbols."""
    m = len(sym_inv)
    out = []
    for seq in itertools.product(range(m), repeat=k):
        out.append(_word_index([sym_inv[a] for a in reversed(seq)], m))
    return out


def _words(m: int, k: int) -> list[Word]:
    # acting order a_1..a_k is the index order; written right-to-left
    return [tuple(a + 1 for a in reversed(seq)) for seq in itertools.product(range(m), repeat=k)]


def gamma_P(P: Sequence[Perm], k: int = 1, padding: int = 0) -> Perm:
    table = _reverse_inverse_table(gamma_SP(P), k)
    return Perm(table + list(range(len(table), len(table) + padding)))


def build_GP(preset: Preset) -> WreathRecursion:
    """``s_(pi,tau) = tau gamma pi (w_pi(1), ..., w_pi(d))``."""
    if preset.kind != "P":
        raise PresetError("build_GP needs a P preset")
    P, k = preset.perms, preset.k
    gamma = preset.gamma if preset.gamma is not None else gamma_P(P, k, preset.padding)
    ws = _words(len(P) ** 2, k) + [()] * preset.padding
    roots, children = [], []
    for i, j in order_SP(P):
        pi, tau = P[i], P[j]
        roots.append(compose(tau, compose(gamma, pi)))
        children.append(tuple(ws[y] for y in pi.images))
    inv = tuple(g + 1 for g in gamma_SP(P))
    return WreathRecursion(preset.alphabet_size, tuple(roots), tuple(children), inv)


# ----------------------------------------------------------------------------
# replacement family


def gamma_Q(Q: Sequence[Perm], k: int = 1) -> Perm:
    """Word reversal-inversion on length-``k`` words over ``Q + [s]``; ``s`` is self-inverse."""
    sym_inv = inverse_index(Q) + [len(Q)]
    return Perm(_reverse_inverse_table(sym_inv, k))


def build_GQ(preset: Preset) -> WreathRecursion:
    """Generators ``q_i = pi_i (e, ..., e)`` and ``s = gamma (w_1, ..., w_|X|)``."""
    if preset.kind != "Q":
        raise PresetError("build_GQ needs a Q preset")
    Q, k = preset.perms, preset.k
    d = len(Q)
    X = preset.alphabet_size
    gamma = preset.gamma if preset.gamma is not None else gamma_Q(Q, k)
    roots = list(Q) + [gamma]
    children = [((),) * X for _ in Q] + [tuple(_words(d + 1, k))]
    inv = tuple(j + 1 for j in inverse_index(Q)) + (d + 1,)
    names = tuple(f"q{i}" for i in range(1, d + 1)) + ("s",)
    return WreathRecursion(X, tuple(roots), tuple(children), inv, names)


# ----------------------------------------------------------------------------
# the presets used throughout the docs and tests

EXAMPLE_1 = ("P", ["(1 2)", "(1 4)(2 3)"], 1)
EXAMPLE_2 = ("Q", ["(1 2 3)", "(1 3 2)"], 1)


def example1() -> Preset:
    return Preset.parse(*EXAMPLE_1)


def example2() -> Preset:
    return Preset.parse(*EXAMPLE_2)
