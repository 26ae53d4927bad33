"""Dessins d'enfants as permutation pairs.

A dessin on ``n`` edges is a pair of permutations of the edge labels:
``alpha`` describes the cyclic edge order around black vertices, ``beta``
around white vertices, and the face permutation ``gamma`` is derived so
that ``alpha * beta * gamma`` is the identity.  Products compose left to
right throughout: ``(p * q)(i) = q(p(i))``, matching the coset-table
convention of :mod:`dessinctx.fpgroup`.

Edge labels are 1-based in all I/O (matching the usual cycle notation)
and 0-based internally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd, lcm

from .errors import CapExceededError

GROUP_ORDER_CAP = 10_000_000


class Permutation:
    """A bijection of {0, .., n-1} stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("images are not a bijection")
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles, one_indexed: bool = True) -> "Permutation":
        """Build from disjoint cycles; fixed points may be omitted."""
        images = list(range(degree))
        seen = set()
        off = 1 if one_indexed else 0
        for cycle in cycles:
            cyc = [c - off for c in cycle]
            for c in cyc:
                if not 0 <= c < degree:
                    raise ValueError(f"cycle entry {c + off} outside 1..{degree}")
                if c in seen:
                    raise ValueError(f"label {c + off} appears in two cycles")
                seen.add(c)
            for pos, c in enumerate(cyc):
                images[c] = cyc[(pos + 1) % len(cyc)]
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Left-to-right composition: apply self first, then other."""
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(other.images[v] for v in self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, v in enumerate(self.images):
            inv[v] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def cycles(self, include_fixed: bool = True) -> list[list[int]]:
        """Disjoint cycles on 1-based labels, each starting at its least label."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            v = self.images[start]
            while v != start:
                cyc.append(v)
                seen[v] = True
                v = self.images[v]
            if len(cyc) > 1 or include_fixed:
                out.append([c + 1 for c in cyc])
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle lengths, longest first, fixed points included."""
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return lcm(*self.cycle_type()) if self.degree else 1

    def conjugate(self, s: "Permutation") -> "Permutation":
        """s^-1 * self * s (relabelling by s)."""
        return s.inverse() * self * s

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        nontrivial = self.cycles(include_fixed=False)
        if not nontrivial:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in nontrivial)


@dataclass(frozen=True)
class Passport:
    """Cycle structures of (alpha, beta, gamma), fixed points explicit."""

    entries: tuple[tuple[tuple[int, int], ...], ...]

    @classmethod
    def from_cycle_types(cls, *types) -> "Passport":
        entries = []
        for t in types:
            counts: dict[int, int] = {}
            for length in t:
                counts[length] = counts.get(length, 0) + 1
            entries.append(tuple(sorted(counts.items(), reverse=True)))
        return cls(tuple(entries))

    def entry_sums(self) -> tuple[int, ...]:
        return tuple(sum(l * m for l, m in e) for e in self.entries)

    def __str__(self):
        parts = []
        for e in self.entries:
            parts.append(" ".join(f"{l}^{m}" for l, m in e))
        return "[" + ", ".join(parts) + "]"


def parse_cycle_structure(text: str) -> tuple[tuple[int, int], ...]:
    """Parse a cycle structure like "2^4 1^2" (or "2^4,1^2"); bare "5" means 5^1."""
    counts: dict[int, int] = {}
    for token in text.replace(",", " ").split():
        if "^" in token:
            l_str, m_str = token.split("^", 1)
            length, mult = int(l_str), int(m_str)
        else:
            length, mult = int(token), 1
        if length < 1 or mult < 1:
            raise ValueError(f"bad cycle-structure token {token!r}")
        counts[length] = counts.get(length, 0) + mult
    if not counts:
        raise ValueError("empty cycle structure")
    return tuple(sorted(counts.items(), reverse=True))


class Dessin:
    """Validated dessin: transitive (alpha, beta) with derived faces."""

    __slots__ = ("n_edges", "alpha", "beta", "gamma")

    def __init__(self, alpha: Permutation, beta: Permutation):
        if alpha.degree != beta.degree:
            raise ValueError(
                f"degree mismatch: alpha on {alpha.degree} labels, beta on {beta.degree}"
            )
        orbits = _orbits(alpha, beta)
        if len(orbits) != 1:
            pretty = ", ".join("{" + ",".join(str(v + 1) for v in sorted(o)) + "}" for o in orbits)
            raise ValueError(f"dessin is disconnected; orbits: {pretty}")
        self.n_edges = alpha.degree
        self.alpha = alpha
        self.beta = beta
        self.gamma = (alpha * beta).inverse()

    @property
    def clean(self) -> bool:
        """White valency <= 2, i.e. beta is an involution."""
        return (self.beta * self.beta).is_identity()

    def passport(self) -> Passport:
        return Passport.from_cycle_types(
            self.alpha.cycle_type(), self.beta.cycle_type(), self.gamma.cycle_type()
        )

    def signature(self) -> tuple[int, int, int, int]:
        """(B, W, F, g) with 2 - 2g = B + W + F - n."""
        b = len(self.alpha.cycles())
        w = len(self.beta.cycles())
        f = len(self.gamma.cycles())
        euler = b + w + f - self.n_edges
        if (2 - euler) % 2 != 0 or euler > 2:
            raise ValueError(f"invalid Euler characteristic {euler} for a dessin")
        return (b, w, f, (2 - euler) // 2)

    def genus(self) -> int:
        return self.signature()[3]

    # -- I/O ---------------------------------------------------------------

    @classmethod
    def from_json_dict(cls, data: dict) -> "Dessin":
        n = int(data["edges"])
        alpha = Permutation.from_cycles(n, data.get("alpha", []))
        beta = Permutation.from_cycles(n, data.get("beta", []))
        return cls(alpha, beta)

    @classmethod
    def from_json(cls, text: str) -> "Dessin":
        return cls.from_json_dict(json.loads(text))

    def to_json_dict(self) -> dict:
        return {
            "edges": self.n_edges,
            "alpha": self.alpha.cycles(),
            "beta": self.beta.cycles(),
        }

    def to_dot(self) -> str:
        """Graphviz drawing: filled black vertices, open white ones, labeled edges."""
        lines = ["graph dessin {"]
        blacks = self.alpha.cycles()
        whites = self.beta.cycles()
        for i in range(len(blacks)):
            lines.append(f'  b{i} [shape=circle, style=filled, fillcolor=black, label=""];')
        for i in range(len(whites)):
            lines.append(f'  w{i} [shape=circle, label=""];')
        black_of = {e: i for i, cyc in enumerate(blacks) for e in cyc}
        white_of = {e: i for i, cyc in enumerate(whites) for e in cyc}
        for e in range(1, self.n_edges + 1):
            lines.append(f'  b{black_of[e]} -- w{white_of[e]} [label="{e}"];')
        lines.append("}")
        return "\n".join(lines)


def _orbits(*perms: Permutation) -> list[set[int]]:
    degree = perms[0].degree
    seen = [False] * degree
    orbits = []
    for start in range(degree):
        if seen[start]:
            continue
        orbit = {start}
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            for p in perms:
                w = p(v)
                if not seen[w]:
                    seen[w] = True
                    orbit.add(w)
                    stack.append(w)
        orbits.append(orbit)
    return orbits


def make_dessin(alpha: Permutation, beta: Permutation) -> Dessin:
    return Dessin(alpha, beta)


# ---------------------------------------------------------------------------
# monodromy


def group_elements(d: Dessin, cap: int = GROUP_ORDER_CAP) -> list[Permutation]:
    """All elements of <alpha, beta> by breadth-first closure.

    All groups in scope here have order at most a few thousand, so plain
    closure with a hash set beats fancier machinery.
    """
    gens = [d.alpha, d.beta]
    frontier = [Permutation.identity(d.n_edges)]
    seen = {frontier[0].images}
    elements = list(frontier)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = p * g
                if q.images not in seen:
                    seen.add(q.images)
                    elements.append(q)
                    nxt.append(q)
                    if len(elements) > cap:
                        raise CapExceededError(
                            f"monodromy group exceeds the cap of {cap} elements"
                        )
        frontier = nxt
    return elements


@dataclass(frozen=True)
class GroupSummary:
    order: int
    abelian: bool
    element_orders: tuple[tuple[int, int], ...]  # (order, count), ascending
    name: str | None

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "abelian": self.abelian,
            "element_orders": {str(o): c for o, c in self.element_orders},
            "name": self.name,
        }


def order_histogram(elements) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    for p in elements:
        o = p.order()
        counts[o] = counts.get(o, 0) + 1
    return tuple(sorted(counts.items()))


def _cyclic_histogram(n: int) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    for k in range(n):
        o = n // gcd(k, n)
        counts[o] = counts.get(o, 0) + 1
    return tuple(sorted(counts.items()))


def _dihedral_histogram(m: int) -> tuple[tuple[int, int], ...]:
    counts = dict(_cyclic_histogram(m))
    counts[2] = counts.get(2, 0) + m
    return tuple(sorted(counts.items()))


# fingerprints of named groups the paper identifies; computed once from
# explicit permutation realizations (see tests) and frozen here
_NAMED_FINGERPRINTS: dict[tuple[int, tuple[tuple[int, int], ...]], str] = {
    (60, ((1, 1), (2, 15), (3, 20), (5, 24))): "A5",
    (36, ((1, 1), (2, 15), (3, 8), (6, 12))): "Z3^2:Z2^2",
    (720, ((1, 1), (2, 75), (3, 80), (4, 180), (5, 144), (6, 240))): "S6",
    (1296, ((1, 1), (2, 135), (3, 98), (4, 216), (6, 594), (9, 144), (12, 108))): "S3wrS3",
}


def identify_group(order: int, hist: tuple[tuple[int, int], ...]) -> str | None:
    """Heuristic name lookup by (order, element-order histogram).

    A matching fingerprint is strong evidence, not an isomorphism proof;
    callers treat the name as a label.
    """
    if hist == _cyclic_histogram(order):
        return f"Z{order}"
    if order % 2 == 0 and hist == _dihedral_histogram(order // 2):
        return f"D{order // 2}"
    return _NAMED_FINGERPRINTS.get((order, hist))


def monodromy_group(d: Dessin, cap: int = GROUP_ORDER_CAP) -> GroupSummary:
    elements = group_elements(d, cap)
    hist = order_histogram(elements)
    abelian = all(
        (a * b).images == (b * a).images for a in (d.alpha, d.beta) for b in (d.alpha, d.beta)
    )
    return GroupSummary(
        order=len(elements),
        abelian=abelian,
        element_orders=hist,
        name=identify_group(len(elements), hist),
    )
