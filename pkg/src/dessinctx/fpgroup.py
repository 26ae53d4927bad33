"""Finitely presented groups: Todd-Coxeter enumeration and low-index search.

The cartographic group ``C2+ = <r0, r1 | r1^2>`` (with the third
generator eliminated through r0 r1 r2 = 1) drives everything here: its
finite-index subgroup classes are dessins, recovered from closed coset
tables by reading off the action of r0 (black) and r1 (white).

Presentation text format::

    gens: r0, r1; rels: r1^2, (r0*r1)^4; subgroup: r0^2

Clauses separated by ';' or newlines; the subgroup clause is optional.
Words use ``*`` for products, ``^k`` for (possibly negative) powers and
parentheses.

Coset tables store one column per generator and one per inverse; the
Todd-Coxeter driver is the HLT strategy with full coincidence handling,
deterministic because cosets are defined at the first undefined entry in
row-major order.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .dessin import Dessin, Permutation, group_elements, parse_cycle_structure
from .errors import CapExceededError

Word = tuple[int, ...]  # signed 1-based generator indices

DEFAULT_MAX_COSETS = 100_000
LOW_INDEX_CAP = 16


def free_reduce(word) -> Word:
    out: list[int] = []
    for g in word:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


@dataclass(frozen=True)
class FinitePresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        k = len(self.generators)
        for rel in self.relators:
            if not rel:
                raise ValueError("empty relator")
            if any(g == 0 or abs(g) > k for g in rel):
                raise ValueError(f"relator {rel} references an unknown generator")
        object.__setattr__(self, "relators", tuple(free_reduce(r) for r in self.relators))

    def word_to_string(self, word: Word) -> str:
        parts = []
        for g in word:
            name = self.generators[abs(g) - 1]
            parts.append(name if g > 0 else f"{name}^-1")
        return "*".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\^-?\d+|[()*])")


def _parse_word(text: str, gen_index: dict[str, int]) -> Word:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot tokenize word {text!r} at position {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    out: list[int] = []

    def parse_atoms(i: int, until: str | None) -> int:
        nonlocal out
        while i < len(tokens):
            tok = tokens[i]
            if tok == until:
                return i
            if tok == "(":
                mark = len(out)
                i = parse_atoms(i + 1, ")")
                if i >= len(tokens) or tokens[i] != ")":
                    raise ValueError(f"unbalanced parenthesis in {text!r}")
                i += 1
                group = out[mark:]
                del out[mark:]
                i, group = _apply_power(i, group)
                out.extend(group)
            elif tok == "*":
                i += 1
            elif tok.startswith("^"):
                raise ValueError(f"dangling power in {text!r}")
            else:
                if tok not in gen_index:
                    raise ValueError(f"unknown generator {tok!r} in {text!r}")
                g = gen_index[tok] + 1
                i, group = _apply_power(i + 1, [g])
                out.extend(group)
        return i

    def _apply_power(i: int, group: list[int]) -> tuple[int, list[int]]:
        if i < len(tokens) and tokens[i].startswith("^"):
            e = int(tokens[i][1:])
            i += 1
            if e < 0:
                group = [-g for g in reversed(group)]
                e = -e
            group = group * e
        return i, group

    parse_atoms(0, None)
    return free_reduce(out)


def parse_presentation(text: str) -> tuple[FinitePresentation, list[Word]]:
    """Parse the gens/rels/subgroup format; returns (presentation, subgroup words)."""
    clauses: dict[str, str] = {}
    for chunk in re.split(r"[;\n]", text):
        chunk = chunk.strip()
        if not chunk or chunk.startswith("#"):
            continue
        if ":" not in chunk:
            raise ValueError(f"clause {chunk!r} is missing a 'key:' prefix")
        key, _, body = chunk.partition(":")
        key = key.strip().lower()
        if key in clauses:
            clauses[key] = clauses[key] + "," + body
        else:
            clauses[key] = body
    if "gens" not in clauses:
        raise ValueError("presentation needs a 'gens:' clause")
    gens = tuple(g.strip() for g in clauses["gens"].split(",") if g.strip())
    if len(set(gens)) != len(gens):
        raise ValueError("duplicate generator names")
    gen_index = {g: i for i, g in enumerate(gens)}
    rels = tuple(
        _parse_word(w.strip(), gen_index)
        for w in clauses.get("rels", "").split(",")
        if w.strip()
    )
    sub = [
        _parse_word(w.strip(), gen_index)
        for w in clauses.get("subgroup", "").split(",")
        if w.strip()
    ]
    return FinitePresentation(gens, rels), sub


CARTOGRAPHIC = FinitePresentation(("r0", "r1"), ((2, 2),))


def cartographic_quotient(*extra: str) -> FinitePresentation:
    """C2+ with extra relators given as word strings over r0, r1."""
    gi = {"r0": 0, "r1": 1}
    rels = ((2, 2),) + tuple(_parse_word(w, gi) for w in extra)
    return FinitePresentation(("r0", "r1"), rels)


# ---------------------------------------------------------------------------
# coset tables


class CosetTable:
    """A closed coset table over a presentation's generators."""

    def __init__(self, presentation: FinitePresentation, rows: list[list[int]]):
        self.presentation = presentation
        self.rows = rows

    @property
    def index(self) -> int:
        return len(self.rows)

    def permutation(self, gen: int) -> Permutation:
        """Right-multiplication action of generator `gen` (0-based) on cosets."""
        return Permutation([row[2 * gen] for row in self.rows])

    def permutations(self) -> list[Permutation]:
        return [self.permutation(g) for g in range(len(self.presentation.generators))]

    def verify(self) -> bool:
        """Every relator must act trivially on every coset."""
        for rel in self.presentation.relators:
            cols = [_col(g) for g in rel]
            for start in range(len(self.rows)):
                c = start
                for x in cols:
                    c = self.rows[c][x]
                if c != start:
                    return False
        return True

    def to_json_dict(self) -> dict:
        cols = []
        for name in self.presentation.generators:
            cols.extend([name, name + "^-1"])
        return {
            "generators": list(self.presentation.generators),
            "columns": cols,
            "table": [[v + 1 for v in row] for row in self.rows],
        }


def _col(g: int) -> int:
    return 2 * (g - 1) if g > 0 else 2 * (-g - 1) + 1


def _inv_col(x: int) -> int:
    return x ^ 1


def coset_enumerate(
    presentation: FinitePresentation,
    subgroup_words=(),
    max_cosets: int = DEFAULT_MAX_COSETS,
) -> CosetTable:
    """HLT Todd-Coxeter enumeration of the cosets of <subgroup_words>.

    Raises CapExceededError when more than `max_cosets` cosets would be
    defined; that outcome is a resource statement, not a proof that the
    index is infinite.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be at least 1")
    ncols = 2 * len(presentation.generators)
    rel_cols = [[_col(g) for g in rel] for rel in presentation.relators]
    sub_cols = [[_col(g) for g in free_reduce(w)] for w in subgroup_words]

    table: list[list[int]] = [[-1] * ncols]
    parent = [0]  # union-find for coincidences
    dead = [False]

    def rep(c: int) -> int:
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    merge_queue: list[int] = []

    def merge(a: int, b: int):
        a, b = rep(a), rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        parent[b] = a
        dead[b] = True
        merge_queue.append(b)

    def coincidence(a: int, b: int):
        merge(a, b)
        while merge_queue:
            gamma = merge_queue.pop()
            for x in range(ncols):
                delta = table[gamma][x]
                if delta == -1:
                    continue
                table[delta][_inv_col(x)] = -1
                mu, nu = rep(gamma), rep(delta)
                if table[mu][x] != -1:
                    merge(nu, table[mu][x])
                elif table[nu][_inv_col(x)] != -1:
                    merge(mu, table[nu][_inv_col(x)])
                else:
                    table[mu][x] = nu
                    table[nu][_inv_col(x)] = mu

    def define(a: int, x: int) -> int:
        if len(table) >= max_cosets:
            raise CapExceededError(
                f"coset enumeration did not close within {max_cosets} cosets"
            )
        c = len(table)
        table.append([-1] * ncols)
        parent.append(c)
        dead.append(False)
        table[a][x] = c
        table[c][_inv_col(x)] = a
        return c

    def scan_and_fill(a: int, cols: list[int]):
        f, i = a, 0
        b, j = a, len(cols) - 1
        while True:
            while i <= j and table[f][cols[i]] != -1:
                f = table[f][cols[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][_inv_col(cols[j])] != -1:
                b = table[b][_inv_col(cols[j])]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                table[f][cols[i]] = b
                table[b][_inv_col(cols[i])] = f
                return
            define(f, cols[i])

    for w in sub_cols:
        if w:
            scan_and_fill(0, w)
    alpha = 0
    while alpha < len(table):
        if dead[alpha]:
            alpha += 1
            continue
        for cols in rel_cols:
            scan_and_fill(alpha, cols)
            if dead[alpha]:
                break
        if not dead[alpha]:
            for x in range(ncols):
                if table[alpha][x] == -1:
                    define(alpha, x)
        alpha += 1

    live = [c for c in range(len(table)) if not dead[c]]
    renum = {c: i for i, c in enumerate(live)}
    rows = [[renum[rep(table[c][x])] for x in range(ncols)] for c in live]
    result = CosetTable(presentation, rows)
    if not result.verify():
        raise AssertionError("internal error: closed table fails relator check")
    return result


# ---------------------------------------------------------------------------
# low-index subgroups


def low_index_subgroups(
    presentation: FinitePresentation, max_index: int, cap: int = LOW_INDEX_CAP
) -> list[CosetTable]:
    """One closed coset table per conjugacy class of subgroups of index <= max_index.

    Backtracking over partial tables in deterministic order; a finished
    table is kept only when no alternative basepoint yields a
    lexicographically smaller standard-form table (first-in-class test),
    which leaves exactly one representative per conjugacy class.
    """
    if max_index < 1:
        raise ValueError("max_index must be at least 1")
    if max_index > cap:
        raise CapExceededError(f"max_index {max_index} exceeds the cap {cap}")
    ncols = 2 * len(presentation.generators)
    rel_cols = [[_col(g) for g in rel] for rel in presentation.relators]
    # rotations of each relator grouped by leading column, for deduction scans
    rotations: dict[int, list[list[int]]] = {x: [] for x in range(ncols)}
    for cols in rel_cols:
        for i in range(len(cols)):
            rot = cols[i:] + cols[:i]
            rotations[rot[0]].append(rot)

    table: list[list[int]] = [[-1] * ncols]
    results: list[CosetTable] = []

    def scan(a: int, cols: list[int], trail: list[tuple[int, int]]) -> bool:
        """Deduction-only scan; False on contradiction."""
        f, i = a, 0
        b, j = a, len(cols) - 1
        while True:
            while i <= j and table[f][cols[i]] != -1:
                f = table[f][cols[i]]
                i += 1
            if i > j:
                return f == b
            while j >= i and table[b][_inv_col(cols[j])] != -1:
                b = table[b][_inv_col(cols[j])]
                j -= 1
            if j < i:
                return False
            if j == i:
                return assign(f, cols[i], b, trail)
            return True  # a gap of two or more: nothing to deduce yet

    def assign(a: int, x: int, b: int, trail: list[tuple[int, int]]) -> bool:
        if table[a][x] != -1:
            return table[a][x] == b
        if table[b][_inv_col(x)] != -1:
            return table[b][_inv_col(x)] == a
        table[a][x] = b
        trail.append((a, x))
        table[b][_inv_col(x)] = a
        trail.append((b, _inv_col(x)))
        # chase forced deductions through relator rotations at both ends
        for rot in rotations[x]:
            if not scan(a, rot, trail):
                return False
        for rot in rotations[_inv_col(x)]:
            if not scan(b, rot, trail):
                return False
        return True

    def undo(trail: list[tuple[int, int]], n_before: int):
        for a, x in trail:
            table[a][x] = -1
        del table[n_before:]

    def first_in_class() -> bool:
        n = len(table)
        for base in range(1, n):
            old_of = [base]
            new_of = {base: 0}
            smaller = False
            equal = True
            for new in range(n):
                row_old = table[old_of[new]]
                for x in range(ncols):
                    t = row_old[x]
                    if t not in new_of:
                        new_of[t] = len(old_of)
                        old_of.append(t)
                    mapped = new_of[t]
                    orig = table[new][x]
                    if mapped != orig:
                        if mapped < orig:
                            smaller = True
                        equal = False
                        break
                if not equal:
                    break
            if smaller:
                return False
        return True

    def descend():
        # first undefined entry in row-major order
        spot = None
        for a in range(len(table)):
            for x in range(ncols):
                if table[a][x] == -1:
                    spot = (a, x)
                    break
            if spot:
                break
        if spot is None:
            if first_in_class():
                results.append(
                    CosetTable(presentation, [row[:] for row in table])
                )
            return
        a, x = spot
        candidates = [b for b in range(len(table)) if table[b][_inv_col(x)] == -1]
        if len(table) < max_index:
            candidates.append(len(table))
        for b in candidates:
            n_before = len(table)
            if b == len(table):
                table.append([-1] * ncols)
            trail: list[tuple[int, int]] = []
            if assign(a, x, b, trail):
                descend()
            undo(trail, n_before)

    descend()
    for t in results:
        if not t.verify():
            raise AssertionError("internal error: low-index table fails relator check")
    return results


# ---------------------------------------------------------------------------
# dessins from tables and direct enumeration


def dessin_from_table(t: CosetTable) -> Dessin:
    """Read a dessin off a coset table: alpha = action of the first
    generator, beta = action of the second."""
    if len(t.presentation.generators) < 2:
        raise ValueError("need two generators to define a dessin")
    return Dessin(t.permutation(0), t.permutation(1))


def canonical_pair(alpha: Permutation, beta: Permutation) -> tuple:
    """Minimal relabelling of (alpha, beta) over all basepoints.

    Complete invariant for simultaneous conjugation of transitive pairs:
    breadth-first discovery order from each basepoint pins the labels.
    """
    n = alpha.degree
    gens = [alpha, beta, alpha.inverse(), beta.inverse()]
    best = None
    for base in range(n):
        new_of = {base: 0}
        order = [base]
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            for g in gens:
                w = g(v)
                if w not in new_of:
                    new_of[w] = len(order)
                    order.append(w)
        if len(order) < n:
            raise ValueError("pair is not transitive")
        a_img = tuple(new_of[alpha(order[i])] for i in range(n))
        b_img = tuple(new_of[beta(order[i])] for i in range(n))
        enc = (a_img, b_img)
        if best is None or enc < best:
            best = enc
    return best


def _involution_types(n: int):
    for k in range(n // 2 + 1):
        yield k  # number of transpositions


def _involution_rep(n: int, k: int) -> Permutation:
    cycles = [[2 * i + 1, 2 * i + 2] for i in range(k)]
    return Permutation.from_cycles(n, cycles)


def _type_matches(ctype: tuple[int, ...], structure) -> bool:
    counts: dict[int, int] = {}
    for length in ctype:
        counts[length] = counts.get(length, 0) + 1
    return tuple(sorted(counts.items(), reverse=True)) == structure


def permutations_of_cycle_type(n: int, ctype: tuple[int, ...]):
    """All permutations of {0..n-1} with the given cycle type."""
    if sum(ctype) != n:
        raise ValueError(f"cycle type {ctype} does not sum to {n}")
    lengths = sorted(ctype, reverse=True)
    images = list(range(n))

    def rec(avail: list[int], lengths: tuple[int, ...]):
        if not avail:
            yield Permutation(images)
            return
        s = avail[0]
        rest = avail[1:]
        seen_lengths = set()
        for li, length in enumerate(lengths):
            if length in seen_lengths:
                continue
            seen_lengths.add(length)
            remaining_lengths = lengths[:li] + lengths[li + 1:]
            if length == 1:
                images[s] = s
                yield from rec(rest, remaining_lengths)
                continue
            for tail in itertools.permutations(rest, length - 1):
                cyc = [s, *tail]
                for pos in range(length):
                    images[cyc[pos]] = cyc[(pos + 1) % length]
                tail_set = set(tail)
                yield from rec([v for v in rest if v not in tail_set], remaining_lengths)

    yield from rec(list(range(n)), tuple(lengths))


def enumerate_dessins_direct(
    n_edges: int,
    white=None,
    faces=None,
    black=None,
    group_order: int | None = None,
    unfiltered_cap: int = 8,
) -> list[Dessin]:
    """All dessins with `n_edges` edges (beta an involution) up to conjugacy.

    Filters are cycle structures as produced by `parse_cycle_structure`
    (or such strings) for the white, face, and black passport entries,
    plus an exact monodromy-group order.  Without any filter the edge
    count is capped (the census grows exponentially).
    """
    filters_given = any(v is not None for v in (white, faces, black, group_order))
    if n_edges > unfiltered_cap and not filters_given:
        raise CapExceededError(
            f"full enumeration capped at {unfiltered_cap} edges; pass filters for more"
        )
    white = parse_cycle_structure(white) if isinstance(white, str) else white
    faces = parse_cycle_structure(faces) if isinstance(faces, str) else faces
    black = parse_cycle_structure(black) if isinstance(black, str) else black

    found: dict[tuple, Dessin] = {}
    for k in _involution_types(n_edges):
        beta = _involution_rep(n_edges, k)
        if white is not None and not _type_matches(beta.cycle_type(), white):
            continue
        beta_inv = beta  # involution
        if faces is not None:
            # alpha * beta has the face cycle type (gamma is its inverse)
            ctype = tuple(
                v for length, mult in faces for v in [length] * mult
            )
            candidates = (c * beta_inv for c in permutations_of_cycle_type(n_edges, ctype))
        else:
            candidates = (
                Permutation(p) for p in itertools.permutations(range(n_edges))
            )
        for alpha in candidates:
            if black is not None and not _type_matches(alpha.cycle_type(), black):
                continue
            try:
                d = Dessin(alpha, beta)
            except ValueError:
                continue
            if group_order is not None:
                try:
                    if len(group_elements(d, cap=group_order)) != group_order:
                        continue
                except CapExceededError:
                    continue
            key = canonical_pair(alpha, beta)
            if key not in found:
                found[key] = d
    return [found[k] for k in sorted(found)]
