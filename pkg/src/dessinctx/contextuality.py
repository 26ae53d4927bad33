"""Magic (parity) configurations, CHSH squares, and exhaustive censuses.

Observables inside configurations are phase-free: a configuration cares
about *which* observables sit on a context, while signs only ever enter
through the ordered products along its lines.  Censuses run over the
canonical observable order of :mod:`dessinctx.pauli` and return
canonically sorted lists so repeated runs (and different thread counts)
produce identical output.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import pauli
from ._kernels import get_impl
from .pauli import PauliOperator

SQRT8 = 2.0 * np.sqrt(2.0)


# ---------------------------------------------------------------------------
# line products


def line_sign(operators) -> int:
    """Sign of the product of a mutually commuting line.

    The operators must pairwise commute (so the product is order
    independent) and multiply to plus or minus the identity.
    """
    ops = list(operators)
    if not ops:
        raise ValueError("empty line")
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not pauli.commutes(ops[i], ops[j]):
                raise ValueError(
                    f"line is not mutually commuting: {ops[i]} anticommutes with {ops[j]}"
                )
    prod = ops[0]
    for op in ops[1:]:
        prod = pauli.multiply(prod, op)
    if prod.x_mask != 0 or prod.z_mask != 0:
        raise ValueError(f"line product {prod} is not proportional to the identity")
    if prod.phase_exponent % 2 != 0:
        # cannot happen for commuting Hermitian operators, but guard anyway
        raise ValueError("line product is +-i times the identity")
    return 1 if prod.phase_exponent == 0 else -1


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class MagicConfiguration:
    """Observables and the index lines (contexts) they sit on."""

    observables: tuple[PauliOperator, ...]
    lines: tuple[tuple[int, ...], ...]
    line_signs: tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def create(cls, observables, lines) -> "MagicConfiguration":
        obs = tuple(op.phase_free() for op in observables)
        if len({op.key() for op in obs}) != len(obs):
            raise ValueError("configuration observables must be distinct")
        idx_lines = tuple(tuple(line) for line in lines)
        covered = set()
        signs = []
        for line in idx_lines:
            if any(not 0 <= i < len(obs) for i in line):
                raise ValueError(f"line {line} indexes outside the observable list")
            signs.append(line_sign(obs[i] for i in line))
            covered.update(line)
        if covered != set(range(len(obs))):
            missing = sorted(set(range(len(obs))) - covered)
            raise ValueError(f"observables {missing} appear on no line")
        return cls(obs, idx_lines, tuple(signs))

    @classmethod
    def from_json_dict(cls, data: dict) -> "MagicConfiguration":
        return cls.create([pauli.parse(s) for s in data["observables"]], data["lines"])

    def to_json_dict(self) -> dict:
        return {
            "observables": [str(op) for op in self.observables],
            "lines": [list(line) for line in self.lines],
        }


@dataclass(frozen=True)
class MagicCertificate:
    is_magic: bool
    occurrences: tuple[int, ...]
    line_signs: tuple[int, ...]
    sign_product: int
    parity_ok: bool

    def to_json_dict(self) -> dict:
        return {
            "is_magic": self.is_magic,
            "occurrences": list(self.occurrences),
            "line_signs": list(self.line_signs),
            "sign_product": self.sign_product,
            "parity_ok": self.parity_ok,
        }


def is_magic(config: MagicConfiguration) -> MagicCertificate:
    """Parity-proof check: even occurrence counts and sign product -1.

    A value assignment multiplies to +1 around such a configuration while
    the operator products multiply to -1, which is the contradiction.
    """
    occ = [0] * len(config.observables)
    for line in config.lines:
        for i in line:
            occ[i] += 1
    signs = config.line_signs or tuple(
        line_sign(config.observables[i] for i in line) for line in config.lines
    )
    product = 1
    for s in signs:
        product *= s
    parity_ok = all(c % 2 == 0 for c in occ)
    return MagicCertificate(
        is_magic=parity_ok and product == -1,
        occurrences=tuple(occ),
        line_signs=tuple(signs),
        sign_product=product,
        parity_ok=parity_ok,
    )


# ---------------------------------------------------------------------------
# CHSH squares


@dataclass(frozen=True)
class ChshQuadruple:
    """Four observables in a square: adjacent commute, diagonals do not."""

    sigma: tuple[PauliOperator, ...]

    @classmethod
    def of(cls, s1, s2, s3, s4) -> "ChshQuadruple":
        q = cls((s1, s2, s3, s4))
        q.check()
        return q

    def check(self):
        s = self.sigma
        if len(s) != 4:
            raise ValueError("a CHSH quadruple needs exactly 4 observables")
        for a, b in ((0, 1), (1, 2), (2, 3), (3, 0)):
            if not pauli.commutes(s[a], s[b]):
                raise ValueError(f"adjacent pair {s[a]}, {s[b]} must commute")
        for a, b in ((0, 2), (1, 3)):
            if pauli.commutes(s[a], s[b]):
                raise ValueError(f"diagonal pair {s[a]}, {s[b]} must anticommute")

    def operator_matrix(self) -> np.ndarray:
        """Dense C = s1 s2 + s2 s3 + s3 s4 - s4 s1."""
        s = [pauli.dense_matrix(op) for op in self.sigma]
        return s[0] @ s[1] + s[1] @ s[2] + s[2] @ s[3] - s[3] @ s[0]


def chsh_norm(quad: ChshQuadruple, check: bool = True) -> float:
    """Operator norm of the CHSH combination (largest |eigenvalue|)."""
    if check:
        quad.check()
    if quad.sigma[0].n_qubits > 3:
        raise ValueError("CHSH norm computed densely only up to 3 qubits")
    c = quad.operator_matrix()
    return float(np.max(np.abs(np.linalg.eigvalsh(c))))


# ---------------------------------------------------------------------------
# censuses


def _masks_and_comm(n_qubits: int):
    obs = pauli.enumerate_observables(n_qubits)
    xs = np.array([op.x_mask for op in obs], dtype=np.int64)
    zs = np.array([op.z_mask for op in obs], dtype=np.int64)
    overlap = np.bitwise_count(xs[:, None] & zs[None, :]) + np.bitwise_count(
        zs[:, None] & xs[None, :]
    )
    comm = ((overlap % 2) == 0).astype(np.uint8)
    return obs, xs, zs, comm


def _ranges(total: int, threads: int):
    threads = max(1, min(threads, total or 1))
    step = (total + threads - 1) // threads
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def census_squares(n_qubits: int, threads: int = 1, backend: str | None = None):
    """All unordered 4-sets of observables forming a CHSH square.

    Returns the canonical list of :class:`ChshQuadruple`; the count for
    two qubits is 90 and for three qubits 30240.
    """
    if not 1 <= n_qubits <= 3:
        raise ValueError("square census supported for 1..3 qubits")
    obs, xs, zs, comm = _masks_and_comm(n_qubits)
    impl = get_impl(backend)
    chunks = _ranges(len(obs), threads)
    if len(chunks) == 1:
        parts = [impl.square_census_range(comm, 0, len(obs))]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(lambda r: impl.square_census_range(comm, *r), chunks))
    rows = np.concatenate(parts) if parts else np.empty((0, 4), dtype=np.int64)
    quads = []
    for i, j, k, l in rows.tolist():
        group = [i, j, k, l]
        # sigma1 = smallest; sigma3 = its unique anticommuting partner
        s3 = next(t for t in group[1:] if not comm[i, t])
        s2, s4 = (t for t in group[1:] if t != s3)
        quads.append(ChshQuadruple((obs[i], obs[s2], obs[s3], obs[s4])))
    return quads


@dataclass(frozen=True)
class PentagramCensus:
    configurations: tuple[MagicConfiguration, ...]
    negative_line_counts: tuple[int, ...]

    def __len__(self):
        return len(self.configurations)


def census_pentagrams(
    threads: int = 1, backend: str | None = None, magic_only: bool = False
) -> PentagramCensus:
    """All three-qubit Mermin pentagrams (12096 of them).

    Stage 1 enumerates the four-element mutually commuting contexts with
    product +-III; stage 2 backtracks over five-line covers in which any
    two lines share exactly one observable and every observable lies on
    exactly two lines.  There are 12096 such covers.  Each carries the
    signs of its five lines; a cover is a parity proof (magic) exactly
    when its number of negative lines is odd, which holds for 5376 of
    them -- pass ``magic_only=True`` to keep just those.
    """
    obs, xs, zs, comm = _masks_and_comm(3)
    impl = get_impl(backend)
    lines, signs = impl.pentagram_lines(xs, zs, comm, 3)
    n_lines = lines.shape[0]
    masks = np.zeros(n_lines, dtype=np.uint64)
    for r in range(n_lines):
        m = 0
        for c in range(4):
            m |= 1 << int(lines[r, c])
        masks[r] = m
    inter = np.bitwise_count(masks[:, None] & masks[None, :])
    compat_bool = inter == 1
    nwords = (n_lines + 63) // 64
    compat = np.zeros((n_lines, nwords), dtype=np.uint64)
    for r in range(n_lines):
        cols = np.nonzero(compat_bool[r])[0]
        for t in cols.tolist():
            compat[r, t >> 6] |= np.uint64(1 << (t & 63))
    chunks = _ranges(n_lines, threads)
    if len(chunks) == 1:
        parts = [impl.pentagram_search_range(masks, signs, compat, 0, n_lines)]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(
                pool.map(lambda r: impl.pentagram_search_range(masks, signs, compat, *r), chunks)
            )
    rows = np.concatenate([p[0] for p in parts])
    negs = np.concatenate([p[1] for p in parts])
    keyed = []
    for row, neg in zip(rows.tolist(), negs.tolist()):
        if magic_only and neg % 2 == 0:
            continue  # even parity: a value assignment survives
        point_ids = sorted({int(lines[r, c]) for r in row for c in range(4)})
        pos = {p: t for t, p in enumerate(point_ids)}
        cfg_lines = sorted(tuple(sorted(pos[int(lines[r, c])] for c in range(4))) for r in row)
        cfg = MagicConfiguration(
            observables=tuple(obs[p] for p in point_ids),
            lines=tuple(cfg_lines),
            line_signs=tuple(int(signs[r]) for r in row),
        )
        keyed.append(((tuple(point_ids), tuple(cfg_lines)), cfg, neg))
    keyed.sort(key=lambda t: t[0])
    return PentagramCensus(
        configurations=tuple(t[1] for t in keyed),
        negative_line_counts=tuple(t[2] for t in keyed),
    )


# ---------------------------------------------------------------------------
# grids


def embedded_squares(grid: MagicConfiguration) -> list[ChshQuadruple]:
    """The nine CHSH squares sitting inside a 3x3 magic grid.

    Picking two of the three rows and two of the three columns leaves the
    four observables at their crossings; those always form a square.
    """
    if len(grid.observables) != 9 or len(grid.lines) != 6:
        raise ValueError("embedded squares need a 3x3 grid: 9 observables, 6 lines")
    if any(len(line) != 3 for line in grid.lines):
        raise ValueError("grid lines must have exactly 3 points")
    first = set(grid.lines[0])
    rows = [grid.lines[0]] + [l for l in grid.lines[1:] if not first & set(l)]
    cols = [l for l in grid.lines[1:] if first & set(l)]
    if len(rows) != 3 or len(cols) != 3:
        raise ValueError("lines do not split into three rows and three columns")
    for group in (rows, cols):
        covered = sorted(i for line in group for i in line)
        if covered != list(range(9)):
            raise ValueError("rows/columns do not partition the grid points")
    quads = []
    for r1 in range(3):
        for r2 in range(r1 + 1, 3):
            for c1 in range(3):
                for c2 in range(c1 + 1, 3):
                    cell = lambda r, c: grid.observables[
                        (set(rows[r]) & set(cols[c])).pop()
                    ]
                    quads.append(
                        ChshQuadruple.of(cell(r1, c1), cell(r1, c2), cell(r2, c2), cell(r2, c1))
                    )
    return quads
