"""
Marginal instability rate sequences ``a_n = max ||A_{i_1} ... A_{i_n}||``.

The generic engine walks the product semigroup level by level.  The frontier at
length ``n`` holds one representative per distinct product (up to an entrywise
tolerance), each with the lexicographically smallest index sequence that
produces it.  Frontiers are extended by right multiplication, so candidate
``r * m + i`` at the next level is ``states[r] @ A_i`` and candidate order is
already the lexicographic order of the witnesses.  Deduplication keeps the
first occurrence of every key, which makes the result independent of how the
expansion is chunked across threads.

When a level exceeds ``capacity`` the frontier is cut down to a beam and every
later entry is reported as a lower bound.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, List, NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    CapacityExceeded,
    DegenerateInput,
    IndexOutOfRange,
    InsufficientPrefix,
)
from .linalg import MatrixSet, op_norm, op_norms

EXACT = "exact"
LOWER_BOUND = "lower_bound"
INTERVAL = "interval"

# fixed odd multipliers for row hashing; any change alters only speed, never results
_HASH_MULT = np.random.default_rng(20240611).integers(1, 2**62, size=4096, dtype=np.int64) | 1


class Certificate(NamedTuple):
    kind: str
    lo: Optional[float] = None
    hi: Optional[float] = None

    @property
    def is_exact(self) -> bool:
        return self.kind == EXACT


@dataclass
class EngineConfig:
    capacity: int = 2_000_000
    beam_width: int = 100_000
    dedup_tol: float = 1e-10
    exact_or_fail: bool = False
    workers: Optional[int] = None
    chunk_size: int = 1 << 16

    def resolved_workers(self) -> int:
        if self.workers is not None:
            return max(1, int(self.workers))
        env = os.environ.get("MIRS_THREADS")
        if env:
            return max(1, int(env))
        return os.cpu_count() or 1


@dataclass
class MirsResult:
    """A computed sequence ``a_1..a_N`` with per-entry certificates and witnesses."""

    set_label: str
    horizon: int
    values: np.ndarray
    certificates: List[Certificate]
    witnesses: List[tuple]
    method: dict = field(default_factory=dict)

    def a(self, n: int) -> float:
        """``a_n`` with the convention ``a_0 = 1``."""
        return 1.0 if n == 0 else float(self.values[n - 1])

    def exact_prefix(self) -> int:
        """Number of leading entries certified exact."""
        k = 0
        for c in self.certificates:
            if not c.is_exact:
                break
            k += 1
        return k

    def with_values(self, values) -> "MirsResult":
        return MirsResult(self.set_label, self.horizon, np.asarray(values, dtype=float),
                          list(self.certificates), list(self.witnesses), dict(self.method))


class _WitnessTree:
    """Back pointers (parent index, letter) for every frontier level."""

    def __init__(self):
        self.parents: List[np.ndarray] = []
        self.letters: List[np.ndarray] = []

    def push(self, parents, letters):
        self.parents.append(parents)
        self.letters.append(letters)

    def witness(self, level: int, index: int) -> tuple:
        out = []
        for lv in range(level - 1, -1, -1):
            out.append(int(self.letters[lv][index]))
            index = int(self.parents[lv][index])
        return tuple(reversed(out))


@dataclass
class Frontier:
    """Deduplicated products of one length, ordered by their witnesses."""

    length: int
    states: np.ndarray
    exact: bool
    _tree: _WitnessTree = field(repr=False)

    def __len__(self):
        return len(self.states)

    def witness(self, index: int) -> tuple:
        return self._tree.witness(self.length, index)


def _dedup_keys(x: np.ndarray, tol: float) -> np.ndarray:
    flat = x.reshape(len(x), -1)
    scale = float(np.abs(flat).max()) if flat.size else 0.0
    # keep quantized keys inside int64; only matters for huge entries
    tol = max(tol, scale * 2.0**-60)
    return np.rint(flat / tol).astype(np.int64)


def unique_first(x: np.ndarray, tol: float) -> np.ndarray:
    """Indices (ascending) of the first member of every tolerance class of ``x``."""
    if len(x) <= 1:
        return np.arange(len(x))
    keys = _dedup_keys(x, tol)
    mult = _HASH_MULT[: keys.shape[1]]
    h = (keys * mult).sum(axis=1)
    order = np.argsort(h, kind="stable")
    hs = h[order]
    starts = np.ones(len(hs), dtype=bool)
    starts[1:] = hs[1:] != hs[:-1]
    group = np.cumsum(starts) - 1
    reps = order[starts]
    rep_of = np.empty(len(x), dtype=np.int64)
    rep_of[order] = reps[group]
    if not np.array_equal(keys, keys[rep_of]):
        # hash collision between distinct keys: fall back to a full row sort
        _, idx = np.unique(keys, axis=0, return_index=True)
        return np.sort(idx)
    return np.sort(reps)


def _beam(states: np.ndarray, width: int) -> np.ndarray:
    keep = [np.argsort(-op_norms(states), kind="stable")[:width]]
    cols = np.linalg.norm(states, axis=1)
    for j in range(cols.shape[1]):
        keep.append(np.argsort(-cols[:, j], kind="stable")[:width])
    return np.unique(np.concatenate(keep))


def _expand(states: np.ndarray, stack: np.ndarray, workers: int, chunk: int) -> np.ndarray:
    k, d = states.shape[0], states.shape[1]
    m = stack.shape[0]

    def run(lo):
        part = states[lo:lo + chunk]
        return np.matmul(part[:, None], stack[None]).reshape(-1, d, d)

    starts = range(0, k, chunk)
    if workers > 1 and k > chunk:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(lo) for lo in starts]
    out = np.concatenate(parts) if parts else np.zeros((0, d, d))
    assert out.shape[0] == k * m
    return out


def iterate_frontiers(mset: MatrixSet, horizon: int,
                      config: Optional[EngineConfig] = None) -> Iterator[Frontier]:
    """Yield the frontier for every length ``1..horizon``."""
    config = config or EngineConfig()
    if horizon < 1:
        raise DegenerateInput("horizon must be at least 1")
    stack = np.ascontiguousarray(mset.stack())
    m, d = stack.shape[0], stack.shape[1]
    workers = config.resolved_workers()
    tree = _WitnessTree()
    states = np.eye(d)[None]
    exact = True
    for n in range(1, horizon + 1):
        cands = _expand(states, stack, workers, config.chunk_size)
        keep = unique_first(cands, config.dedup_tol)
        if len(keep) > config.capacity:
            if config.exact_or_fail:
                raise CapacityExceeded(
                    f"frontier at length {n} has {len(keep)} states (capacity {config.capacity})"
                )
            keep = keep[_beam(cands[keep], config.beam_width)]
            exact = False
        states = np.ascontiguousarray(cands[keep])
        tree.push(keep // m, (keep % m).astype(np.int16))
        yield Frontier(n, states, exact, tree)


def _pick(norms: np.ndarray) -> int:
    top = norms.max()
    # lexicographically smallest witness among ties within 1e-12
    return int(np.flatnonzero(norms >= top - 1e-12 * max(top, 1.0))[0])


def compute_mirs(mset: MatrixSet, horizon: int,
                 config: Optional[EngineConfig] = None) -> MirsResult:
    """Compute ``a_1..a_N`` by frontier enumeration with deduplication."""
    config = config or EngineConfig()
    values, certs, wits, sizes = [], [], [], []
    for fr in iterate_frontiers(mset, horizon, config):
        norms = op_norms(fr.states)
        i = _pick(norms)
        values.append(float(norms[i]))
        certs.append(Certificate(EXACT if fr.exact else LOWER_BOUND))
        wits.append(fr.witness(i))
        sizes.append(len(fr))
    method = {
        "mode": "frontier",
        "dedup_tol": config.dedup_tol,
        "capacity": config.capacity,
        "beam_width": config.beam_width,
        "frontier_sizes": sizes,
    }
    return MirsResult(mset.name, horizon, np.array(values), certs, wits, method)


def mirs_upper_bound(result: MirsResult, horizon: Optional[int] = None) -> np.ndarray:
    """Upper bounds ``u_n >= a_n`` from submultiplicativity over the certified prefix."""
    horizon = horizon or result.horizon
    known = {}
    for n, c in enumerate(result.certificates, start=1):
        if c.is_exact:
            known[n] = result.values[n - 1]
        elif c.kind == INTERVAL and c.hi is not None:
            known[n] = c.hi
    if 1 not in known:
        raise InsufficientPrefix("the first entry must be exact (or an interval)")
    u = np.empty(horizon + 1)
    u[0] = 1.0
    for n in range(1, horizon + 1):
        if n in known:
            u[n] = known[n]
        else:
            u[n] = min(u[k] * u[n - k] for k in range(1, n))
    return u[1:]


def evaluate_witness(mset: MatrixSet, witness: Sequence[int]) -> float:
    """Norm of the ordered product ``A_{i_1} A_{i_2} ... A_{i_n}`` (identity if empty)."""
    p = np.eye(mset.dim)
    for i in witness:
        if not 0 <= int(i) < len(mset):
            raise IndexOutOfRange(f"index {i} outside 0..{len(mset) - 1}")
        p = p @ mset[int(i)]
    return op_norm(p)


def product(mset: MatrixSet, witness: Sequence[int]) -> np.ndarray:
    p = np.eye(mset.dim)
    for i in witness:
        p = p @ mset[int(i)]
    return p


# ---------------------------------------------------------------------------
# exact sequence for the three-dimensional projector / shear-rotation pair
# ---------------------------------------------------------------------------

def _hull_2d(pts: np.ndarray) -> np.ndarray:
    """Indices of the convex hull vertices of 2-D points (monotone chain)."""
    if len(pts) <= 2:
        return np.arange(len(pts))
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    scale = float(np.abs(pts).max()) or 1.0
    eps = 1e-14 * scale * scale

    def cross(o, a, b):
        return (pts[a, 0] - pts[o, 0]) * (pts[b, 1] - pts[o, 1]) - \
               (pts[a, 1] - pts[o, 1]) * (pts[b, 0] - pts[o, 0])

    lower, upper = [], []
    for i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= eps:
            lower.pop()
        lower.append(i)
    for i in order[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= eps:
            upper.pop()
        upper.append(i)
    return np.array(sorted(set(lower[:-1] + upper[:-1])))


def pj_structure(mset: MatrixSet) -> np.ndarray:
    """Check that ``mset`` is the projector/shear-rotation pair; return the shear-rotation."""
    if len(mset) != 2 or mset.dim != 3:
        raise DegenerateInput("expected two 3x3 matrices")
    a0, a1 = mset[0], mset[1]
    if not np.array_equal(a0, np.diag([1.0, 1.0, 0.0])):
        raise DegenerateInput("first member must be diag(1, 1, 0)")
    s, c = a1[2, 1], a1[1, 1]
    expected = np.array([[1, s, c - 1], [0, c, -s], [0, s, c]])
    if not np.allclose(a1, expected, rtol=0, atol=1e-14) or abs(s * s + c * c - 1) > 1e-14:
        raise DegenerateInput("second member is not a shear-rotation of the expected shape")
    return a1


def compute_mirs_pj(mset: MatrixSet, horizon: int) -> MirsResult:
    """Exact ``a_n`` for the projector/shear-rotation pair, far beyond frontier reach.

    Every product of ``A0`` (idempotent) and ``A1`` is either ``A1^n`` or
    ``A1^k1 M(w, p) A1^k2`` with ``M(w, p) = [[1, w, 0], [0, p, 0], [0, 0, 0]]``,
    where ``(w, p)`` comes from a chain of blocks ``A0 A1^r A0`` and each block
    acts on ``(w, p)`` by the affine map ``(w, p) -> (s_r + c_r w, c_r p)``.  A
    block of ``r`` rotations costs ``r + 1`` letters.  The norm is convex in
    ``(w, p)`` for fixed ``k1, k2``, so it suffices to track the vertices of
    the convex hull of all ``(w, p)`` reachable within a given cost; affine
    images of hulls are hulls of images, so the recursion runs on vertices only.
    """
    a1 = pj_structure(mset)
    N = int(horizon)
    if N < 1:
        raise DegenerateInput("horizon must be at least 1")
    powers = [np.eye(3)]
    for _ in range(N):
        powers.append(powers[-1] @ a1)
    powers = np.array(powers)
    s_r, c_r = powers[:, 0, 1], powers[:, 1, 1]

    # hull vertices per cost, with provenance (parent cost, parent vertex, r)
    hulls = [np.array([[0.0, 1.0]])]
    prov = [np.array([[-1, -1, 0]])]
    for c in range(1, N):
        pts = [hulls[c - 1]]
        src = [np.column_stack([np.full(len(hulls[c - 1]), c - 1),
                                np.arange(len(hulls[c - 1])),
                                np.zeros(len(hulls[c - 1]), dtype=int)])]
        for r in range(1, c):
            h = hulls[c - 1 - r]
            pts.append(np.column_stack([s_r[r] + c_r[r] * h[:, 0], c_r[r] * h[:, 1]]))
            src.append(np.column_stack([np.full(len(h), c - 1 - r), np.arange(len(h)),
                                        np.full(len(h), r)]))
        pts = np.concatenate(pts)
        src = np.concatenate(src)
        idx = _hull_2d(pts)
        hulls.append(pts[idx])
        prov.append(src[idx])

    # left factors enter through the Gram matrix of their first two columns,
    # right factors through the Gram matrix of their first two rows
    x2 = powers[:, :, :2]
    gl = np.einsum("kij,kil->kjl", x2, x2)
    y1, y2 = powers[:, 0, :], powers[:, 1, :]
    ra = np.einsum("ki,ki->k", y1, y1)
    rb = np.einsum("ki,ki->k", y1, y2)
    re = np.einsum("ki,ki->k", y2, y2)

    best = np.array([op_norm(powers[n]) for n in range(N + 1)])
    arg = [None] * (N + 1)
    for c in range(N):
        w = hulls[c][:, 0][None, :]
        p = hulls[c][:, 1][None, :]
        for s in range(N - c):
            n = c + s + 1
            k1 = np.arange(s + 1)
            k2 = s - k1
            g11, g12, g22 = gl[k1, 0, 0][:, None], gl[k1, 0, 1][:, None], gl[k1, 1, 1][:, None]
            a, b, e = ra[k2][:, None], rb[k2][:, None], re[k2][:, None]
            n11 = a + 2 * w * b + w * w * e
            n12 = p * (b + w * e)
            n22 = p * p * e
            t = n11 * g11 + 2 * n12 * g12 + n22 * g22
            det = (p * p) * (a * e - b * b) * (g11 * g22 - g12 * g12)
            lam = 0.5 * (t + np.sqrt(np.maximum(t * t - 4 * det, 0.0)))
            vals = np.sqrt(np.maximum(lam, 0.0))
            flat = int(np.argmax(vals))
            v = vals.flat[flat]
            if v > best[n]:
                i, j = divmod(flat, vals.shape[1])
                best[n] = v
                arg[n] = (c, int(j), int(k1[i]), int(k2[i]))

    values, wits = [], []
    for n in range(1, N + 1):
        if arg[n] is None:
            word = (1,) * n
        else:
            c, j, k1, k2 = arg[n]
            comp = []
            while c > 0:
                pc, pj, r = prov[c][j]
                if r > 0:
                    comp.append(int(r))
                c, j = int(pc), int(pj)
            comp.reverse()
            pad = n - (k1 + k2 + 1 + sum(r + 1 for r in comp))
            word = [1] * k1 + [0] * (1 + pad)
            for r in comp:
                word += [1] * r + [0]
            word += [1] * k2
            word = tuple(word)
        wits.append(word)
        values.append(evaluate_witness(mset, word))
    method = {"mode": "pj-normal-form", "hull_sizes": [len(h) for h in hulls]}
    return MirsResult(mset.name, N, np.array(values),
                      [Certificate(EXACT)] * N, wits, method)
