"""
Matrix families with known marginal instability behaviour.

Each builder returns a :class:`~mirs.linalg.MatrixSet` (or a small wrapper
around one).  Closure operations: Kronecker products and powers multiply
sequences termwise, block upper-triangular combination takes their termwise
maximum up to a coupling sum, and the pair lift realises a sequence of an
``m``-member set with just two matrices.  Concrete families: the 3x3 projector
/ shear-rotation pair, its 6x6 lift, and a finite grid through the continuous
family ``[[1, t], [0, 1 - t^(1/(1-alpha))]]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import AlphaOutOfRange, DegenerateInput, DimensionMismatch, SizeOverflow
from .linalg import MAX_DIM, MatrixSet, as_matrix, block_diag, block_upper, kron, op_norm

ALPHA_SNAP = 1e-6


def _require_unit_jsr(*sets: MatrixSet):
    for s in sets:
        if s.claimed_jsr is not None and abs(s.claimed_jsr - 1.0) > 1e-12:
            raise DegenerateInput(f"{s.name}: construction needs claimed_jsr = 1, got {s.claimed_jsr}")


def kron_product_set(a: MatrixSet, b: MatrixSet, *, max_dim: int = MAX_DIM) -> MatrixSet:
    """All pairwise Kronecker products ``A_i (x) B_j``, ordered with ``i`` major.

    With both sequences computed in the Euclidean norm, ``c_n = a_n * b_n``.
    """
    _require_unit_jsr(a, b)
    members, labels = [], []
    for (la, ma), (lb, mb) in itertools.product(zip(a.labels, a), zip(b.labels, b)):
        members.append(kron(ma, mb, max_dim=max_dim))
        labels.append(f"{la}x{lb}")
    return MatrixSet.of(members, labels, 1.0, f"{a.name}x{b.name}")


def kron_power_set(a: MatrixSet, k: int, *, max_dim: int = MAX_DIM) -> MatrixSet:
    """``{A^(x)k : A in a}``; its sequence is ``a_n ** k``."""
    if k < 1:
        raise DegenerateInput("power must be at least 1")
    _require_unit_jsr(a)
    if a.dim ** k > max_dim:
        raise SizeOverflow(f"{a.dim}^{k} exceeds the dimension cap {max_dim}")
    members = []
    for m in a:
        p = m
        for _ in range(k - 1):
            p = kron(p, m, max_dim=max_dim)
        members.append(p)
    return MatrixSet.of(members, a.labels, 1.0, f"{a.name}^{k}")


@dataclass(frozen=True)
class BlockCombineSpec:
    """Upper set ``B``, lower set ``C`` and couplers ``D_i`` sharing one index set."""

    upper: MatrixSet
    lower: MatrixSet
    couplers: tuple
    K0: Optional[float] = None

    def __post_init__(self):
        couplers = tuple(as_matrix(d) for d in self.couplers)
        if not len(self.upper) == len(self.lower) == len(couplers):
            raise DimensionMismatch("upper, lower and couplers need the same number of members")
        for d in couplers:
            if d.shape != (self.upper.dim, self.lower.dim):
                raise DimensionMismatch(
                    f"couplers must be {self.upper.dim}x{self.lower.dim}, got {d.shape}"
                )
        k0 = max(op_norm(d) for d in couplers)
        if self.K0 is None:
            object.__setattr__(self, "K0", k0)
        elif self.K0 < k0 - 1e-12:
            raise DegenerateInput(f"K0={self.K0} is below max coupler norm {k0}")
        object.__setattr__(self, "couplers", couplers)

    @classmethod
    def zero_coupled(cls, upper: MatrixSet, lower: MatrixSet) -> "BlockCombineSpec":
        z = np.zeros((upper.dim, lower.dim))
        return cls(upper, lower, (z,) * len(upper))


def block_combine(spec: BlockCombineSpec) -> MatrixSet:
    """Members ``[[B_i, D_i], [0, C_i]]``; the spectral radius is the larger of the two blocks'."""
    _require_unit_jsr(spec.upper, spec.lower)
    members = [block_upper(b, d, c) for b, d, c in zip(spec.upper, spec.couplers, spec.lower)]
    return MatrixSet.of(members, spec.upper.labels, 1.0, f"[{spec.upper.name}|{spec.lower.name}]")


def sandwich_bounds(a: np.ndarray, b: np.ndarray, k0: float):
    """Lower and upper bounds on ``c_n`` for a block combination, from ``a`` and ``b``.

    ``max(a_n, b_n) <= c_n <= max(a_n, b_n) + K0 * sum_{k=1}^n a_{k-1} b_{n-k}``
    with ``a_0 = b_0 = 1``.
    """
    a = np.concatenate([[1.0], np.asarray(a, dtype=float)])
    b = np.concatenate([[1.0], np.asarray(b, dtype=float)])
    n = len(a) - 1
    lo = np.maximum(a[1:], b[1:])
    conv = np.array([np.dot(a[:k], b[k - 1::-1]) for k in range(1, n + 1)])
    return lo, lo + k0 * conv


@dataclass(frozen=True)
class PairLift:
    """Two ``md x md`` matrices whose sequence is sandwiched by that of ``source``.

    ``B0`` has identity blocks at block ``(0, m-1)`` and on the block
    subdiagonal; ``B1`` is block diagonal with the source members in order.
    """

    source: MatrixSet
    B0: np.ndarray
    B1: np.ndarray

    @property
    def m(self) -> int:
        return len(self.source)

    @property
    def d(self) -> int:
        return self.source.dim

    def as_set(self) -> MatrixSet:
        return MatrixSet.of([self.B0, self.B1], ("B0", "B1"), 1.0, f"lift({self.source.name})")


def pair_lift(a: MatrixSet, *, max_dim: int = MAX_DIM) -> PairLift:
    _require_unit_jsr(a)
    m, d = len(a), a.dim
    if m * d > max_dim:
        raise SizeOverflow(f"lift would be {m * d}x{m * d} (cap {max_dim})")
    b0 = np.zeros((m * d, m * d))
    eye = np.eye(d)
    b0[:d, (m - 1) * d:] = eye
    for i in range(1, m):
        b0[i * d:(i + 1) * d, (i - 1) * d:i * d] = eye
    b0.flags.writeable = False
    return PairLift(a, b0, block_diag(list(a)))


def pj_gamma(alpha: float) -> float:
    """Diophantine exponent ``alpha / (1 - 2 alpha)`` for ``alpha`` in ``[1/3, 1/2)``.

    Values within ``ALPHA_SNAP`` below 1/3 (e.g. ``0.333333``) are read as 1/3.
    """
    alpha = check_pj_alpha(alpha)
    if alpha == Fraction(1, 3):
        return 1.0
    return alpha / (1 - 2 * alpha)


def check_pj_alpha(alpha: float):
    if not np.isfinite(alpha):
        raise AlphaOutOfRange(f"alpha must be finite, got {alpha}")
    third = 1.0 / 3.0
    if third - ALPHA_SNAP <= alpha <= third:
        return Fraction(1, 3)
    if not third <= alpha < 0.5:
        raise AlphaOutOfRange(f"alpha must lie in [1/3, 1/2), got {alpha}")
    return float(alpha)


def pj_matrices(alpha: float, theta: float) -> MatrixSet:
    """The pair ``A0 = diag(1, 1, 0)`` and the shear-rotation ``A1`` at angle ``theta``.

    ``alpha`` only selects the admissible range; the growth exponent is carried by
    ``theta``, which should come from :func:`mirs.diophantine.build_theta` with
    ``gamma = pj_gamma(alpha)``.
    """
    check_pj_alpha(alpha)
    s, c = np.sin(theta), np.cos(theta)
    a0 = np.diag([1.0, 1.0, 0.0])
    a1 = np.array([[1.0, s, c - 1.0], [0.0, c, -s], [0.0, s, c]])
    return MatrixSet.of([a0, a1], ("A0", "A1"), 1.0, "pj")


def harvey_pair(theta: float) -> MatrixSet:
    """The explicit 6x6 pair: a block swap and ``diag(A0, A1)``."""
    s, c = np.sin(theta), np.cos(theta)
    b0 = np.zeros((6, 6))
    b0[:3, 3:] = np.eye(3)
    b0[3:, :3] = np.eye(3)
    b1 = np.zeros((6, 6))
    b1[0, 0] = b1[1, 1] = 1.0
    b1[3:, 3:] = [[1.0, s, c - 1.0], [0.0, c, -s], [0.0, s, c]]
    return MatrixSet.of([b0, b1], ("B0", "B1"), 1.0, "harvey")


def gz_family(alpha: float, grid_points: int) -> MatrixSet:
    """Uniform grid of the continuous family ``[[1, t], [0, 1 - t^(1/(1-alpha))]]``, t in [0, 1].

    The finite grid is a subset of the compact family, so its sequence is a lower
    bound for the continuous one.
    """
    if not 0 < alpha < 1:
        raise AlphaOutOfRange(f"alpha must lie in (0, 1), got {alpha}")
    if grid_points < 2:
        raise DegenerateInput("grid_points must be at least 2")
    ts = np.linspace(0.0, 1.0, grid_points)
    members = [np.array([[1.0, t], [0.0, 1.0 - t ** (1.0 / (1.0 - alpha))]]) for t in ts]
    labels = [f"t{i}" for i in range(grid_points)]
    return MatrixSet.of(members, labels, 1.0, f"gz{grid_points}")


def pj_triangular_split(mset: MatrixSet) -> BlockCombineSpec:
    """Split a 3x3 upper block-triangular pair as ``[[B_i, D_i], [0, C_i]]`` with 1x1 ``B_i``."""
    if mset.dim != 3:
        raise DimensionMismatch("expected 3x3 members")
    for m in mset:
        if np.any(m[1:, 0] != 0):
            raise DegenerateInput("members are not block upper-triangular in the 1+2 split")
    upper = MatrixSet.of([m[:1, :1] for m in mset], mset.labels, 1.0, "upper")
    lower = MatrixSet.of([m[1:, 1:] for m in mset], mset.labels, 1.0, "lower")
    return BlockCombineSpec(upper, lower, tuple(m[:1, 1:] for m in mset))


def random_set(rng: np.random.Generator, members: int = 2, dim: int = 2,
               scale: float = 1.0) -> MatrixSet:
    """Gaussian members rescaled so the largest member norm equals ``scale``."""
    mats = rng.standard_normal((members, dim, dim))
    mats *= scale / max(op_norm(m) for m in mats)
    return MatrixSet.of(list(mats), (), None, "random")


def named_family(name: str, *, alpha: float = 1 / 3, theta: Optional[float] = None,
                 grid_points: int = 16, digits: int = 120) -> MatrixSet:
    """Resolve a family by name: ``pj``, ``harvey``, ``lift`` (lift of pj), ``gz``."""
    from .diophantine import build_theta

    if name == "gz":
        return gz_family(alpha if alpha is not None else 0.5, grid_points)
    if theta is None:
        gamma = pj_gamma(alpha if name == "pj" else 1 / 3)
        theta = build_theta(gamma, 2, digits=digits, kappa_range=None).theta
    if name == "pj":
        return pj_matrices(alpha, theta)
    if name == "harvey":
        return harvey_pair(theta)
    if name == "lift":
        return pair_lift(pj_matrices(1 / 3, theta)).as_set()
    raise DegenerateInput(f"unknown family {name!r}")
