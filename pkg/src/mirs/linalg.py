"""
Small dense real matrices: validation, operator norms, spectral radii and the
structural assembly helpers (Kronecker products, block upper-triangular
matrices) used by every construction in the package.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  Everything
returned from this module is a fresh array flagged read-only, so values can be
shared between threads without copying.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DegenerateInput, DimensionMismatch, SizeOverflow

#: Largest matrix dimension any constructor will produce.
MAX_DIM = 64


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def as_matrix(data, *, copy: bool = True) -> np.ndarray:
    """Validate ``data`` as a finite 2-D float64 matrix and return it read-only."""
    a = np.array(data, dtype=np.float64, copy=copy)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DegenerateInput("matrix entries must be finite")
    return _frozen(a)


def op_norm(m) -> float:
    """Euclidean operator norm (largest singular value); 0 for the zero matrix."""
    m = np.asarray(m, dtype=np.float64)
    if not m.any():
        return 0.0
    return float(np.linalg.norm(m, 2))


def op_norms(stack: np.ndarray) -> np.ndarray:
    """Operator norms of a stack of matrices with shape ``(k, r, c)``."""
    stack = np.asarray(stack, dtype=np.float64)
    if stack.shape[0] == 0:
        return np.zeros(0)
    return np.linalg.norm(stack, 2, axis=(1, 2))


def spectral_radius(m) -> float:
    """Largest eigenvalue modulus of a square matrix."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"spectral radius needs a square matrix, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DegenerateInput("non-finite entries; pre-scale the matrix")
    return float(np.abs(np.linalg.eigvals(m)).max())


def spectral_radii(stack: np.ndarray) -> np.ndarray:
    """Spectral radii of a stack of square matrices with shape ``(k, d, d)``."""
    stack = np.asarray(stack, dtype=np.float64)
    if stack.shape[0] == 0:
        return np.zeros(0)
    return np.abs(np.linalg.eigvals(stack)).max(axis=-1)


def kron(a, b, *, max_dim: int = MAX_DIM) -> np.ndarray:
    """Kronecker product: block ``(i, j)`` of the result is ``a[i, j] * b``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise SizeOverflow(f"Kronecker product would be {rows}x{cols} (cap {max_dim})")
    return _frozen(np.kron(a, b))


def block_upper(a, d, b) -> np.ndarray:
    """Assemble ``[[a, d], [0, b]]`` from square ``a`` (d1), ``b`` (d2) and ``d`` (d1 x d2)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"upper-left block must be square, got {a.shape}")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise DimensionMismatch(f"lower-right block must be square, got {b.shape}")
    if d.shape != (a.shape[0], b.shape[0]):
        raise DimensionMismatch(
            f"coupling block must be {a.shape[0]}x{b.shape[0]}, got {d.shape}"
        )
    zero = np.zeros((b.shape[0], a.shape[0]))
    return _frozen(np.block([[a, d], [zero, b]]))


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Block-diagonal matrix with the given square blocks, in order."""
    sizes = [np.asarray(x).shape[0] for x in blocks]
    out = np.zeros((sum(sizes), sum(sizes)))
    i = 0
    for blk, s in zip(blocks, sizes):
        out[i:i + s, i:i + s] = blk
        i += s
    return _frozen(out)


def rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return _frozen(np.array([[c, -s], [s, c]]))


def jordan_block(d: int, eigenvalue: float = 1.0) -> np.ndarray:
    j = eigenvalue * np.eye(d) + np.eye(d, k=1)
    return _frozen(j)


@dataclass(frozen=True)
class MatrixSet:
    """A finite labelled family of square matrices of one shared dimension.

    ``claimed_jsr`` records the joint spectral radius the caller asserts for the
    family (``None`` when unknown); it is metadata and is never enforced.
    """

    members: tuple
    labels: tuple = ()
    claimed_jsr: Optional[float] = None
    name: str = "set"
    _stack: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        members = tuple(as_matrix(m) for m in self.members)
        if not members:
            raise DegenerateInput("a matrix set needs at least one member")
        d = members[0].shape[0]
        for m in members:
            if m.shape != (d, d):
                raise DimensionMismatch(
                    f"all members must be {d}x{d}; got {m.shape[0]}x{m.shape[1]}"
                )
        labels = tuple(self.labels) if self.labels else tuple(f"A{i}" for i in range(len(members)))
        if len(labels) != len(members):
            raise DimensionMismatch("one label per member is required")
        if len(set(labels)) != len(labels):
            raise DegenerateInput(f"labels must be unique: {labels}")
        if self.claimed_jsr is not None and not self.claimed_jsr > 0:
            raise DegenerateInput("claimed_jsr must be positive when given")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_stack", _frozen(np.stack(members)))

    @classmethod
    def of(cls, members: Iterable, labels: Iterable[str] = (), claimed_jsr=None, name="set"):
        return cls(tuple(members), tuple(labels), claimed_jsr, name)

    @property
    def dim(self) -> int:
        return self.members[0].shape[0]

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.members[i]

    def __iter__(self):
        return iter(self.members)

    def stack(self) -> np.ndarray:
        """All members as one read-only array of shape ``(m, d, d)``."""
        return self._stack

    def scaled(self, factor: float, claimed_jsr=None) -> "MatrixSet":
        return MatrixSet(
            tuple(factor * m for m in self.members), self.labels, claimed_jsr, self.name
        )
