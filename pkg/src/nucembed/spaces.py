"""Finite mixed-norm sequence spaces l_q(beta_j l_p^{M_j}).

Blocks are stored flat: a vector over blocks ``M = (M_0, ..., M_n)`` is a
1-d array of length ``N = sum(M)`` together with the block list, matching
the usual flattening ``I_j = {alpha_j + 1, ..., alpha_{j+1}}``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exponents import Exponent, ExponentError, as_exponent, conjugate

__all__ = [
    "GrowthFamily",
    "MixedSpaceSpec",
    "BlockVector",
    "SpecError",
    "ZeroVectorWarning",
    "lp_norm",
    "mixed_norm",
    "batch_mixed_norm",
    "dual_spec",
    "holder_pairing",
    "holder_extremizer",
]


class SpecError(ValueError):
    """Invalid space specification or non-conforming vector."""


class ZeroVectorWarning(UserWarning):
    """The Hoelder extremizer of the zero vector is the zero vector."""


@dataclass(frozen=True)
class GrowthFamily:
    """The sequence ``g(j) = 2**(geo*j) * (j+1)**poly``, ``j >= 0``."""

    geo: Fraction = Fraction(0)
    poly: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "geo", Fraction(self.geo))
        object.__setattr__(self, "poly", Fraction(self.poly))

    def __call__(self, j: int) -> float:
        return 2.0 ** (float(self.geo) * j) * (j + 1.0) ** float(self.poly)

    def log2(self, j: int) -> float:
        return float(self.geo) * j + float(self.poly) * math.log2(j + 1)

    def block_size(self, j: int) -> int:
        """Integerized value ``round(g(j))``, used when the family counts blocks."""
        n = round(self(j))
        if n < 1:
            raise SpecError(f"block family {self} gives round(g({j})) = {n} < 1")
        return n

    def check_block_family(self) -> None:
        # round(g(j)) >= 1 for every j
        if self.geo < 0 or (self.geo == 0 and self.poly < 0):
            raise SpecError(f"block family {self} eventually drops below 1")
        if self.poly < 0:
            # minimum of geo*j + poly*log2(j+1) is near j+1 = -poly/(geo*ln 2)
            jstar = -float(self.poly) / (float(self.geo) * math.log(2)) - 1
            for j in {0, max(0, math.floor(jstar)), max(0, math.ceil(jstar))}:
                self.block_size(j)

    def __str__(self) -> str:
        return f"2^({self.geo}*j)*(j+1)^({self.poly})"


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class MixedSpaceSpec:
    """The space ``l_q(beta_j l_p^{M_j})``.

    ``blocks`` and ``weights`` are either finite tuples (finite mode) or
    :class:`GrowthFamily` instances (symbolic mode).  ``weights=None``
    means unit weights.
    """

    q: Exponent
    p: Exponent
    blocks: tuple | GrowthFamily
    weights: tuple | GrowthFamily | None = None

    def __post_init__(self):
        object.__setattr__(self, "q", as_exponent(self.q))
        object.__setattr__(self, "p", as_exponent(self.p))
        blocks = self.blocks
        if isinstance(blocks, GrowthFamily):
            blocks.check_block_family()
        else:
            blocks = tuple(int(m) for m in blocks)
            if not blocks:
                raise SpecError("at least one block is required")
            if any(m < 1 for m in blocks):
                raise SpecError(f"block sizes must be >= 1, got {blocks}")
            object.__setattr__(self, "blocks", blocks)
        w = self.weights
        if w is not None and not isinstance(w, GrowthFamily):
            w = tuple(float(b) for b in w)
            if isinstance(blocks, tuple) and len(w) != len(blocks):
                raise SpecError(f"{len(w)} weights for {len(blocks)} blocks")
            if any(not (b > 0 and math.isfinite(b)) for b in w):
                raise SpecError(f"weights must be positive and finite, got {w}")
            object.__setattr__(self, "weights", w)

    @property
    def is_finite(self) -> bool:
        return isinstance(self.blocks, tuple) and not isinstance(self.weights, GrowthFamily)

    @property
    def dim(self) -> int:
        self._need_finite()
        return sum(self.blocks)

    @property
    def offsets(self) -> np.ndarray:
        """Start index of each block in the flat layout."""
        self._need_finite()
        return np.concatenate(([0], np.cumsum(self.blocks)[:-1])).astype(np.intp)

    def weight_array(self) -> np.ndarray:
        self._need_finite()
        if self.weights is None:
            return np.ones(len(self.blocks))
        return np.asarray(self.weights, dtype=float)

    def with_exponents(self, q, p, weights="same") -> "MixedSpaceSpec":
        return MixedSpaceSpec(q, p, self.blocks, self.weights if weights == "same" else weights)

    def _need_finite(self):
        if not self.is_finite:
            raise SpecError("operation needs a finite spec (explicit blocks and weights)")


class BlockVector:
    """Ragged real vector conforming to a block list; read-only."""

    __slots__ = ("blocks", "values")

    def __init__(self, blocks: Sequence[int], values):
        blocks = tuple(int(m) for m in blocks)
        values = np.array(values, dtype=float).ravel()
        if values.size != sum(blocks):
            raise SpecError(f"{values.size} entries do not fit blocks {blocks}")
        values.setflags(write=False)
        self.blocks = blocks
        self.values = values

    @classmethod
    def from_nested(cls, nested) -> "BlockVector":
        nested = [list(b) for b in nested]
        return cls([len(b) for b in nested], [v for b in nested for v in b])

    @classmethod
    def zeros(cls, blocks) -> "BlockVector":
        return cls(blocks, np.zeros(sum(blocks)))

    @classmethod
    def ones(cls, blocks) -> "BlockVector":
        return cls(blocks, np.ones(sum(blocks)))

    def block(self, j: int) -> np.ndarray:
        start = sum(self.blocks[:j])
        return self.values[start:start + self.blocks[j]]

    def to_nested(self) -> list[list[float]]:
        return [self.block(j).tolist() for j in range(len(self.blocks))]

    def __len__(self):
        return self.values.size

    def __mul__(self, c) -> "BlockVector":
        return BlockVector(self.blocks, self.values * c)

    __rmul__ = __mul__

    def __add__(self, other: "BlockVector") -> "BlockVector":
        if other.blocks != self.blocks:
            raise SpecError("block mismatch")
        return BlockVector(self.blocks, self.values + other.values)

    def __repr__(self):
        return f"BlockVector({self.to_nested()})"


def _coerce(spec: MixedSpaceSpec, x) -> np.ndarray:
    if isinstance(x, BlockVector):
        if x.blocks != spec.blocks:
            raise SpecError(f"vector blocks {x.blocks} do not match spec blocks {spec.blocks}")
        return x.values
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size != spec.dim:
        raise SpecError(f"vector of length {arr.size} does not match dimension {spec.dim}")
    return arr


def lp_norm(values, r: Exponent) -> float:
    """``(sum |v|^r)^(1/r)``, sup for ``r = inf``; scaled to avoid overflow."""
    a = np.abs(np.asarray(values, dtype=float))
    if a.size == 0:
        return 0.0
    m = float(a.max())
    if m == 0.0 or r.is_inf:
        return m
    if r.inv == 1:
        return math.fsum(a)
    rf = float(r)
    return m * math.fsum((a / m) ** rf) ** (1.0 / rf)


def mixed_norm(spec: MixedSpaceSpec, x) -> float:
    """Norm (quasi-norm for exponents below 1) of ``x`` in ``spec``."""
    spec._need_finite()
    v = _coerce(spec, x)
    w = spec.weight_array()
    inner = [lp_norm(v[o:o + m], spec.p) for o, m in zip(spec.offsets, spec.blocks)]
    return lp_norm(w * np.asarray(inner), spec.q)


def batch_mixed_norm(spec: MixedSpaceSpec, X: np.ndarray) -> np.ndarray:
    """Row-wise :func:`mixed_norm` for a 2-d array; uncompensated, for search loops."""
    X = np.abs(np.atleast_2d(np.asarray(X, dtype=float)))
    off = spec.offsets
    inner = _batch_lp(X, off, spec.p)
    return _batch_lp(inner * spec.weight_array(), None, spec.q)


def _batch_lp(A: np.ndarray, offsets, r: Exponent) -> np.ndarray:
    # A >= 0; reduce along axis 1, per block if offsets given
    def red(B, fn):
        return fn.reduceat(B, offsets, axis=1) if offsets is not None else fn.reduce(B, axis=1, keepdims=True)

    m = red(A, np.maximum)
    if r.is_inf:
        out = m
    else:
        rf = float(r)
        full = np.repeat(m, np.diff(np.append(offsets, A.shape[1])), axis=1) if offsets is not None else m
        with np.errstate(invalid="ignore", divide="ignore"):
            scaled = np.where(full > 0, A / np.where(full > 0, full, 1.0), 0.0)
        s = red(scaled ** rf, np.add)
        out = m * s ** (1.0 / rf)
    return out if offsets is not None else out[:, 0]


def dual_spec(spec: MixedSpaceSpec) -> MixedSpaceSpec:
    """``l_{q'}(beta_j^{-1} l_{p'}^{M_j})``, the dual under the plain pairing."""
    spec._need_finite()
    w = None if spec.weights is None else tuple(1.0 / b for b in spec.weights)
    return MixedSpaceSpec(conjugate(spec.q), conjugate(spec.p), spec.blocks, w)


def holder_pairing(spec: MixedSpaceSpec, x, y) -> float:
    """``sum_{j,k} x_{j,k} y_{j,k}``."""
    return math.fsum(_coerce(spec, x) * _coerce(spec, y))


def _unit_dual_direction(a: np.ndarray, r: Exponent) -> np.ndarray:
    """Unit vector of l_{r'} attaining ``<a, u> = ||a||_r`` for ``a`` with ``||a||_r > 0``."""
    s = np.sign(a)
    if r.inv == 1:
        return s
    absa = np.abs(a)
    if r.is_inf:
        u = np.zeros_like(a)
        k = int(np.argmax(absa))  # lowest index wins ties
        u[k] = s[k]
        return u
    nrm = lp_norm(a, r)
    return s * (absa / nrm) ** (float(r) - 1.0)


def holder_extremizer(spec: MixedSpaceSpec, x) -> BlockVector:
    """A unit vector ``y`` of the dual space with ``<x, y> = ||x||``.

    Within a block the pattern is ``sign(x)|x|^{p-1}``, across blocks
    ``(beta_j ||x_j||_p)^{q-1}``.  At ``p = inf`` (or ``q = inf``) all mass
    goes to the first maximizing coordinate (block).  The zero vector maps
    to zero with a :class:`ZeroVectorWarning`.
    """
    spec._need_finite()
    spec.p.require_banach("p")
    spec.q.require_banach("q")
    v = _coerce(spec, x)
    blocks = spec.blocks
    if not np.any(v):
        warnings.warn("zero vector has no norming functional; returning 0", ZeroVectorWarning, stacklevel=2)
        return BlockVector.zeros(blocks)
    w = spec.weight_array()
    offs = spec.offsets
    inner = np.array([lp_norm(v[o:o + m], spec.p) for o, m in zip(offs, blocks)])
    outer = _unit_dual_direction(w * inner, spec.q)
    y = np.zeros_like(v)
    for j, (o, m) in enumerate(zip(offs, blocks)):
        if outer[j] == 0.0 or inner[j] == 0.0:
            continue
        y[o:o + m] = w[j] * outer[j] * _unit_dual_direction(v[o:o + m], spec.p)
    return BlockVector(blocks, y)
