"""Closed-form operator and nuclear norms of diagonal operators.

Every operator here acts between unit-weight mixed spaces sharing the same
block list.  Weighted embeddings ``id_beta`` are handled through their
diagonal form ``lambda_l = beta_j^{-1}`` for ``l`` in block ``j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exponents import INF, ONE, Exponent, ExponentError, as_exponent, star_exponent, tong_exponent
from .spaces import BlockVector, GrowthFamily, MixedSpaceSpec, SpecError, lp_norm, mixed_norm

__all__ = [
    "DiagonalOperator",
    "DenseOperator",
    "NuclearCertificate",
    "EmbeddingNorm",
    "diag_op_norm_exact",
    "diag_nuclear_exact",
    "tong_diag_nuclear",
    "nuclear_from_sup_source",
    "embedding_nuclear_norm",
    "diagonal_part",
    "factorized_nuclear_upper",
    "rank_one_upper",
]


def _unit(spec: MixedSpaceSpec) -> MixedSpaceSpec:
    if not spec.is_finite:
        raise SpecError("diagonal operators need finite block lists")
    if spec.weights is not None and any(w != 1.0 for w in spec.weights):
        raise SpecError("diagonal operators act between unit-weight spaces")
    return spec


@dataclass(frozen=True)
class DiagonalOperator:
    """``x -> (lambda_k x_k)`` from ``src`` to ``dst``."""

    lam: BlockVector
    src: MixedSpaceSpec
    dst: MixedSpaceSpec

    def __post_init__(self):
        _unit(self.src), _unit(self.dst)
        lam = self.lam
        if not isinstance(lam, BlockVector):
            lam = BlockVector(self.src.blocks, lam)
            object.__setattr__(self, "lam", lam)
        if self.src.blocks != self.dst.blocks or lam.blocks != self.src.blocks:
            raise SpecError(
                f"block mismatch: lambda {lam.blocks}, src {self.src.blocks}, dst {self.dst.blocks}"
            )

    @classmethod
    def between(cls, lam, blocks, p1, q1, p2, q2) -> "DiagonalOperator":
        blocks = tuple(blocks)
        return cls(BlockVector(blocks, np.ravel(lam) if not isinstance(lam, BlockVector) else lam.values),
                   MixedSpaceSpec(q1, p1, blocks), MixedSpaceSpec(q2, p2, blocks))

    @property
    def blocks(self):
        return self.src.blocks

    def scaled(self, c: float) -> "DiagonalOperator":
        return DiagonalOperator(self.lam * c, self.src, self.dst)

    def matrix(self) -> np.ndarray:
        return np.diag(self.lam.values)

    def compose(self, other: "DiagonalOperator") -> "DiagonalOperator":
        """``self o other``; needs ``other.dst == self.src``."""
        if other.dst != self.src:
            raise SpecError("composition needs matching intermediate space")
        return DiagonalOperator(BlockVector(self.blocks, self.lam.values * other.lam.values), other.src, self.dst)


@dataclass(frozen=True)
class DenseOperator:
    """An ``N x N`` real matrix acting between two finite mixed spaces."""

    matrix: np.ndarray
    src: MixedSpaceSpec
    dst: MixedSpaceSpec

    def __post_init__(self):
        a = np.array(self.matrix, dtype=float)
        if a.ndim != 2 or a.shape != (self.dst.dim, self.src.dim):
            raise SpecError(f"matrix shape {a.shape} does not match dims ({self.dst.dim}, {self.src.dim})")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def dim(self) -> int:
        return self.src.dim


@dataclass(frozen=True)
class NuclearCertificate:
    value: float
    method: str  # closed_form | trace_dual_oracle | random_search | rank_one_upper
    witness: BlockVector | None = None


@dataclass(frozen=True)
class EmbeddingNorm:
    """Nuclear norm of ``id_beta``; ``value`` is ``inf`` when not nuclear.

    ``c0_member`` is only set when the outer nuclearity exponent is ``inf``.
    """

    value: float
    nuclear: bool
    c0_member: bool | None = None


def _check_banach(*exps):
    for e in exps:
        as_exponent(e).require_banach()


def diag_op_norm_exact(D: DiagonalOperator) -> float:
    """``||D||`` as the norm of ``lambda`` in ``l_{q*}(l_{p*})``."""
    _check_banach(D.src.p, D.src.q, D.dst.p, D.dst.q)
    spec = MixedSpaceSpec(star_exponent(D.src.q, D.dst.q), star_exponent(D.src.p, D.dst.p), D.blocks)
    return mixed_norm(spec, D.lam)


def diag_nuclear_exact(D: DiagonalOperator) -> float:
    """Nuclear norm as the norm of ``lambda`` in ``l_{t(q1,q2)}(l_{t(p1,p2)})``."""
    spec = MixedSpaceSpec(tong_exponent(D.src.q, D.dst.q), tong_exponent(D.src.p, D.dst.p), D.blocks)
    return mixed_norm(spec, D.lam)


def tong_diag_nuclear(tau: Sequence[float], r1, r2) -> float:
    """Nuclear norm of ``diag(tau): l_{r1}^n -> l_{r2}^n``."""
    return lp_norm(np.asarray(tau, dtype=float), tong_exponent(r1, r2))


def nuclear_from_sup_source(T: DenseOperator) -> float:
    """Sum of the ``dst``-norms of the columns; valid for an ``l_inf^N`` source."""
    if not (T.src.p.is_inf and T.src.q.is_inf):
        raise SpecError("column formula needs a sup-type source (p1 = q1 = inf)")
    cols = [mixed_norm(T.dst, T.matrix[:, i]) for i in range(T.dim)]
    return math.fsum(cols)


def diagonal_part(T: DenseOperator) -> DiagonalOperator:
    return DiagonalOperator(BlockVector(T.src.blocks, np.diag(T.matrix).copy()), T.src, T.dst)


def rank_one_upper(D: DiagonalOperator) -> NuclearCertificate:
    """Naive decomposition ``D = sum_k lambda_k e_k' (x) e_k``."""
    from .spaces import dual_spec

    src_dual = dual_spec(D.src)
    n = len(D.lam)
    terms = []
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        terms.append(abs(D.lam.values[k]) * mixed_norm(src_dual, e) * mixed_norm(D.dst, e))
    return NuclearCertificate(math.fsum(terms), "rank_one_upper")


def _membership(gamma: Fraction, delta: Fraction, r: Exponent) -> bool:
    """Is ``2**(gamma*j) * (j+1)**delta`` in ``l_r`` (``c_0`` for ``r = inf``)?"""
    return gamma < 0 or (gamma == 0 and delta < -r.inv)


def embedding_nuclear_norm(beta, M, p1, p2, q1, q2, *, tol: float = 1e-15) -> EmbeddingNorm:
    """Nuclear norm of ``id_beta: l_{q1}(beta_j l_{p1}^{M_j}) -> l_{q2}(l_{p2}^{M_j})``.

    ``beta`` and ``M`` are finite sequences (direct sum) or both
    :class:`GrowthFamily` instances (convergence decided exactly, the value
    summed numerically with a tail bound).
    """
    tp, tq = tong_exponent(p1, p2), tong_exponent(q1, q2)
    if isinstance(beta, GrowthFamily) or isinstance(M, GrowthFamily):
        if not (isinstance(beta, GrowthFamily) and isinstance(M, GrowthFamily)):
            raise SpecError("symbolic mode needs growth families for both beta and M")
        return _symbolic_embedding_norm(beta, M, tp, tq, tol)
    beta = np.asarray(beta, dtype=float)
    M = np.asarray(M, dtype=float)
    if beta.shape != M.shape or beta.size == 0:
        raise SpecError("beta and M must be non-empty and of equal length")
    if np.any(beta <= 0) or np.any(M < 1):
        raise SpecError("need beta_j > 0 and M_j >= 1")
    terms = M ** float(tp.inv) / beta
    value = lp_norm(terms, tq)
    return EmbeddingNorm(value, True, True if tq.is_inf else None)


def _symbolic_embedding_norm(beta: GrowthFamily, M: GrowthFamily, tp: Exponent, tq: Exponent, tol):
    M.check_block_family()
    gamma = -beta.geo + M.geo * tp.inv
    delta = -beta.poly + M.poly * tp.inv
    member = _membership(gamma, delta, tq)
    if not member:
        return EmbeddingNorm(math.inf, False, False if tq.is_inf else None)

    def log2_term(j):
        m = M.block_size(j) if M.log2(j) < 52 else 2.0 ** M.log2(j)
        return -beta.log2(j) + float(tp.inv) * math.log2(m)

    if tq.is_inf:
        # unimodal envelope: scan past the peak of gamma*j + delta*log2(j+1)
        jpeak = 0 if delta <= 0 or gamma == 0 else -float(delta) / (float(gamma) * math.log(2))
        jmax = int(2 * jpeak) + 256
        return EmbeddingNorm(2.0 ** max(log2_term(j) for j in range(jmax + 1)), True, True)

    t = float(tq)
    logs = []
    j = 0
    if gamma < 0:
        while True:
            logs.append(t * log2_term(j))
            if j > 64 and logs[-1] < max(logs) + math.log2(tol) - 8:
                break
            j += 1
        top = max(logs)
        s = math.fsum(2.0 ** (v - top) for v in logs)
        return EmbeddingNorm(2.0 ** (top / t) * s ** (1 / t), True)
    # gamma == 0: polynomial decay (j+1)**(delta*t) with delta*t < -1
    J = 200_000
    js = np.arange(J)
    g2 = float(M.geo) * js + float(M.poly) * np.log2(js + 1.0)
    small = g2 < 52
    log2m = np.where(small, np.log2(np.maximum(np.rint(2.0 ** np.where(small, g2, 0.0)), 1.0)), g2)
    log2b = float(beta.geo) * js + float(beta.poly) * np.log2(js + 1.0)
    terms = 2.0 ** (t * (float(tp.inv) * log2m - log2b))
    kappa = float(delta) * t
    scale = terms[-1] / float(J) ** kappa
    tail = scale * (J + 0.5) ** (kappa + 1) / (-(kappa + 1))
    return EmbeddingNorm((math.fsum(terms) + tail) ** (1 / t), True)


def factorized_nuclear_upper(beta, M, p1, p2, q1, q2) -> float:
    """Upper bound ``||D_1|| * ||D_2|| * nu(D_0)`` from the factorization
    ``D_beta = D_2 o D_0 o D_1`` through ``l_{q1}(l_{q1})`` and ``l_{q2}(l_{q2})``.

    Valid for ``q1 <= p1 <= p2 <= q2``; on that branch it equals
    :func:`embedding_nuclear_norm`.
    """
    p1, p2, q1, q2 = map(as_exponent, (p1, p2, q1, q2))
    _check_banach(p1, p2, q1, q2)
    if not (q1 <= p1 <= p2 <= q2):
        raise ExponentError(f"factorization needs q1 <= p1 <= p2 <= q2, got {q1}, {p1}, {p2}, {q2}")
    tp, tq = tong_exponent(p1, p2), tong_exponent(q1, q2)
    if isinstance(beta, GrowthFamily) and isinstance(M, GrowthFamily):
        # block j of D_1 is M_j^{1/p1-1/q1} times a map of norm M_j^{1/q1-1/p1},
        # likewise for D_2, so both factors have norm one and only
        # nu(D_0) = ||(M_j^{1/t_p} / beta_j)||_{t_q} remains
        return _symbolic_embedding_norm(beta, M, tp, tq, 1e-15).value
    beta = np.asarray(beta, dtype=float)
    M = [int(m) for m in M]
    blocks = tuple(M)
    Mf = np.asarray(M, dtype=float)
    rep = lambda per_block: np.repeat(per_block, M)

    d1 = DiagonalOperator.between(rep(Mf ** float(p1.inv - q1.inv)), blocks, p1, q1, q1, q1)
    d2 = DiagonalOperator.between(rep(Mf ** float(q2.inv - p2.inv)), blocks, q2, q2, p2, q2)
    gamma = Mf ** float(tp.inv - tq.inv) / beta
    nu0 = tong_diag_nuclear(rep(gamma), q1, q2)
    return diag_op_norm_exact(d1) * diag_op_norm_exact(d2) * nu0
