"""Optimization oracles that re-derive diagonal-operator norms from scratch.

These never call :func:`~nucembed.exponents.tong_exponent`: the nuclear
oracle works through trace duality, maximizing ``|tr(S D)|`` over diagonal
contractions ``S: dst -> src`` whose norm comes from star exponents.
"""
from __future__ import annotations

import itertools
import math
import warnings

import numpy as np

from .diagonal import DenseOperator, DiagonalOperator, NuclearCertificate, diag_op_norm_exact
from .exponents import conjugate, star_exponent
from .spaces import (
    BlockVector,
    MixedSpaceSpec,
    ZeroVectorWarning,
    batch_mixed_norm,
    dual_spec,
    holder_extremizer,
    mixed_norm,
)

__all__ = ["ORACLE_MAX_DIM", "OracleScaleError", "diag_nuclear_oracle", "dense_op_norm_oracle"]

ORACLE_MAX_DIM = 64


class OracleScaleError(ValueError):
    """Instance too large for brute-force oracles."""


def _check_scale(n: int):
    if n > ORACLE_MAX_DIM:
        raise OracleScaleError(f"dimension {n} exceeds oracle scale {ORACLE_MAX_DIM}")


def _contraction_spec(D: DiagonalOperator) -> MixedSpaceSpec:
    """Space whose norm equals ``||S: dst -> src||`` for diagonal ``S``."""
    return MixedSpaceSpec(star_exponent(D.dst.q, D.src.q), star_exponent(D.dst.p, D.src.p), D.blocks)


def diag_nuclear_oracle(D: DiagonalOperator, budget: int = 1000, seed: int = 0) -> NuclearCertificate:
    """Lower bound for ``nu(D)`` as ``sup |tr(S D)|`` over diagonal ``||S|| <= 1``.

    Route (a) takes ``S`` from the Hoelder extremizer of ``lambda`` in the
    predual of the contraction space; route (b) refines by random search.
    The witness is the best ``S`` found (its diagonal).
    """
    lam = D.lam.values
    n = lam.size
    _check_scale(n)
    S_op = lambda b: DiagonalOperator(BlockVector(D.blocks, b), D.dst, D.src)
    cspec = _contraction_spec(D)
    predual = MixedSpaceSpec(conjugate(cspec.q), conjugate(cspec.p), D.blocks)

    best_val, best_b = 0.0, np.zeros(n)
    if np.any(lam):
        b = holder_extremizer(predual, lam).values
        nb = diag_op_norm_exact(S_op(b))
        if nb > 0:
            b = b / max(nb, 1.0)
            best_val, best_b = abs(math.fsum(lam * b)), b

    rng = np.random.default_rng(seed)
    batch = 64
    used = 0
    while used < budget and np.any(lam):
        k = min(batch, budget - used)
        if best_val > 0 and used % (2 * batch) == batch:
            cand = best_b * (1.0 + 0.05 * rng.standard_normal((k, n)))
        else:
            cand = rng.standard_normal((k, n))
        norms = batch_mixed_norm(cspec, cand)
        ok = norms > 0
        cand = cand[ok] / norms[ok, None]
        vals = np.abs(cand @ lam)
        used += k
        if vals.size and vals.max() > best_val:
            i = int(np.argmax(vals))
            b = cand[i] / max(diag_op_norm_exact(S_op(cand[i])), 1.0)
            v = abs(math.fsum(lam * b))
            if v > best_val:
                best_val, best_b = v, b
    method = "trace_dual_oracle"
    return NuclearCertificate(best_val, method, BlockVector(D.blocks, best_b))


def _structured_candidates(n: int, max_support: int):
    """Signed basis vectors, then sign patterns on supports of size 2..max_support."""
    eye = np.eye(n)
    yield np.vstack([eye, -eye])
    for size in range(2, max_support + 1):
        for supp in itertools.combinations(range(n), size):
            rows = []
            for signs in itertools.product((1.0, -1.0), repeat=size - 1):
                x = np.zeros(n)
                x[list(supp)] = (1.0,) + signs
                rows.append(x)
            yield np.array(rows)


class _Search:
    """Budget-truncated deterministic search; best value is monotone in budget."""

    def __init__(self, T: np.ndarray, src: MixedSpaceSpec, dst: MixedSpaceSpec, budget: int):
        self.T, self.src, self.dst = T, src, dst
        self.left = budget
        self.best = -1.0
        self.best_x = None

    def ratios(self, X: np.ndarray) -> np.ndarray:
        X = X[: self.left]
        self.left -= X.shape[0]
        num = batch_mixed_norm(self.dst, X @ self.T.T)
        den = batch_mixed_norm(self.src, X)
        with np.errstate(invalid="ignore", divide="ignore"):
            r = np.where(den > 0, num / np.where(den > 0, den, 1.0), -1.0)
        if r.size and r.max() > self.best:
            i = int(np.argmax(r))
            self.best, self.best_x = float(r[i]), X[i].copy()
        return r

    @property
    def done(self) -> bool:
        return self.left <= 0


def _ascend(s: _Search, x: np.ndarray, src_dual: MixedSpaceSpec, iters: int = 60) -> None:
    """Nonlinear power iteration ``x <- J(T' J(T x))`` through Hoelder extremizers.

    With ``y`` norming ``T x`` in the target and ``x'`` norming ``T' y`` in
    the source, ``||T x'|| >= <y, T x'> = ||T' y||_* >= ||T x|| / ||x||``,
    so the ratio never decreases.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ZeroVectorWarning)
        for _ in range(iters):
            if s.done or x is None:
                return
            y = holder_extremizer(s.dst, s.T @ x).values
            x_new = holder_extremizer(src_dual, s.T.T @ y).values
            before = s.best
            s.ratios(x_new[None, :])
            if not np.any(x_new) or s.best <= before * (1 + 1e-15):
                return
            x = x_new


def dense_op_norm_oracle(T: DenseOperator, budget: int = 10_000, seed: int = 0) -> float:
    """Best ratio ``||T x||_dst / ||x||_src`` found within ``budget`` evaluations.

    Candidates: signed basis vectors, sign patterns on small supports,
    random points, nonlinear power iteration and pattern-search refinement
    of the incumbent.  A
    lower bound for ``||T||`` that never decreases as the budget grows.
    """
    A = np.asarray(T.matrix)
    n = A.shape[1]
    _check_scale(n)
    s = _Search(A, T.src, T.dst, budget)
    for X in _structured_candidates(n, 2 if n > 8 else 3):
        s.ratios(X)
        if s.done:
            break
    src_dual = dual_spec(T.src)
    rng = np.random.default_rng(seed)
    # sparse starts can trap the iteration on their support, so add dense ones
    starts = [s.best_x, np.ones(n)]
    if s.best_x is not None:
        starts.append(s.best_x + 1e-3 * np.max(np.abs(s.best_x)) * rng.standard_normal(n))
    for x0 in starts:
        _ascend(s, x0, src_dual)
    step = 0.5
    x = s.best_x
    while not s.done:
        # random exploration: dense gaussian, random signs with magnitudes, sparse
        g = rng.standard_normal((16, n))
        sgn = np.sign(rng.standard_normal((8, n))) * rng.random((8, n))
        sp = g[:8] * (rng.random((8, n)) < 0.4)
        s.ratios(np.vstack([g, sgn, sp]))
        if s.best_x is not x:
            _ascend(s, s.best_x, src_dual)
            x, step = s.best_x, 0.5
        # pattern search around the incumbent, scaled so max |x_i| = 1
        while not s.done and step > 1e-13:
            xs = x / np.max(np.abs(x))
            P = np.vstack([xs + step * np.eye(n), xs - step * np.eye(n),
                           xs * (1 + step * np.eye(n)), xs * (1 - step * np.eye(n))])
            before = s.best
            s.ratios(P)
            if s.best > before * (1 + 1e-15):
                x = s.best_x
            else:
                step *= 0.5
            if step < 1e-13:
                break
        step = 0.5 if step < 1e-13 else step
    x = s.best_x
    if x is None:
        return 0.0
    den = mixed_norm(T.src, x)
    return mixed_norm(T.dst, A @ x) / den if den > 0 else 0.0
