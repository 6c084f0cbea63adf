"""Seeded self-check batteries used by ``nucembed verify``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import diagonal
from .diagonal import DiagonalOperator, diag_op_norm_exact
from .exponents import Exponent
from .geometry import box, boxpack_profile, comb_domain, log_cusp, power_cusp
from .oracles import dense_op_norm_oracle, diag_nuclear_oracle

__all__ = ["CheckRow", "EXPONENT_POOL", "random_diagonal", "diag_battery", "boxpack_suite", "BUILTIN_DOMAINS"]

EXPONENT_POOL = tuple(Exponent.of(v) for v in (1, Fraction(4, 3), 2, 3, "inf"))


@dataclass(frozen=True)
class CheckRow:
    name: str
    exact: float
    oracle: float
    gap: float
    ok: bool


def random_blocks(rng: np.random.Generator, max_dim: int) -> tuple:
    n = int(rng.integers(1, max_dim + 1))
    blocks = []
    while n > 0:
        b = int(rng.integers(1, n + 1))
        blocks.append(b)
        n -= b
    return tuple(blocks)


def random_diagonal(rng: np.random.Generator, max_dim: int = 6) -> DiagonalOperator:
    blocks = random_blocks(rng, max_dim)
    p1, q1, p2, q2 = (EXPONENT_POOL[int(i)] for i in rng.integers(0, len(EXPONENT_POOL), 4))
    lam = rng.standard_normal(sum(blocks))
    return DiagonalOperator.between(lam, blocks, p1, q1, p2, q2)


def _label(D: DiagonalOperator) -> str:
    return f"blocks={','.join(map(str, D.blocks))} p1={D.src.p} q1={D.src.q} p2={D.dst.p} q2={D.dst.q}"


def diag_battery(instances: int = 100, max_dim: int = 6, seed: int = 0, budget: int = 10_000,
                 tol: float = 1e-9, opnorm_budget: int = 400) -> list[CheckRow]:
    """Closed forms against oracles on random diagonal operators.

    Nuclear norm: ``|exact - oracle| <= tol (1 + exact)``.  Operator norm:
    the search oracle is a lower bound, so it must not exceed the closed
    form by more than the same tolerance.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(instances):
        D = random_diagonal(rng, max_dim)
        # looked up at call time so tests can substitute a broken formula
        exact = diagonal.diag_nuclear_exact(D)
        orc = diag_nuclear_oracle(D, budget=min(budget, 1000), seed=seed + i).value
        gap = abs(exact - orc)
        rows.append(CheckRow(f"nuclear[{i}] {_label(D)}", exact, orc, gap, gap <= tol * (1 + exact)))
        op = diag_op_norm_exact(D)
        lower = dense_op_norm_oracle(diagonal.DenseOperator(D.matrix(), D.src, D.dst),
                                     budget=min(budget, opnorm_budget), seed=seed + i)
        rows.append(CheckRow(f"opnorm[{i}] {_label(D)}", op, lower, max(0.0, lower - op),
                             lower <= op + tol * (1 + op)))
    return rows


BUILTIN_DOMAINS = {
    "power_cusp(1/2)": (power_cusp(Fraction(1, 2)), 10),
    "power_cusp(1)": (power_cusp(1), 12),
    "power_cusp(2)": (power_cusp(2), 12),
    "log_cusp(2)": (log_cusp(2), 10),
    "box(1,1)": (box(side=1, d=2), 12),
    "box(1,2,3)": (box((1, 2, 3)), 8),
    "comb(1)": (comb_domain([1], 2), 12),
    "comb(0,3,0,5)": (comb_domain([0, 3, 0, 5], 2), 12),
}


def boxpack_suite(jmax: int | None = None) -> list[CheckRow]:
    """Doubling law ``b_j >= 2^d b_{j-1}`` and, for boxes, ``b_j 2^{-jd} <= |Omega|``."""
    rows = []
    for name, (dom, top) in BUILTIN_DOMAINS.items():
        prof = boxpack_profile(dom, 0, min(top, jmax) if jmax is not None else top)
        bad = prof.doubling_violations()
        rows.append(CheckRow(f"doubling {name}", float(len(bad)), 0.0, float(len(bad)), not bad))
        if dom.kind == "box":
            excess = [j for j, b in prof.rows if Fraction(b, 2 ** (j * dom.d)) > dom.measure]
            rows.append(CheckRow(f"measure {name}", float(len(excess)), 0.0, float(len(excess)), not excess))
    return rows
