"""Command-line front end: ``nucembed <subcommand> [options]``.

Exit status 0 on success, 1 on bad input (one-line diagnostic on stderr),
2 when an internal consistency check fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from . import classify as C
from . import geometry as G
from .diagonal import DiagonalOperator, diag_nuclear_exact, diag_op_norm_exact
from .exponents import ExponentError, conjugate, parse_exponent, star_exponent, tong_exponent
from .oracles import OracleScaleError, diag_nuclear_oracle
from .spaces import GrowthFamily, MixedSpaceSpec, SpecError, mixed_norm
from .verify import boxpack_suite, diag_battery

__all__ = ["main", "main_entry", "CliError", "build_parser"]


class CliError(Exception):
    pass


class InvariantError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _frac(text: str) -> Fraction:
    t = str(text).strip()
    if "." in t or "e" in t.lower():
        raise CliError(f"decimal {text!r} rejected; use an exact fraction")
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"malformed number {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise CliError(f"malformed number list {text!r}") from exc
    if not all(math.isfinite(v) for v in vals):
        raise CliError("numbers must be finite")
    return vals


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise CliError(f"malformed integer list {text!r}") from exc


def _exponent(text: str):
    try:
        return parse_exponent(text)
    except ExponentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


_exponent.__name__ = "exponent"


def _num(x):
    """JSON-friendly value: exact rationals as strings, floats as shortest repr."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return x if math.isfinite(x) else ("inf" if x > 0 else "nan")
    return x


# ---------------------------------------------------------------------------
# output

def _render(obj, fmt: str) -> str:
    """``obj`` is a dict (one record) or a list of dicts (a table)."""
    rows = obj if isinstance(obj, list) else [obj]
    if fmt == "json":
        return json.dumps(obj, separators=(", ", ": "))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        keys = list(rows[0].keys()) if rows else []
        w.writerow(keys)
        for r in rows:
            w.writerow([_csv_cell(r[k]) for k in keys])
        return buf.getvalue().rstrip("\n")
    lines = []
    for r in rows:
        lines.append("  ".join(f"{k}={_plain_cell(v)}" for k, v in r.items()) if isinstance(obj, list)
                     else "\n".join(f"{k}: {_plain_cell(v)}" for k, v in r.items()))
    return "\n".join(lines)


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return ";".join(map(str, v))
    return "" if v is None else v


def _plain_cell(v):
    if isinstance(v, list):
        return "; ".join(map(str, v)) if v else "-"
    return "-" if v is None else v


# ---------------------------------------------------------------------------
# subcommands

def _spec_args(a, src: bool):
    return (a.p1, a.q1) if src else (a.p2, a.q2)


def cmd_exponents(a) -> dict:
    return {
        "p_star": str(star_exponent(a.p1, a.p2)),
        "t_p": str(tong_exponent(a.p1, a.p2)),
        "q_star": str(star_exponent(a.q1, a.q2)),
        "t_q": str(tong_exponent(a.q1, a.q2)),
        "p_tilde_star": str(star_exponent(a.p2, a.p1)),
        "q_tilde_star": str(star_exponent(a.q2, a.q1)),
        "p1_conjugate": str(conjugate(a.p1)),
        "p2_conjugate": str(conjugate(a.p2)),
    }


def cmd_norm(a) -> dict:
    blocks = _int_list(a.blocks)
    weights = _float_list(a.weights) if a.weights else None
    spec = MixedSpaceSpec(a.q, a.p, blocks, weights)
    return {"norm": float(mixed_norm(spec, _float_list(a.x)))}


def _diag(a) -> DiagonalOperator:
    return DiagonalOperator.between(_float_list(a.lam), _int_list(a.blocks), a.p1, a.q1, a.p2, a.q2)


def cmd_diag_opnorm(a) -> dict:
    return {"op_norm": float(diag_op_norm_exact(_diag(a)))}


def cmd_diag_nuclear(a) -> dict:
    D = _diag(a)
    out = {"nuclear_norm": float(diag_nuclear_exact(D))}
    if a.oracle:
        cert = diag_nuclear_oracle(D, budget=a.budget, seed=a.seed)
        out["oracle_lower_bound"] = float(cert.value)
        out["method"] = cert.method
    return out


def cmd_verify(a):
    rows = []
    if a.suite in ("diag", "all"):
        rows += diag_battery(instances=a.instances, seed=a.seed, budget=a.budget)
    if a.suite in ("boxpack", "all"):
        rows += boxpack_suite()
    table = [{"check": r.name, "exact": r.exact, "oracle": r.oracle, "gap": r.gap,
              "status": "pass" if r.ok else "fail"} for r in rows]
    if not all(r.ok for r in rows):
        return table, 2
    return table, 0


def _domain(a) -> G.DomainSpec:
    cfg = {"kind": a.kind, "alpha": a.alpha, "beta": a.beta, "side": a.side, "sides": a.sides,
           "counts": a.counts, "d": a.d}
    return G.domain_from_mapping({k: v for k, v in cfg.items() if v is not None})


def cmd_boxpack(a):
    dom = _domain(a)
    prof = G.boxpack_profile(dom, a.jmin, a.jmax)
    if prof.doubling_violations():
        raise InvariantError(f"doubling law violated at levels {prof.doubling_violations()}")
    if a.format == "csv":
        return G.profile_to_csv(prof).rstrip("\n")
    rows = [{"j": j, "b_j": b, "log2bj_over_j": (math.log2(b) / j) if b > 0 and j > 0 else math.nan}
            for j, b in prof.rows]
    out = {"kind": dom.kind, "d": dom.d, "rows": [{k: _num(v) for k, v in r.items()} for r in rows]}
    if a.estimate:
        est = G.estimate_b(prof)
        out["estimate"] = {"b_hat": est.b_hat, "stderr": est.stderr, "j_window": list(est.j_window),
                           "log_correction_flag": est.log_correction_flag,
                           "analytic_b": _num(dom.analytic_b)}
    if a.format == "plain":
        lines = [f"{r['j']} {r['b_j']} {r['log2bj_over_j']!r}" for r in rows]
        if a.estimate:
            e = out["estimate"]
            lines.append(f"b_hat={e['b_hat']!r} stderr={e['stderr']!r} log_correction={e['log_correction_flag']}")
        return "\n".join(lines)
    return out


def _fs(a, which: int) -> C.FunctionSpaceParams:
    s, p, q = (getattr(a, f"{n}{which}") for n in ("s", "p", "q"))
    return C.FunctionSpaceParams(a.scale, _frac(s), p, q, a.d)


def cmd_classify(a) -> dict:
    if a.target == "sequence":
        beta = GrowthFamily(_frac(a.beta_geo), _frac(a.beta_poly))
        M = GrowthFamily(_frac(a.m_geo), _frac(a.m_poly))
        v = C.classify_sequence_embedding(beta, M, a.p1, a.p2, a.q1, a.q2, query=a.query)
    elif a.target == "bounded":
        v = C.classify_bounded_domain(_fs(a, 1), _fs(a, 2), query=a.query)
    else:
        chosen = [x for x in (a.b is not None, a.binf, a.not_quasi, a.finite_measure) if x]
        if len(chosen) != 1:
            raise CliError("give exactly one of --b, --binf, --not-quasi, --finite-measure")
        if a.binf:
            dom = C.DomainInfo("quasi_bounded_infinite_b")
        elif a.not_quasi:
            dom = C.DomainInfo("not_quasi_bounded")
        elif a.finite_measure:
            dom = C.DomainInfo("finite_measure")
        else:
            dom = C.DomainInfo("quasi_bounded_finite_b", _frac(a.b), a.limsup_positive)
        v = C.classify_quasi_bounded(_fs(a, 1), _fs(a, 2), dom, query=a.query)
    return C.verdict_record(v)


# ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    p.add_argument("--config", help="key = value file mirroring the flags")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10_000)
    return p


def _exp_args(p, names):
    for n in names:
        p.add_argument(f"--{n}", type=_exponent, required=True)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    root = _Parser(prog="nucembed", description="Nuclear and compact embeddings of mixed-norm spaces")
    sub = root.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("exponents", parents=[common], help="star, Tong and conjugate exponents")
    _exp_args(p, ("p1", "p2", "q1", "q2"))

    p = sub.add_parser("norm", parents=[common], help="mixed norm of a block vector")
    _exp_args(p, ("p", "q"))
    p.add_argument("--blocks", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--weights")

    for name in ("diag-opnorm", "diag-nuclear"):
        p = sub.add_parser(name, parents=[common], help=f"{name[5:]} of a diagonal operator")
        _exp_args(p, ("p1", "q1", "p2", "q2"))
        p.add_argument("--blocks", required=True)
        p.add_argument("--lambda", dest="lam", required=True)
        if name == "diag-nuclear":
            p.add_argument("--oracle", action="store_true", help="also report the trace-duality lower bound")

    p = sub.add_parser("verify", parents=[common], help="closed forms against oracles")
    p.add_argument("--suite", choices=("diag", "boxpack", "all"), default="diag")
    p.add_argument("--instances", type=int, default=100)

    p = sub.add_parser("boxpack", parents=[common], help="dyadic box-packing profile")
    p.add_argument("--kind", required=True, choices=("power_cusp", "log_cusp", "box", "comb"))
    for k in ("alpha", "beta", "side", "sides", "counts"):
        p.add_argument(f"--{k}")
    p.add_argument("--d", type=int)
    p.add_argument("--jmin", type=int, default=0)
    p.add_argument("--jmax", type=int, default=10)
    p.add_argument("--estimate", action="store_true")

    p = sub.add_parser("classify", parents=[common], help="compactness and nuclearity verdicts")
    csub = p.add_subparsers(dest="target", parser_class=_Parser)
    csub.required = True
    for target in ("sequence", "bounded", "quasi-bounded"):
        c = csub.add_parser(target, parents=[common])
        c.add_argument("--query", choices=("both", "compact", "nuclear"), default="both")
        if target == "sequence":
            _exp_args(c, ("p1", "p2", "q1", "q2"))
            for k in ("beta-geo", "beta-poly", "m-geo", "m-poly"):
                c.add_argument(f"--{k}", default="0")
            continue
        c.add_argument("--scale", choices=("B", "F"), default="B")
        c.add_argument("--s1", required=True)
        c.add_argument("--s2", required=True)
        for k in ("p1", "p2"):
            c.add_argument(f"--{k}", type=_exponent, required=True)
        for k in ("q1", "q2"):
            c.add_argument(f"--{k}", type=_exponent, default=_exponent("2"))
        c.add_argument("--d", type=int, required=True)
        if target == "quasi-bounded":
            c.add_argument("--b")
            c.add_argument("--binf", action="store_true")
            c.add_argument("--not-quasi", action="store_true")
            c.add_argument("--finite-measure", action="store_true")
            c.add_argument("--limsup-positive", action="store_true", default=None)
    return root


def _config_argv(argv: list[str]) -> list[str]:
    """Expand ``--config FILE`` into flags placed before the explicit ones."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise CliError("--config needs a file path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read config {path!r}: {exc.strerror}") from exc
    cmd = [t for t in rest if not t.startswith("-")]
    extra, positional = [], []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{ln}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        if k in ("subcommand", "command", "target"):
            positional += v.split()
            continue
        flag = "--" + k.replace("_", "-")
        if flag == "--lambda" or k == "lam":
            flag = "--lambda"
        if v.lower() in ("true", "yes"):
            extra.append(flag)
        elif v.lower() in ("false", "no"):
            continue
        else:
            extra += [flag, v]
    lead = positional if not cmd else []
    # subcommand tokens first, then config flags, then command-line flags (which win)
    n_pos = 0
    for t in rest:
        if t.startswith("-"):
            break
        n_pos += 1
    return lead + rest[:n_pos] + extra + rest[n_pos:]


HANDLERS = {
    "exponents": cmd_exponents,
    "norm": cmd_norm,
    "diag-opnorm": cmd_diag_opnorm,
    "diag-nuclear": cmd_diag_nuclear,
    "boxpack": cmd_boxpack,
    "classify": cmd_classify,
}

INPUT_ERRORS = (CliError, ExponentError, SpecError, G.GeometryError, C.ClassifierError, OracleScaleError,
                ValueError)


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] in ("-h", "--help"):
            build_parser().print_help(stdout)
            return 0
        a = build_parser().parse_args(_config_argv(argv))
        if a.budget <= 0:
            raise CliError("--budget must be positive")
        if not 0 <= a.seed < 2 ** 64:
            raise CliError("--seed must be a 64-bit unsigned integer")
        if a.command == "verify":
            out, code = cmd_verify(a)
        else:
            out, code = HANDLERS[a.command](a), 0
    except SystemExit as exc:  # --help inside a subcommand
        return int(exc.code or 0)
    except (InvariantError, AssertionError) as exc:
        print(f"internal check failed: {exc}", file=stderr)
        return 2
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    print(out if isinstance(out, str) else _render(out, a.format), file=stdout)
    if code == 2:
        print("internal check failed: closed form and oracle disagree", file=stderr)
    return code


def main_entry() -> None:
    sys.exit(main())
