# src/cli.py
"""
Command-line surface:  python -m src.cli <command> [options]

  catalog      algebras with dimension and N(g), plus the named contractions
  invariants   P(T) and its verified invariants (--algebra NAME | --file JSON)
  contract     ε-limit of the invariants (--target NAME | --spec JSON)
  mlp          missing-label report for h ↪ g (default h = so(3))
  verify       golden suite (--only NAME[,NAME])

Exit codes: 0 ok, 1 bad input or failed verification, 2 non-invariant
coefficient (argparse usage errors also exit 2), 3 divergent contraction,
4 invariant count mismatch, 5 subalgebra not closed, 6 dependent limit
invariants, 7 rank disagreement.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, TextIO, Union

from .config import (
    DEFAULT_MAX_DEGREE,
    DEFAULT_RANK_OPTIONS,
    DEFAULT_WORKERS,
    JACOBIAN_RANK_OPTIONS,
    RankOptions,
    configure_logging,
)
from .contraction import (
    CATALOG_CONTRACTIONS,
    catalog_contraction,
    contraction_pipeline,
    load_spec,
)
from .errors import BadParams, CasimirError
from .gelfand import casimir_invariants, recipe_for
from .invariance import is_invariant
from .liealg import (
    KINEMATICAL_NAMES,
    LieAlgebra,
    canonical_name,
    catalog,
    display_name,
    load_algebra,
    num_invariants,
)
from .mlp import REFERENCE_LABELS, mlp_analyze, report_to_json, compare_with_reference
from .verify import run_suite

__all__ = ["CommandConfig", "build_parser", "main",
           "cmd_catalog", "cmd_invariants", "cmd_contract", "cmd_mlp", "cmd_verify"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommandConfig:
    command: str
    algebra: Optional[str] = None
    file: Optional[str] = None
    target: Optional[str] = None
    spec: Optional[str] = None
    subalgebra: Optional[str] = None
    l_prime: Optional[int] = None
    per_power: bool = False
    only: Optional[str] = None
    fmt: str = "text"
    workers: int = DEFAULT_WORKERS
    max_degree: int = DEFAULT_MAX_DEGREE
    symbolic_rank: bool = True

    def __post_init__(self):
        if self.fmt not in ("text", "json"):
            raise BadParams(f"unknown output format {self.fmt!r}")
        if self.command == "invariants" and (self.algebra is None) == (self.file is None):
            raise BadParams("give exactly one of --algebra and --file")

    @property
    def rank_options(self) -> RankOptions:
        if self.symbolic_rank:
            return DEFAULT_RANK_OPTIONS
        return DEFAULT_RANK_OPTIONS.without_symbolic()

    @property
    def jacobian_rank_options(self) -> RankOptions:
        if self.symbolic_rank:
            return JACOBIAN_RANK_OPTIONS
        return JACOBIAN_RANK_OPTIONS.without_symbolic()

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CommandConfig":
        return cls(
            command=args.command,
            algebra=getattr(args, "algebra", None),
            file=getattr(args, "file", None),
            target=getattr(args, "target", None),
            spec=getattr(args, "spec", None),
            subalgebra=getattr(args, "subalgebra", None),
            l_prime=getattr(args, "l_prime", None),
            per_power=getattr(args, "per_power", False),
            only=getattr(args, "only", None),
            fmt=args.format,
            workers=getattr(args, "workers", DEFAULT_WORKERS),
            max_degree=args.max_degree,
            symbolic_rank=not args.no_symbolic_rank,
        )


def _emit(out: TextIO, cfg: CommandConfig, doc: Dict, lines: List[str]) -> None:
    if cfg.fmt == "json":
        out.write(json.dumps(doc, ensure_ascii=False, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def _resolve_algebra(cfg: CommandConfig) -> LieAlgebra:
    if cfg.file is not None:
        return load_algebra(cfg.file)
    if cfg.algebra is None:
        raise BadParams("no algebra given")
    return catalog(cfg.algebra)


def _parse_subalgebra(text: Optional[str]) -> Optional[List[Union[int, str]]]:
    """"J1,J2,J3" or 1-based "1,2,3"."""
    if text is None:
        return None
    refs: List[Union[int, str]] = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok.isdigit():
            if int(tok) < 1:
                raise BadParams("subalgebra indices are 1-based")
            refs.append(int(tok) - 1)
        else:
            refs.append(tok)
    if not refs:
        raise BadParams("empty subalgebra selection")
    return refs


# ----- 子命令 -----

def cmd_catalog(cfg: CommandConfig, out: TextIO) -> int:
    rows = []
    for key in list(KINEMATICAL_NAMES) + ["isp4"]:
        g = catalog(key)
        rows.append({"name": key, "display": display_name(key), "dim": g.dim,
                     "invariants": num_invariants(g, cfg.rank_options)})
    edges = [{"source": s, "target": t, "exponents": list(fam)} for s, t, fam in CATALOG_CONTRACTIONS]
    lines = [f"{r['name']:<14}{r['display']:<10} dim={r['dim']:<3} N={r['invariants']}" for r in rows]
    lines.append("so(p,q)       any p+q >= 3 in the E basis")
    lines.append("")
    lines.append("contractions (exponents on J | P | K | H):")
    lines += [f"  {e['source']} -> {e['target']}  {tuple(e['exponents'])}" for e in edges]
    _emit(out, cfg, {"algebras": rows, "contractions": edges}, lines)
    return 0


def cmd_invariants(cfg: CommandConfig, out: TextIO) -> int:
    g = _resolve_algebra(cfg)
    N = num_invariants(g, cfg.rank_options)
    found = casimir_invariants(g, max_degree=cfg.max_degree, options=cfg.jacobian_rank_options)
    notes = []
    if N == g.dim:
        notes.append("abelian: every coordinate function is an invariant")
    if len(found) < N:
        notes.append(f"only {len(found)} of {N} invariants found")
    checks = [is_invariant(g, inv.polynomial) for inv in found]
    verified = all(checks)
    if not verified:
        notes.append("some reported invariant is not annihilated by the coadjoint operators")
    doc = {**found.to_json(), "dim": g.dim, "N": N, "verified": verified, "notes": notes}
    lines = [f"{g.name}: dim {g.dim}, N(g) = {N}"]
    if found.polynomial is not None:
        lines.append(f"P(T) = {found.polynomial}")
    for inv, ok in zip(found, checks):
        mark = "verified" if ok else "NOT INVARIANT"
        lines.append(f"  [{inv.source}] {inv.polynomial}   (degree {inv.degree}, {mark})")
    lines += [f"note: {n}" for n in notes]
    _emit(out, cfg, doc, lines)
    return 0 if verified else 1


def cmd_contract(cfg: CommandConfig, out: TextIO) -> int:
    if (cfg.target is None) == (cfg.spec is None):
        raise BadParams("give exactly one of --target and --spec")
    if cfg.spec is not None:
        spec = load_spec(cfg.spec)
        g = catalog(cfg.algebra) if cfg.algebra else spec.algebra
    else:
        if cfg.algebra is None:
            raise BadParams("--target needs --algebra")
        g = catalog(cfg.algebra)
        spec = catalog_contraction(canonical_name(cfg.algebra), cfg.target)
    result = contraction_pipeline(g, spec, per_power=cfg.per_power, options=cfg.jacobian_rank_options)
    doc = result.to_json()
    lines = [f"{g.name} -> {result.contracted.name}  exponents {spec.exponents}"]
    lines += [f"  {b}" for b in result.contracted.bracket_table()]
    lines.append(f"alpha = {result.alpha}" + ("  (per power)" if result.per_power else ""))
    lines.append(f"P(T) = {result.polynomial}")
    for inv in result.invariants:
        lines.append(f"  [{inv.source}] {inv.polynomial}   (verified)")
    _emit(out, cfg, doc, lines)
    return 0


def cmd_mlp(cfg: CommandConfig, out: TextIO) -> int:
    if cfg.algebra is None:
        raise BadParams("mlp needs --algebra")
    g = catalog(cfg.algebra)
    report = mlp_analyze(g, _parse_subalgebra(cfg.subalgebra), cfg.l_prime, recipe_for(g.name))
    doc = report_to_json(report)
    if report.algebra in REFERENCE_LABELS and cfg.subalgebra is None:
        doc["reference"] = compare_with_reference(report)
    lines = [
        f"{report.algebra} ⊃ <{', '.join(report.subalgebra)}>",
        f"  n = {report.n}   m = {report.m}   l' = {report.l_prime}   N' = {report.N_prime}",
        "  Casimirs: " + ", ".join(str(p) for p in report.casimirs.polynomials()),
        "  subalgebra Casimirs: " + (", ".join(str(p) for p in report.subalgebra_casimirs.polynomials())
                                      or "none"),
        f"  reduced P(T) = {report.reduced_polynomial}",
    ]
    for v in report.verdicts:
        mark = "+" if v.accepted else "-"
        lines.append(f"  {mark} {v.polynomial}   [{v.origin}] {v.reason}")
    lines.append(f"  reduced rank {report.reduced_rank} (N' = {report.N_prime})")
    if report.failed:
        lines.append("  method fails: no new missing label operator")
    lines += [f"  note: {n}" for n in report.notes]
    if "reference" in doc and doc["reference"]["note"]:
        lines.append(f"  reference: {doc['reference']['note']}")
    _emit(out, cfg, doc, lines)
    return 0


def cmd_verify(cfg: CommandConfig, out: TextIO, resolve=catalog) -> int:
    only = cfg.only.split(",") if cfg.only else None
    report = run_suite(only, workers=cfg.workers, resolve=resolve,
                       progress=cfg.fmt == "text" and out is sys.stdout)
    lines = [f"{'ok  ' if r.passed else 'FAIL'} {r.name:<28} {r.detail}" for r in report.results]
    first = report.first_failure
    lines.append(f"{len(report.results)} check(s), "
                 + ("all passed" if first is None else f"first failure: {first.name}"))
    _emit(out, cfg, report.to_json(), lines)
    if first is not None:
        sys.stderr.write(f"verify: {first.name} failed: {first.detail}\n")
        return 1
    return 0


_COMMANDS = {
    "catalog": cmd_catalog,
    "invariants": cmd_invariants,
    "contract": cmd_contract,
    "mlp": cmd_mlp,
    "verify": cmd_verify,
}


def positive_int(val: str) -> int:
    iv = int(val)
    if iv <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return iv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text", help="Output format")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    common.add_argument("--max-degree", type=positive_int, default=DEFAULT_MAX_DEGREE,
                        help="Highest degree tried by the polynomial invariant search")
    common.add_argument("--no-symbolic-rank", action="store_true",
                        help="Generic ranks by evaluation only")

    parser = argparse.ArgumentParser(
        prog="python -m src.cli",
        description="Casimir invariants, contractions and missing labels",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", parents=[common], help="List catalog algebras and contractions")

    p = sub.add_parser("invariants", parents=[common], help="Invariants of one algebra")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--algebra", help="Catalog name, e.g. so(3,2) or galilei")
    src.add_argument("--file", help="Algebra-definition JSON file")

    p = sub.add_parser("contract", parents=[common], help="Contract an algebra and its invariants")
    p.add_argument("--algebra", help="Source algebra (catalog name)")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--target", help="Catalog target; the contraction path is composed")
    how.add_argument("--spec", help="Contraction-spec JSON file")
    p.add_argument("--per-power", action="store_true",
                   help="Take each T-power at its own top ε-degree")

    p = sub.add_parser("mlp", parents=[common], help="Missing-label report")
    p.add_argument("--algebra", required=True, help="Catalog name")
    p.add_argument("--subalgebra", help="Generator names or 1-based indices, comma separated")
    p.add_argument("--l-prime", type=int, default=None, help="Override l'")

    p = sub.add_parser("verify", parents=[common], help="Run the golden suite")
    p.add_argument("--only", help="Check names or groups, comma separated")
    p.add_argument("-w", "--workers", type=positive_int, default=DEFAULT_WORKERS,
                   help="Thread pool size")
    return parser


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    out = out if out is not None else sys.stdout
    try:
        cfg = CommandConfig.from_args(args)
        return _COMMANDS[cfg.command](cfg, out)
    except CasimirError as e:
        sys.stderr.write(f"error: {e}\n")
        logger.debug("%s", type(e).__name__, exc_info=True)
        return e.exit_code
    except IndexError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
