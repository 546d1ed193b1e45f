"""``cyclefact`` command line: counting, enumeration, series, maps and verification.

Exit codes: 0 success, 1 usage or guard error, 2 infeasible index or
coefficient beyond truncation, 3 disagreement between methods; ``verify``
exits with the number of failed groups (at most 125).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Sequence

from . import __version__, formulas
from .enumerator import (
    BoundExceededError,
    commutation_classes,
    enumerate_factorizations,
)
from .maps import (
    MapError,
    constellation_from_factorization,
    core_and_branches,
    mark_descents,
    polymap_of,
)
from .maps.export import to_dot, to_json
from .perm import (
    CycleFactorization,
    CycleIndex,
    Factorization,
    CycleNotationError,
    Infeasible,
    InfeasibleIndexError,
    canonical_target,
    cycle_type,
    genus_of_index,
    parse_composition,
    parse_cycles,
    product,
    require_genus_zero,
)
from .series import (
    SeriesError,
    TruncatedSeries,
    TruncationError,
    necklace_series,
    parse_monomial,
    solve_w,
    solve_wtilde,
    theorem1_series,
    theorem2_series,
)
from . import verify as verify_mod

EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_DISAGREE = 3
MAX_VERIFY_N = 6


class UsageError(Exception):
    pass


class CommandFailure(Exception):
    def __init__(self, code: int, message: str, report: "RunReport | None" = None):
        super().__init__(message)
        self.code = code
        self.report = report


@dataclass
class RunReport:
    """Deterministic record of a command run; ``seconds`` is kept out of ``data()``."""

    command: str
    parameters: dict
    results: dict = field(default_factory=dict)
    checks: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    def data(self) -> dict:
        return {
            "schema": 1,
            "command": self.command,
            "parameters": self.parameters,
            "results": self.results,
            "checks": self.checks,
        }

    def to_json(self) -> str:
        return json.dumps({**self.data(), "timing": {"seconds": round(self.seconds, 3)}}, indent=2)

    def to_text(self) -> str:
        lines = [f"{self.command}: " + " ".join(f"{k}={v}" for k, v in self.parameters.items() if v is not None)]
        for key, value in self.results.items():
            if isinstance(value, list):
                lines.append(f"{key}:")
                lines.extend(f"  {item}" for item in value)
            else:
                lines.append(f"{key}: {value}")
        for c in self.checks:
            status = "ok" if c["passed"] else "FAIL"
            lines.append(f"[{status}] {c['label']}: expected {c['expected']}, got {c['actual']}")
        return "\n".join(lines)


# -- argument helpers -------------------------------------------------------------


def _index(text: str | None) -> CycleIndex:
    if text is None or text.strip() in ("", "-"):
        return CycleIndex.of()
    try:
        return CycleIndex.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _alpha(text: str) -> tuple[int, ...]:
    try:
        return parse_composition(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _perm(text: str, degree: int | None):
    try:
        return parse_cycles(text, degree)
    except (CycleNotationError, ValueError) as exc:
        raise UsageError(f"bad permutation {text!r}: {exc}") from None


def _assignments(items: Sequence[str] | None) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for item in items or []:
        for part in item.split(","):
            if not part.strip():
                continue
            if "=" not in part:
                raise UsageError(f"--set expects name=value, got {part!r}")
            name, value = part.split("=", 1)
            try:
                out[name.strip()] = Fraction(value.strip())
            except ValueError:
                raise UsageError(f"bad value in {part!r}") from None
    return out


def _require_feasible(alpha: Sequence[int], index: CycleIndex) -> None:
    try:
        require_genus_zero(alpha, index)
    except InfeasibleIndexError as exc:
        raise CommandFailure(EXIT_INFEASIBLE, f"infeasible index {index or '-'} for alpha={tuple(alpha)}: {exc}") from None


def _check(label: str, expected, actual) -> dict:
    return {"label": label, "expected": str(expected), "actual": str(actual), "passed": expected == actual}


# -- count ------------------------------------------------------------------------


def _series_count(alpha: tuple[int, ...], index: CycleIndex, mode: str) -> tuple[str, int] | None:
    n, r = sum(alpha), index.r
    K = max(2, index.max_length)
    spec_q = {f"q{k}": c for k, c in index.items}
    if len(alpha) == 1:
        if mode == "ordered":
            w = solve_w(n, K)
            value = w.coeff({"x": n, "u": r, **spec_q}) * factorial(r)
            return "series (w)", _int(value)
        t = solve_wtilde(n - 1, K)
        return "series (wtilde)", _int(t.coeff({"x": n - 1, "u": r, **spec_q}))
    if len(alpha) == 2:
        a, b = alpha
        spec = {"x1": a, "x2": b, "u": r, **spec_q}
        if mode == "ordered":
            H = theorem1_series(max(2, n), K)
            return "series (H2)", _int(H.coeff(spec) * a * b * factorial(r))
        H = theorem2_series(max(2, n), K)
        return "series (H2tilde)", _int(H.coeff(spec) * a * b)
    return None


def _int(value: Fraction) -> int:
    if value.denominator != 1:
        raise CommandFailure(EXIT_DISAGREE, f"non-integer count {value}")
    return int(value)


def _formula_count(alpha: tuple[int, ...], index: CycleIndex, mode: str) -> list[tuple[str, int]]:
    n = sum(alpha)
    out = []
    transpositions = set(index.as_dict()) <= {2}
    if mode == "ordered":
        if len(alpha) == 1:
            out.append(("formula (full cycle)", formulas.springer_ordered(n, index)))
            out.append(("formula (Lagrange)", formulas.lagrange_ordered(n, index)))
        if transpositions:
            out.append(("formula (Hurwitz)", formulas.hurwitz_number(alpha)))
    else:
        if len(alpha) == 1:
            out.append(("formula (full cycle)", formulas.springer_inequivalent(n, index)))
            out.append(("formula (Lagrange)", formulas.lagrange_inequivalent(n, index)))
            if len(index.as_dict()) == 1:
                (k,) = index.as_dict()
                out.append((f"formula ({k}-cycles)", formulas.kcycle_inequivalent_fullcycle(n, k)))
    return out


def cmd_count(args) -> RunReport:
    alpha = _alpha(args.alpha)
    index = _index(args.index)
    report = RunReport("count", {"alpha": list(alpha), "index": str(index), "mode": args.mode, "method": args.method})
    _require_feasible(alpha, index)
    partition = tuple(sorted(alpha, reverse=True))
    values: list[tuple[str, int]] = []
    if args.method in ("oracle", "all"):
        fset = enumerate_factorizations(canonical_target(partition), index)
        value = len(fset) if args.mode == "ordered" else len(commutation_classes(fset))
        values.append(("oracle", value))
    if args.method in ("formula", "all"):
        found = _formula_count(alpha, index, args.mode)
        if not found and args.method == "formula":
            raise UsageError("no closed formula applies to this alpha and index")
        values.extend(found)
    if args.method in ("series", "all"):
        found = _series_count(alpha, index, args.mode)
        if found is None and args.method == "series":
            raise UsageError("series method needs l(alpha) <= 2")
        if found:
            values.append(found)
    for name, value in values:
        report.results[name] = value
    distinct = {v for _, v in values}
    report.results["count"] = values[0][1]
    if len(values) > 1:
        first = values[0]
        report.checks = [_check(f"{name} vs {first[0]}", first[1], v) for name, v in values[1:]]
    if len(distinct) > 1:
        report.results["agreement"] = False
        raise CommandFailure(EXIT_DISAGREE, "methods disagree: " + ", ".join(f"{n}={v}" for n, v in values), report)
    return report


# -- enumerate / classes --------------------------------------------------------------


def _factorization_set(args):
    target = _perm(args.perm, args.degree)
    index = _index(args.index)
    g = genus_of_index(cycle_type(target), index)
    if g != 0:
        reason = g.value if isinstance(g, Infeasible) else f"genus {g}"
        raise CommandFailure(EXIT_INFEASIBLE, f"infeasible index {index or '-'} for {target}: {reason}")
    return target, index, enumerate_factorizations(target, index)


def cmd_enumerate(args) -> RunReport:
    target, index, fset = _factorization_set(args)
    report = RunReport("enumerate", {"perm": str(target), "index": str(index)})
    report.results["count"] = len(fset)
    report.results["factorizations"] = [str(F) for F in fset]
    if args.format == "json":
        args.json = True
    return report


def cmd_classes(args) -> RunReport:
    target, index, fset = _factorization_set(args)
    classes = commutation_classes(fset)
    report = RunReport("classes", {"perm": str(target), "index": str(index)})
    report.results["ordered"] = len(fset)
    report.results["classes"] = len(classes)
    report.results["representatives"] = [
        f"{rep}  [size {len(members)}]" for rep, members in zip(classes.representatives, classes.classes)
    ]
    return report


# -- series -------------------------------------------------------------------------


def _series_for(which: str, trunc: int, kmax: int) -> TruncatedSeries:
    if which == "w":
        return solve_w(trunc, kmax)
    if which == "wtilde":
        return solve_wtilde(trunc - 1, kmax)
    if which == "H2":
        return theorem1_series(max(2, trunc), kmax)
    if which == "H2tilde":
        return theorem2_series(max(2, trunc), kmax)
    if which == "circ":
        variables, graded = ("x", "y"), frozenset({"x", "y"})
        x = TruncatedSeries.var("x", variables, graded, trunc + 1)
        y = TruncatedSeries.var("y", variables, graded, trunc + 1)
        return -(x * y.exp() - y * x.exp()).divide_by_difference("x", "y").log()
    if which == "necklace":
        return necklace_series(trunc)
    raise UsageError(f"unknown series {which}")


def cmd_series(args) -> RunReport:
    monomial = parse_monomial(args.coeff) if args.coeff else None
    kmax = args.kmax
    if kmax is None:
        qs = [int(v[1:]) for v in (monomial or {}) if v.startswith("q") and v[1:].isdigit()]
        kmax = max([3, *qs])
    trunc = args.trunc
    if trunc is None:
        graded = {"x", "x1", "x2", "y", "z"}
        trunc = max(4, sum(k for v, k in (monomial or {}).items() if v in graded) + (1 if args.which == "wtilde" else 0))
    if trunc < 1:
        raise UsageError("--trunc must be at least 1")
    if kmax < 2:
        raise UsageError("--kmax must be at least 2")
    report = RunReport("series", {"which": args.which, "trunc": trunc, "kmax": kmax, "set": args.set, "zero_others": args.zero_others, "coeff": args.coeff})
    series = _series_for(args.which, trunc, kmax)
    values = _assignments(args.set)
    if values or args.zero_others:
        series = series.specialize(values, zero_others=args.zero_others)
    if monomial is not None:
        try:
            report.results["coefficient"] = str(series.coeff(monomial))
        except TruncationError as exc:
            raise CommandFailure(EXIT_INFEASIBLE, f"coefficient unavailable: {exc}") from None
    else:
        report.results["series"] = str(series)
        if args.json:
            report.results["terms"] = series.to_json()["terms"]
    return report


# -- map ---------------------------------------------------------------------------


def _parse_factors(text: str, degree: int | None) -> Factorization:
    parts = [p for p in text.split(";") if p.strip()]
    if not parts:
        raise UsageError("--factors needs at least one factor")
    perms = [_perm(p, degree) for p in parts]
    n = max([degree or 0, *(p.degree for p in perms)])
    perms = tuple(_perm(p, n) for p in parts)
    kind = CycleFactorization if all(p.is_cycle() for p in perms) else Factorization
    try:
        return kind(perms, product(perms, n))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _stage(F, stage: str):
    if stage == "constellation":
        return constellation_from_factorization(F)
    if not isinstance(F, CycleFactorization):
        raise UsageError(f"stage {stage} needs every factor to be a single cycle")
    M = polymap_of(F)
    if stage == "polymap":
        return M
    if stage == "marked":
        return mark_descents(M)
    if stage == "core":
        return core_and_branches(M).core
    raise UsageError(f"unknown stage {stage}")


def cmd_map(args) -> RunReport:
    if args.roundtrip:
        nmax = args.nmax or 4
        if nmax > 5:
            raise UsageError("--nmax for round trips is at most 5")
        report = RunReport("map", {"roundtrip": True, "nmax": nmax})
        checks = verify_mod.group_round_trips(verify_mod.Bounds().capped(nmax))
        report.checks = [c.as_dict() for c in checks]
        report.results["sets"] = len(checks)
        report.results["instances"] = sum(c.expected for c in checks)
        if not all(c.passed for c in checks):
            raise CommandFailure(EXIT_DISAGREE, "round trip failed", report)
        return report
    if args.factors:
        items = [_parse_factors(args.factors, args.degree)]
        params = {"factors": args.factors}
    elif args.perm:
        target, index, fset = _factorization_set(args)
        items = list(fset)
        params = {"perm": str(target), "index": str(index)}
    else:
        raise UsageError("map needs --perm with --index, --factors, or --roundtrip")
    params.update({"stage": args.stage, "export": args.export})
    report = RunReport("map", params)
    maps = []
    seen = set()
    for F in items:
        try:
            M = _stage(F, args.stage)
        except MapError as exc:
            raise CommandFailure(EXIT_USAGE, str(exc)) from None
        key = M.key()
        if key in seen:
            continue
        seen.add(key)
        maps.append((F, M))
    report.results["factorizations"] = len(items)
    report.results["distinct maps"] = len(maps)
    if args.export:
        out = Path(args.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
            written = []
            for i, (F, M) in enumerate(maps, 1):
                path = out / f"{args.stage}_{i:04d}.{args.export}"
                path.write_text(to_dot(M, f"{args.stage}_{i}") if args.export == "dot" else to_json(M) + "\n")
                written.append(str(path))
        except OSError as exc:
            raise CommandFailure(EXIT_USAGE, f"cannot write maps: {exc}") from None
        report.results["files"] = written
    else:
        report.results["maps"] = [f"{F}: {M!r}" for F, M in maps]
    return report


# -- formula ------------------------------------------------------------------------


FORMULAS = ["hurwitz", "ordered", "inequivalent", "kcycle", "beta", "lagrange-ordered", "lagrange-inequivalent"]


def cmd_formula(args) -> RunReport:
    name = args.name
    report = RunReport("formula", {"name": name, "alpha": args.alpha, "n": args.n, "index": args.index, "k": args.k, "beta": args.beta})
    try:
        if name == "hurwitz":
            if not args.alpha:
                raise UsageError("hurwitz needs --alpha")
            value = formulas.hurwitz_number(_alpha(args.alpha))
        elif name == "kcycle":
            if args.n is None or args.k is None:
                raise UsageError("kcycle needs --n and --k")
            value = formulas.kcycle_inequivalent_fullcycle(args.n, args.k)
        else:
            if args.n is None:
                raise UsageError(f"{name} needs --n")
            index = _index(args.index)
            if name == "ordered":
                value = formulas.springer_ordered(args.n, index)
            elif name == "inequivalent":
                value = formulas.springer_inequivalent(args.n, index)
            elif name == "lagrange-ordered":
                value = formulas.lagrange_ordered(args.n, index)
            elif name == "lagrange-inequivalent":
                value = formulas.lagrange_inequivalent(args.n, index)
            else:
                if not args.beta:
                    raise UsageError("beta needs --beta")
                value = formulas.beta_inequivalent_fullcycle(args.n, _alpha(args.beta), index)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report.results["value"] = value
    return report


# -- verify -------------------------------------------------------------------------


def cmd_verify(args) -> RunReport:
    if args.nmax is not None and not 1 <= args.nmax <= MAX_VERIFY_N:
        raise UsageError(f"--nmax must be between 1 and {MAX_VERIFY_N}")
    bounds = verify_mod.Bounds.quick(args.seed) if args.suite == "quick" else verify_mod.Bounds.full(args.seed)
    if args.nmax is not None:
        bounds = bounds.capped(args.nmax)
    groups = args.group or None
    if groups and any(not 1 <= g <= len(verify_mod.GROUPS) for g in groups):
        raise UsageError("--group must name criteria 1..10")
    report = RunReport("verify", {"suite": args.suite, "nmax": args.nmax, "seed": args.seed, "groups": groups})
    results = verify_mod.run_all(bounds, groups)
    report.results["groups"] = [r.line() for r in results]
    report.results["failed groups"] = sum(not r.passed for r in results)
    report.checks = [c for r in results for c in r.as_dict()["checks"]]
    if not args.json:
        # the group lines already summarize; keep text output short
        report.checks = [c for c in report.checks if not c["passed"]]
    return report


# -- parser ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cyclefact", description="Minimal transitive cycle factorizations: counts, maps and series.")
    p.add_argument("--version", action="version", version=f"cyclefact {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="emit the JSON run report")
        return sp

    c = common(sub.add_parser("count", help="count factorizations of a permutation of type alpha"))
    c.add_argument("--alpha", required=True, help="cycle type, e.g. 2,1")
    c.add_argument("--index", default=None, help="cycle index k:count,..., e.g. 2:3")
    c.add_argument("--mode", choices=["ordered", "classes"], default="ordered")
    c.add_argument("--method", choices=["oracle", "formula", "series", "all"], default="all")
    c.set_defaults(func=cmd_count)

    for name, func, text in (
        ("enumerate", cmd_enumerate, "list every factorization"),
        ("classes", cmd_classes, "list commutation classes"),
    ):
        e = common(sub.add_parser(name, help=text))
        e.add_argument("--perm", required=True, help='target in cycle notation, e.g. "(1 2 3)"')
        e.add_argument("--degree", type=int, default=None, help="degree when trailing points are fixed")
        e.add_argument("--index", default=None)
        if name == "enumerate":
            e.add_argument("--format", choices=["text", "json"], default="text")
        e.set_defaults(func=func)

    s = common(sub.add_parser("series", help="expand a generating series"))
    s.add_argument("--which", required=True, choices=["w", "wtilde", "H2", "H2tilde", "circ", "necklace"])
    s.add_argument("--trunc", type=int, default=None, help="largest n (x-degree) kept")
    s.add_argument("--kmax", type=int, default=None, help="largest k with a variable q_k")
    s.add_argument("--set", action="append", help="specialize, e.g. u=1,q2=1")
    s.add_argument("--zero-others", action="store_true", help="set unnamed q_k and u to 0")
    s.add_argument("--coeff", default=None, help="monomial, e.g. x1^2,x2^1,q2^3,u^3")
    s.set_defaults(func=cmd_series)

    m = common(sub.add_parser("map", help="build and export maps of factorizations"))
    m.add_argument("--perm", default=None)
    m.add_argument("--degree", type=int, default=None)
    m.add_argument("--index", default=None)
    m.add_argument("--factors", default=None, help='one factorization, factors separated by ";" (leftmost acts last)')
    m.add_argument("--stage", choices=["constellation", "polymap", "marked", "core"], default="polymap")
    m.add_argument("--export", choices=["json", "dot"], default=None)
    m.add_argument("--out", default="maps_out", help="output directory for exported files")
    m.add_argument("--roundtrip", action="store_true", help="check every bijection round trip")
    m.add_argument("--nmax", type=int, default=None)
    m.set_defaults(func=cmd_map)

    f = common(sub.add_parser("formula", help="evaluate a closed formula"))
    f.add_argument("name", choices=FORMULAS)
    f.add_argument("--alpha", default=None)
    f.add_argument("--n", type=int, default=None)
    f.add_argument("--index", default=None)
    f.add_argument("--k", type=int, default=None)
    f.add_argument("--beta", default=None)
    f.set_defaults(func=cmd_formula)

    v = common(sub.add_parser("verify", help="run the acceptance checks"))
    v.add_argument("--suite", choices=["quick", "full"], default="quick")
    v.add_argument("--nmax", type=int, default=None)
    v.add_argument("--seed", type=int, default=verify_mod.DEFAULT_SEED)
    v.add_argument("--group", type=int, action="append", help="run only this criterion (repeatable)")
    v.set_defaults(func=cmd_verify)
    return p


def _emit(report: RunReport, as_json: bool) -> None:
    print(report.to_json() if as_json else report.to_text())


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on --help, --version and malformed arguments
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    start = time.perf_counter()
    try:
        report = args.func(args)
    except UsageError as exc:
        print(f"cyclefact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundExceededError as exc:
        print(f"cyclefact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SeriesError, InfeasibleIndexError) as exc:
        print(f"cyclefact: error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CommandFailure as exc:
        print(f"cyclefact: error: {exc}", file=sys.stderr)
        if exc.report is not None:
            exc.report.seconds = time.perf_counter() - start
            _emit(exc.report, args.json)
        return exc.code
    report.seconds = time.perf_counter() - start
    _emit(report, args.json)
    if args.command == "verify":
        return min(report.results["failed groups"], 125)
    return 0


if __name__ == "__main__":
    sys.exit(main())
