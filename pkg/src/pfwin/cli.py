"""``pfwin`` command line.

Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 word or path error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any, Sequence

from . import __version__
from . import intlinalg as la
from .bwb import cohomology_S_bundle, p6_line_cohomology
from .cache import ResultCache, convention_version
from .errors import InvalidInputError, PfwinError, WordError
from .extcalc import ext_G, higher_ext_vanishes_XG, higher_ext_vanishes_XP
from .weights import SBundle, dual_to_S_form

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_WORD = 0, 1, 2, 3

_BUNDLE_RE = re.compile(
    r"^\s*(?:(?P<O>O)|(?P<S>S)|Sym\^(?P<l>\d+)\s*S(?P<dual>\^v)?)\s*\(\s*(?P<m>[+-]?\d+)\s*\)\s*$"
)


def parse_bundle(text: str) -> SBundle:
    """``O(m)``, ``S(m)``, ``Sym^l S(m)`` or ``Sym^l S^v(m)``."""
    match = _BUNDLE_RE.match(text)
    if not match:
        head = text.strip().split("(")[0] or text
        raise InvalidInputError(f"cannot parse bundle expression {text!r} near {head!r}")
    m = int(match["m"])
    if match["O"]:
        return SBundle(0, m)
    if match["S"]:
        return SBundle(1, m)
    l = int(match["l"])
    return dual_to_S_form(l, m) if match["dual"] else SBundle(l, m)


def bundle_json(e: SBundle) -> dict[str, int]:
    return {"l": e.l, "m": e.m}


def bundle_from_json(d: dict[str, int]) -> SBundle:
    return SBundle(int(d["l"]), int(d["m"]))


def parse_triple(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InvalidInputError(f"window tuple must be three comma-separated integers, got {text!r}")
    if len(parts) != 3:
        raise InvalidInputError(f"window tuple must have three entries, got {text!r}")
    return parts  # type: ignore[return-value]


def _emit(payload: Any, as_json: bool, human: str | None = None) -> None:
    if as_json or human is None:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def cmd_cohomology(args: argparse.Namespace) -> int:
    e = parse_bundle(args.bundle)
    if args.space == "p6":
        if e.l != 0:
            raise InvalidInputError(f"only line bundles O(d) live on P^6, got {args.bundle!r}")
        prof = p6_line_cohomology(e.m)
    else:
        prof = cohomology_S_bundle(e)
    _emit({"space": args.space, "bundle": bundle_json(e), "cohomology": prof.to_json()}, True)
    return EXIT_OK


def cmd_ext(args: argparse.Namespace) -> int:
    e, f = parse_bundle(args.source), parse_bundle(args.target)
    out: dict[str, Any] = {"source": bundle_json(e), "target": bundle_json(f), "phase": args.phase}
    if args.phase == "G":
        prof = ext_G(e, f)
        out.update({"ext": prof.to_json(), "euler": prof.euler()})
    elif args.phase == "XG":
        out["certificate"] = higher_ext_vanishes_XG(e, f, margin=args.margin).to_json()
    else:
        out["certificate"] = higher_ext_vanishes_XP(e, f).to_json()
    _emit(out, True)
    return EXIT_OK


def cmd_euler(args: argparse.Namespace) -> int:
    from .klattice import chi_G, chi_Y

    e, f = parse_bundle(args.source), parse_bundle(args.target)
    value = chi_G(e, f) if args.on == "G" else chi_Y(e, f)
    _emit({"on": args.on, "source": bundle_json(e), "target": bundle_json(f), "chi": value}, True)
    return EXIT_OK


def window_report(m: tuple[int, int, int], full: bool, chain: bool) -> dict[str, Any]:
    from .klattice import gram, kapranov_fullness_certificate, serre_mutation_identity
    from .windows import build_window, check_exceptionality, mutation_chain

    w = build_window(m)
    rep = check_exceptionality(w)
    out: dict[str, Any] = {"m": list(w.m), "generators": [str(e) for e in w.generators]}
    out["exceptionality"] = rep.to_json()
    checks = {"exceptional": rep.verdict}
    if rep.verdict:
        g = gram(w, rep.order)
        checks["gram_unit_triangular"] = g.is_unit_upper_triangular()
    cert = kapranov_fullness_certificate(w)
    out["kapranov_det"] = cert.det
    checks["full"] = cert.verdict
    if full:
        checks["serre_identity"] = serre_mutation_identity(w)
        pairs = [(e, f) for e in w.generators for f in w.generators]
        checks["XG_vanishing"] = all(higher_ext_vanishes_XG(e, f) for e, f in pairs)
        checks["XP_vanishing"] = all(higher_ext_vanishes_XP(e, f) for e, f in pairs)
    if chain:
        steps = mutation_chain()
        out["mutation_chain"] = [s.to_json() for s in steps]
        checks["mutation_chain"] = all(s.ok for s in steps)
    out["checks"] = checks
    out["ok"] = all(checks.values())
    return out


def cmd_window(args: argparse.Namespace, cache: ResultCache) -> int:
    from .windows import validate_triple

    m = validate_triple(parse_triple(args.m))
    full = args.full
    out = cache.fetch("window", [list(m), full, args.mutate_chain], lambda: window_report(m, full, args.mutate_chain))
    human = "\n".join(
        [f"window {tuple(out['m'])}: {'PASS' if out['ok'] else 'FAIL'}", f"  kapranov det {out['kapranov_det']}"]
        + [f"  {k}: {v}" for k, v in out["checks"].items()]
    )
    _emit(out, args.json, human)
    return EXIT_OK if out["ok"] else EXIT_FAILED


def cmd_mutate(args: argparse.Namespace) -> int:
    from .windows import build_window, mutate_at, mutation_chain, window_from_generators

    if args.m is None:
        steps = mutation_chain()
        out = {"steps": [s.to_json() for s in steps], "ok": all(s.ok for s in steps)}
        human = "\n".join(
            f"{s.source} -> {s.target} at {s.mutated}: {'PASS' if s.ok else 'FAIL'}" for s in steps
        )
        _emit(out, args.json, human)
        return EXIT_OK if out["ok"] else EXIT_FAILED
    if args.at is None:
        raise InvalidInputError("--at is required with --m")
    w = build_window(parse_triple(args.m))
    gens = mutate_at(w.generators, parse_bundle(args.at))
    target = window_from_generators(gens)
    out = {
        "generators": [str(e) for e in gens],
        "window": list(target.m) if target else None,
    }
    _emit(out, args.json, f"result window: {out['window']}")
    return EXIT_OK


def cmd_cy3(args: argparse.Namespace) -> int:
    from .klattice import build_cy3_lattice, pinned_koszul_sign

    lat = build_cy3_lattice()
    out = {
        "rank": lat.rank,
        "J": la.to_lists(lat.J),
        "invariant_factors": list(lat.invariant_factors),
        "discriminant": lat.discriminant,
        "res": la.to_lists(lat.res),
        "koszul_sign": pinned_koszul_sign(),
    }
    _emit(out, True)
    return EXIT_OK


def cmd_monodromy(args: argparse.Namespace) -> int:
    from .skms import check_relations, evaluate_direct, evaluate_path, format_word, parse_word, reduce_path

    if args.check_relations:
        rep = check_relations(samples=args.samples, seed=args.seed)
        _emit(rep.to_json(), True)
        return EXIT_OK if rep.ok else EXIT_FAILED
    if args.word is None:
        raise InvalidInputError("a word is required unless --check-relations is given")
    word = parse_word(args.word)
    mat = evaluate_direct(word) if args.direct else evaluate_path(word)
    out = {"word": format_word(word), "reduced": format_word(reduce_path(word)), "matrix": la.to_lists(mat)}
    _emit(out, True)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, cache: ResultCache) -> int:
    from .verify import CRITERIA, CheckResult, run_all

    numbers = sorted(CRITERIA) if not args.only else sorted({int(x) for x in args.only.split(",")})
    bad = [n for n in numbers if n not in CRITERIA]
    if bad:
        raise InvalidInputError(f"unknown criterion numbers {bad}")
    results: dict[int, dict] = {}
    todo = []
    for n in numbers:
        hit = None if args.timings else cache.get("verify", n)
        if hit is not None:
            results[n] = hit
        else:
            todo.append(n)
    for res in run_all(todo, workers=args.workers):
        results[res.number] = res.to_json(timings=args.timings)
        if not args.timings:
            cache.put("verify", res.number, results[res.number])
    ordered = [results[n] for n in numbers]
    passed = all(r["passed"] for r in ordered)
    report = {
        "tool": "pfwin",
        "version": __version__,
        "conventions": convention_version(),
        "checks": ordered,
        "passed": passed,
    }
    lines = [
        f"criterion {r['number']:2d} [{'PASS' if r['passed'] else 'FAIL'}] {r['name']}"
        + (f"  ({r['seconds']}s)" if "seconds" in r else "")
        for r in ordered
    ]
    first_bad = next((r for r in ordered if not r["passed"]), None)
    if first_bad:
        lines.append(f"first failure: criterion {first_bad['number']}: {first_bad['witness']}")
    lines.append("overall: " + ("PASS" if passed else "FAIL"))
    _emit(report, args.json, "\n".join(lines))
    return EXIT_OK if passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pfwin", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"pfwin {__version__}")
    p.add_argument("--no-cache", action="store_true", help="bypass the on-disk result cache")
    p.add_argument("--cache-dir", default=None, help="cache directory (default: $PFWIN_CACHE or user cache)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cohomology", help="sheaf cohomology of Sym^l S(m) or O_P6(d)")
    c.add_argument("bundle")
    c.add_argument("--space", choices=("g27", "p6"), default="g27")

    e = sub.add_parser("ext", help="Ext on G(2,7) or a vanishing certificate on a phase")
    e.add_argument("source")
    e.add_argument("target")
    e.add_argument("--phase", choices=("G", "XG", "XP"), default="G")
    e.add_argument("--margin", type=int, default=0, help="extra grades scanned past the XG bound")

    u = sub.add_parser("euler", help="Euler pairing on G(2,7) or on the CY3 section")
    u.add_argument("source")
    u.add_argument("target")
    u.add_argument("--on", choices=("G", "Y"), default="G")

    w = sub.add_parser("window", help="build and check a window W^m")
    w.add_argument("--m", required=True, help="comma-separated triple, e.g. 0,0,0")
    w.add_argument("--check", action="store_true", help="exceptionality, Gram and fullness (default)")
    w.add_argument("--full", action="store_true", help="also Serre identity and both phase sweeps")
    w.add_argument("--mutate-chain", action="store_true", help="also replay the mutation chain")
    w.add_argument("--json", action="store_true")

    mu = sub.add_parser("mutate", help="replay the mutation chain or mutate one generator")
    mu.add_argument("--m", default=None)
    mu.add_argument("--at", default=None, help="generator moved across the collection")
    mu.add_argument("--json", action="store_true")

    sub.add_parser("cy3", help="numerical lattice of the CY3 section")

    mo = sub.add_parser("monodromy", help="evaluate a loop word on the CY3 lattice")
    mo.add_argument("word", nargs="?")
    mo.add_argument("--direct", action="store_true", help="evaluate through Z^21 without rewriting")
    mo.add_argument("--check-relations", action="store_true")
    mo.add_argument("--samples", type=int, default=100)
    mo.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="run the acceptance checks")
    v.add_argument("--json", action="store_true")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--only", default=None, help="comma-separated criterion numbers")
    v.add_argument("--timings", action="store_true", help="include wall-clock timings (not cached)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cache = ResultCache(args.cache_dir, enabled=not args.no_cache)
    handlers = {
        "cohomology": lambda: cmd_cohomology(args),
        "ext": lambda: cmd_ext(args),
        "euler": lambda: cmd_euler(args),
        "window": lambda: cmd_window(args, cache),
        "mutate": lambda: cmd_mutate(args),
        "cy3": lambda: cmd_cy3(args),
        "monodromy": lambda: cmd_monodromy(args),
        "verify": lambda: cmd_verify(args, cache),
    }
    try:
        return handlers[args.command]()
    except WordError as exc:
        print(f"pfwin: {exc}", file=sys.stderr)
        return EXIT_WORD
    except InvalidInputError as exc:
        print(f"pfwin: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PfwinError as exc:
        print(f"pfwin: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
