"""Command line entry point: ``kmoduli <command> [options]``.

Every command writes sorted-key JSON (or a markdown rendering) to stdout or
``--output``.  Exit status: 0 success, 1 golden-table mismatch, 2 bad input;
input errors are reported as a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import git_hm, kstability, toricdeform, walls, weierstrass
from .algebra import MultiPoly, PiecewisePoly, Q, fmt, integrate
from .data import dumps, load_json

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.detail = detail


def _read_input(path: str) -> Any:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return json.loads(text)
    except OSError as exc:
        raise InputError(f"cannot read input: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"input is not valid JSON: {exc}") from exc


def _markdown(obj: Any, title: str) -> str:
    lines = [f"## {title}", ""]
    if isinstance(obj, dict) and all(isinstance(v, list) and v and isinstance(v[0], dict) for v in obj.values()):
        for name, rows in sorted(obj.items()):
            lines += [f"### {name}", "", *_md_table(rows), ""]
        return "\n".join(lines)
    if isinstance(obj, dict):
        lines += ["| key | value |", "|---|---|"]
        for k in sorted(obj):
            lines.append(f"| {k} | {json.dumps(obj[k], sort_keys=True)} |")
        return "\n".join(lines) + "\n"
    return "\n".join(lines + [json.dumps(obj, sort_keys=True)]) + "\n"


def _md_table(rows: list[dict]) -> list[str]:
    keys = sorted({k for r in rows for k in r})
    out = ["| " + " | ".join(keys) + " |", "|" + "---|" * len(keys)]
    for r in rows:
        cells = [r.get(k, "") for k in keys]
        out.append("| " + " | ".join(c if isinstance(c, str) else json.dumps(c) for c in cells) + " |")
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_beta(args: argparse.Namespace) -> tuple[Any, int]:
    profiles = kstability.load_profiles()
    prof = profiles.get(args.profile)
    if not isinstance(prof, kstability.ValuationProfile):
        names = sorted(k for k, v in profiles.items() if isinstance(v, kstability.ValuationProfile))
        raise InputError(f"unknown valuation profile {args.profile!r}", available=names)
    if args.threshold:
        return {"profile": prof.name, "threshold": kstability.kst_threshold(prof).to_json()}, EXIT_OK
    if args.c is None:
        raise InputError("give --c or --threshold")
    c = Q(args.c)
    return {
        "profile": prof.name,
        "c": fmt(c),
        "A": fmt(prof.A(c)),
        "S": fmt(kstability.s_invariant(prof, c)),
        "beta": fmt(kstability.beta(prof, c)),
    }, EXIT_OK


def cmd_limit(args: argparse.Namespace) -> tuple[Any, int]:
    obj = _read_input(args.input)
    if "shah" in obj:
        q, g = git_hm.shah_polys(git_hm.ShahInput.from_json(obj["shah"]))
    else:
        q = MultiPoly.from_json(obj["q"])
        g = MultiPoly.from_json(obj["g"])
    lam = git_hm.OneParamSubgroup(tuple(Q(w) for w in obj["weights"]))
    return git_hm.limit_pair(q, g, lam).to_json(), EXIT_OK


def cmd_shah(args: argparse.Namespace) -> tuple[Any, int]:
    inp = git_hm.ShahInput.from_json(_read_input(args.input))
    return git_hm.shah_stratify(inp).to_json(), EXIT_OK


def cmd_weierstrass(args: argparse.Namespace) -> tuple[Any, int]:
    obj = _read_input(args.input)
    out: dict[str, Any] = {}
    if "section" in obj:
        pair = weierstrass.to_weierstrass(weierstrass.AntiCanSection.from_json(obj["section"]))
        out["pair"] = pair.to_json()
    else:
        pair = weierstrass.WeierstrassPair.from_json(obj)
    disc = weierstrass.discriminant(pair)
    out["discriminant"] = disc.to_json()
    out["discriminant_degree"] = disc.degree
    out.update(weierstrass.slc_check(pair).to_json())
    if "hm" in obj:
        hm = obj["hm"]
        out["hm_weight"] = fmt(weierstrass.hm_weight_ws(pair, Q(hm["r"]), hm["shift"]))
    return out, EXIT_OK


def cmd_toric(args: argparse.Namespace) -> tuple[Any, int]:
    obj = _read_input(args.input)
    out: dict[str, Any] = {}
    if "cone" in obj:
        sigma = toricdeform.Cone(tuple(tuple(v) for v in obj["cone"]))
        out["dual_cone"] = toricdeform.dual_cone(sigma).to_json()
        if "basis" in obj:
            v1, v2, v3 = ([Q(x) for x in v] for v in obj["basis"])
            try:
                poly = toricdeform.polytope_slice(sigma, v1, v2, v3)
            except toricdeform.UnboundedSlice as exc:
                raise InputError(str(exc), ray=[fmt(x) for x in exc.ray]) from exc
        else:
            poly = None
    else:
        poly = toricdeform.Polytope2D.from_json(obj)
    if poly is not None:
        out["polygon"] = poly.to_json()
        try:
            out["versal"] = toricdeform.versal_base(poly, args.K).to_json()
        except toricdeform.HigherDegreeObstruction as exc:
            out["versal"] = {"obstruction_degree": exc.degree, "residue": exc.residue.to_json()}
    return out, EXIT_OK


def cmd_walls(args: argparse.Namespace) -> tuple[Any, int]:
    if args.tables:
        rows, unmatched = walls.a_to_c_bridge()
        led = walls.ledger()
        return {
            "a_walls": [fmt(a) for a in walls.a_walls()],
            "c_walls": [fmt(c) for c in walls.c_walls()],
            "bridge": [{"a": fmt(r.a), "c": fmt(r.c), "matched": r.matched} for r in rows],
            "unmatched_c": [fmt(c) for c in unmatched],
            "unigonal_wall": fmt(walls.unigonal_wall()),
            "flips": [
                {"i": i, "a": fmt(walls.a_walls()[i - 1]), "centres": list(walls.flip_centres_a(i))}
                for i in range(1, 8)
            ],
            "strata_chains": led["strata_chains"],
            "boundary_coeffs": [fmt(x) for x in walls.solve_boundary_coeffs()],
        }, EXIT_OK
    if args.a is None or args.b is None:
        raise InputError("give --a and --b, or --tables")
    a, b = Q(args.a), Q(args.b)
    out = {"a": fmt(a), "b": fmt(b), "c": fmt(walls.c_of_a(a)), "chamber": walls.chamber(a, b).to_json()}
    if 0 < a < 1 and 0 < b < 1:
        out["ample_certificate"] = walls.ample_certificate(a, b).to_json()
    return out, EXIT_OK


def build_tables(slope_overrides: dict[int, Fraction] | None = None) -> dict[str, list[dict]]:
    """Regenerate both tables from the ledger, computing every kst entry."""
    led = load_json(walls.LEDGER_FILE)
    slopes = {int(r["i"]): Q(r["t"]) for r in led["table2"]}
    slopes.update(slope_overrides or {})
    ord_q = kstability.load_profiles()["ord_Q"]
    t1 = []
    for row in git_hm.table1():
        if row.i == 0:
            kst = kstability.kst_threshold(ord_q).value
            source = "kst_threshold(ord_Q)"
        else:
            kst = walls.kst_from_slope(slopes[row.i])
            source = f"kst_from_slope({fmt(slopes[row.i])})"
        t1.append({
            "i": row.i,
            "kst": fmt(kst),
            "singularity": row.singularity,
            "weights": row.weights.labels(),
            "provenance": {"kst": source, "weights": "ledger table1"},
        })
    t2 = [
        {
            "i": i,
            "t": fmt(t),
            "kst": fmt(walls.kst_from_slope(t)),
            "provenance": {"kst": "(1+2t)/(3-2t)", "t": "override" if i in (slope_overrides or {}) else "ledger table2"},
        }
        for i, t in sorted(slopes.items())
    ]
    return {"table1": t1, "table2": t2}


PROVENANCE_KEYS = frozenset({"provenance"})


def diff_tables(got: dict[str, list[dict]], golden: dict[str, list[dict]]) -> list[dict]:
    """Field-level differences, ignoring provenance annotations."""
    diffs = []
    for name in sorted(golden):
        want_rows = {r["i"]: r for r in golden[name]}
        got_rows = {r["i"]: r for r in got.get(name, [])}
        for i in sorted(set(want_rows) | set(got_rows)):
            w, g = want_rows.get(i), got_rows.get(i)
            if w is None or g is None:
                diffs.append({"table": name, "i": i, "field": "row", "expected": w, "got": g})
                continue
            for k in sorted((set(w) | set(g)) - PROVENANCE_KEYS):
                if w.get(k) != g.get(k):
                    diffs.append({"table": name, "i": i, "field": k, "expected": w.get(k), "got": g.get(k)})
    return diffs


def cmd_tables(args: argparse.Namespace) -> tuple[Any, int]:
    overrides = {}
    for spec in args.slope or []:
        try:
            i, t = spec.split("=")
            overrides[int(i)] = Q(t)
        except ValueError as exc:
            raise InputError(f"--slope expects I=T, got {spec!r}") from exc
    got = build_tables(overrides)
    golden = {"table1": load_json("golden/table1.json"), "table2": load_json("golden/table2.json")}
    diffs = diff_tables(got, golden)
    out: dict[str, Any] = dict(got)
    if diffs:
        out["diff"] = diffs
    return out, EXIT_MISMATCH if diffs else EXIT_OK


def cmd_integrate(args: argparse.Namespace) -> tuple[Any, int]:
    P = PiecewisePoly.from_json(_read_input(args.input))
    return {"integral": fmt(integrate(P))}, EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default="-", help="input JSON file (default: stdin)")
    common.add_argument("--output", default=None, help="write result here instead of stdout")
    common.add_argument("--format", choices=("json", "markdown"), default="json")

    p = argparse.ArgumentParser(prog="kmoduli", description="Exact K-moduli wall-crossing toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("beta", parents=[common], help="beta invariant or threshold of a bundled profile")
    s.add_argument("--profile", required=True)
    s.add_argument("--c")
    s.add_argument("--threshold", action="store_true")
    s.set_defaults(func=cmd_beta)

    s = sub.add_parser("limit", parents=[common], help="limit pair under a one-parameter subgroup")
    s.set_defaults(func=cmd_limit)

    s = sub.add_parser("shah", parents=[common], help="classify a Shah normal form")
    s.set_defaults(func=cmd_shah)

    s = sub.add_parser("weierstrass", parents=[common], help="discriminant and slc check of a Weierstrass pair")
    s.set_defaults(func=cmd_weierstrass)

    s = sub.add_parser("toric-deform", parents=[common], help="dual cone, slice polygon, versal base")
    s.add_argument("--K", type=int, default=12, help="highest degree g_k to verify")
    s.set_defaults(func=cmd_toric)

    s = sub.add_parser("walls", parents=[common], help="chamber of (a, b) or the wall tables")
    s.add_argument("--a")
    s.add_argument("--b")
    s.add_argument("--tables", action="store_true")
    s.set_defaults(func=cmd_walls)

    s = sub.add_parser("tables", parents=[common], help="regenerate the wall tables and diff against golden")
    s.add_argument("--slope", action="append", metavar="I=T", help="override the slope of row I")
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("integrate", parents=[common], help="integrate a piecewise polynomial")
    s.set_defaults(func=cmd_integrate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, code = args.func(args)
    except InputError as exc:
        sys.stderr.write(dumps({"error": {"message": str(exc), **exc.detail}}))
        return EXIT_INPUT
    except (ValueError, TypeError, KeyError, ArithmeticError) as exc:
        sys.stderr.write(dumps({"error": {"message": str(exc), "type": type(exc).__name__}}))
        return EXIT_INPUT
    text = dumps(result) if args.format == "json" else _markdown(result, args.command)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
