"""Command-line front end.

Modules are named as in the definition files (``-f``), falling back to the
shipped examples, or as ``RING:R``, ``RING:k``, ``RING:omega``.
Exit codes: 0 success, 1 a property failed or a mutant went undetected,
2 usage error, 3 engine error (the machine-readable code is printed).
"""

from __future__ import annotations

import argparse
import difflib
import json
import os
import sys
import time
from typing import Any

from . import __version__
from .approx import (
    ab_approximation,
    default_tests,
    gperp_cover_approximation,
    left_g_approximation,
    rapg_triplet,
    verify_datum,
)
from .dsl import Library, example_library, field_from_text, iter_examples, load
from .errors import TotrefError, UnknownModule, UnknownRing
from .gtheory import gcheck, gdim, invariants
from .homology import cosyzygy_power, ext, r_dual, resolve, syzygy, transpose
from .modules import FinModule, is_free
from .stable import stable_hom, tate
from .verify import ALL, builtin_corpus, generate_corpus, mutant_check, run_properties

SCHEMA = "totref-report/1"


class UsageError(Exception):
    pass


def _env_bound() -> int:
    raw = os.environ.get("TOTREF_BOUND", "8")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"TOTREF_BOUND must be an integer, got {raw!r}") from None


# -- output helpers -----------------------------------------------------------------------


def table(rows: list[tuple[str, Any]]) -> str:
    w = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(w)}  {v}" for k, v in rows)


def grid(header: list[str], rows: list[list[Any]]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    numeric = [all(r[i].lstrip("-").isdigit() for r in cells[1:]) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) if num else c.ljust(w) for c, w, num in zip(r, widths, numeric)).rstrip()
             for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def module_summary(M: FinModule) -> dict:
    vdim, nu, mm, b1, ann, soc = invariants(M)
    return {"label": M.label, "vdim": vdim, "nu": nu, "beta1": b1, "socle_dim": soc,
            "annihilator_dim": ann, "free": is_free(M)}


def module_rows(M: FinModule) -> list[tuple[str, Any]]:
    s = module_summary(M)
    return [("module", s["label"] or "-"), ("vdim", s["vdim"]), ("generators", s["nu"]),
            ("relations", s["beta1"]), ("socle dim", s["socle_dim"]), ("free", s["free"])]


# -- commands -----------------------------------------------------------------------------
# each returns (text for stdout, results dict, certificates list, exit code)


def cmd_ring_check(lib: Library, a) -> tuple:
    R = lib.ring(a.ring)
    info = R.to_json()
    info["variables"] = R.variables
    info["socle"] = [R.format_element(v) for v in R.socle().T]
    rows = [("ring", R.name), ("field", info["field"]), ("dim", R.dim), ("basis", " ".join(R.labels)),
            ("socle", ", ".join(info["socle"])), ("socle dim", info["socle_dim"]),
            ("gorenstein", info["gorenstein"]), ("loewy length", info["loewy_length"])]
    return table(rows), info, [], 0


def cmd_resolve(lib: Library, a) -> tuple:
    M = lib.module(a.module)
    seg = resolve(M, a.steps)
    res = {"module": module_summary(M), "steps": a.steps, "betti": seg.betti,
           "minimal": seg.is_minimal(), "exact": seg.is_exact(),
           "differentials": [d.format() for d in seg.differentials]}
    lines = [table([("module", M.label), ("betti", " ".join(map(str, seg.betti))),
                    ("minimal", res["minimal"]), ("exact", res["exact"])])]
    for i, d in enumerate(res["differentials"], start=1):
        lines.append(f"d{i}: " + " ; ".join(", ".join(r) for r in d))
    return "\n".join(lines), res, [], 0


def _module_op(fn, name):
    def run(lib: Library, a) -> tuple:
        M = lib.module(a.module)
        N = fn(M, a)
        N.label = N.label or f"{name}({M.label})"
        res = {"input": module_summary(M), "output": module_summary(N), "module": N.to_json()}
        return table(module_rows(N)), res, [], 0
    return run


cmd_syzygy = _module_op(lambda M, a: syzygy(M, a.n), "Omega")
cmd_cosyzygy = _module_op(lambda M, a: cosyzygy_power(M, a.n), "Omega^-1")
cmd_dual = _module_op(lambda M, a: r_dual(M), "dual")
cmd_transpose = _module_op(lambda M, a: transpose(M), "Tr")


def cmd_ext(lib: Library, a) -> tuple:
    M, N = lib.module(a.module), lib.module(a.target)
    dims = [{"i": i, "dim": ext(M, N, i).dim} for i in a.i]
    body = grid(["i", "dim Ext^i"], [[d["i"], d["dim"]] for d in dims])
    return body, {"source": M.label, "target": N.label, "ext": dims}, [], 0


def cmd_stablehom(lib: Library, a) -> tuple:
    M, N = lib.module(a.module), lib.module(a.target)
    S = stable_hom(M, N)
    res = {"source": M.label, "target": N.label, **S.to_json()}
    rows = [("Hom", S.hom.dim), ("through free", res["p_dim"]), ("stable Hom", S.dim)]
    return table(rows), res, [], 0


def cmd_tate(lib: Library, a) -> tuple:
    X, M = lib.module(a.module), lib.module(a.target)
    if a.i is not None:
        idx = [a.i]
    else:
        w = 2 if a.window is None else a.window
        idx = list(range(-w, w + 1))
    vals = [tate(X, M, i, a.bound) for i in idx]
    g = gcheck(X, a.bound)
    res = {"source": X.label, "target": M.label, "values": [v.to_json() for v in vals]}
    body = grid(["i", "dim", "route A", "route B", "agree"],
                [[v.i, v.dim, v.route_a, v.route_b, v.agree] for v in vals])
    return body, res, [{"module": X.label, **g.to_json()}], 0 if all(v.agree for v in vals) else 1


def cmd_gcheck(lib: Library, a) -> tuple:
    M = lib.module(a.module)
    g = gcheck(M, a.bound)
    rows = [("module", M.label), ("verdict", g.verdict), ("bound", g.bound)]
    if g.period:
        rows.append(("period", f"({g.period[0]},{g.period[1]})"))
    if g.witness:
        rows.append(("witness", json.dumps(g.witness, sort_keys=True)))
    res = {"module": module_summary(M), "verdict": g.verdict,
           "period": list(g.period) if g.period else None}
    return table(rows), res, [{"module": M.label, **g.to_json()}], 0


def cmd_gdim(lib: Library, a) -> tuple:
    M = lib.module(a.module)
    g = gdim(M, a.bound)
    rows = [("module", M.label), ("Gdim", str(g)), ("bound", g.bound),
            ("dim Ext^i(M,R)", " ".join(map(str, g.ext_dims)))]
    if g.searched is not None:
        rows.append(("searched up to", f"Omega^{g.searched} (size cap)"))
    return table(rows), {"module": module_summary(M), **g.to_json()}, [], 0


def _tests_for(lib: Library, M: FinModule, names: str | None, bound: int, nonfree: bool) -> list[FinModule]:
    if names:
        tests = [lib.module(n.strip()) for n in names.split(",") if n.strip()]
    else:
        tests = [N for N in lib.modules.values()
                 if N.R is M.R and not is_free(N) and gcheck(N, bound).certified]
    return tests if nonfree else default_tests(M.R, [T for T in tests if not is_free(T)])


def _datum_rows(D, chk) -> list[tuple[str, Any]]:
    return [("target", D.target.label), ("X vdim", D.X.dim), ("X generators", D.X.nu),
            ("Y vdim", D.Y.dim), ("Y kind", D.y_kind), ("minimal", D.minimal),
            ("identity-like", D.identity_like), ("tests", ", ".join(T.label for T in D.tests)),
            ("postconditions", "ok" if chk.ok else "FAILED " + ", ".join(chk.failed()))]


def cmd_approx(lib: Library, a) -> tuple:
    M = lib.module(a.module)
    if a.kind == "left-g":
        tests = _tests_for(lib, M, a.tests, a.bound, nonfree=False)
        L = left_g_approximation(M, a.bound, tests)
        chk = L.verify(tests, a.bound)
        res = {"kind": a.kind, "module": M.label, "X": module_summary(L.X),
               "checks": chk.checks, "ok": chk.ok}
        rows = [("module", M.label), ("X vdim", L.X.dim), ("X generators", L.X.nu),
                ("postconditions", "ok" if chk.ok else "FAILED " + ", ".join(chk.failed()))]
        return table(rows), res, [], 0 if chk.ok else 1
    if a.kind == "right-g":
        tests = _tests_for(lib, M, a.tests, a.bound, nonfree=False)
        D = ab_approximation(M, a.bound, tests)
        chk = verify_datum(D, tests, a.bound)
    else:
        tests = _tests_for(lib, M, a.tests, a.bound, nonfree=True)
        D = gperp_cover_approximation(M, tests, a.bound)
        chk = verify_datum(D, default_tests(M.R, tests), a.bound)
    res = {"kind": a.kind, "datum": D.to_json(), "checks": chk.checks, "ok": chk.ok}
    return table(_datum_rows(D, chk)), res, [], 0 if chk.ok else 1


def cmd_triplet(lib: Library, a) -> tuple:
    M = lib.module(a.module)
    # finite G-dimension gives a datum with Y of finite projective dimension;
    # otherwise M must lie in G-perp and its free cover is used
    if gdim(M, a.bound).finite:
        tests = _tests_for(lib, M, a.tests, a.bound, nonfree=False)
        D = ab_approximation(M, a.bound, tests)
    else:
        tests = _tests_for(lib, M, a.tests, a.bound, nonfree=True)
        D = gperp_cover_approximation(M, tests, a.bound)
    T = rapg_triplet(D)
    chk = T.verify(tests, a.bound)
    res = {"module": M.label, "X_prime": module_summary(T.X_prime), "Y_prime": module_summary(T.Y_prime),
           "y_kind": T.y_kind, "checks": chk.checks, "ok": chk.ok}
    rows = [("module", M.label), ("X' vdim", T.X_prime.dim), ("Y' vdim", T.Y_prime.dim), ("Y' kind", T.y_kind),
            ("postconditions", "ok" if chk.ok else "FAILED " + ", ".join(chk.failed()))]
    return table(rows), res, [], 0 if chk.ok else 1


def _props(spec: str) -> list[str]:
    if spec == "all":
        return list(ALL)
    ids = [p.strip().upper() for p in spec.split(",") if p.strip()]
    bad = [p for p in ids if p not in ALL]
    if bad:
        raise UsageError(f"unknown property {bad[0]!r}; choose from {', '.join(ALL)} or 'all'")
    return ids


def cmd_verify(lib: Library, a) -> tuple:
    ids = _props(a.props)
    rings = [lib.ring(r) for r in a.rings.split(",")] if a.rings else list(lib.rings.values())
    results, lines, code = [], [], 0
    for R in rings:
        if a.seed is None:
            corpus = builtin_corpus(R, a.bound)
        else:
            corpus = generate_corpus(R, a.seed, size=a.size, closure_depth=a.depth, bound=a.bound)
        reports = run_properties(ids, corpus)
        entry = {"corpus": corpus.to_json(), "properties": [r.to_json(timing=a.timings) for r in reports]}
        lines.append(f"{R.name}: {len(corpus.modules)} modules, seed {a.seed}")
        rows = []
        for r in reports:
            rows.append([r.id, r.instances, "pass" if r.passed else "FAIL", r.title])
            if not r.passed:
                code = 1
        lines.append(grid(["prop", "instances", "result", "title"], rows))
        if a.mutants:
            ms = mutant_check(corpus)
            entry["mutants"] = [m.to_json() for m in ms]
            lines.append(grid(["mutant", "detected by"],
                              [[m.mutant, ",".join(m.detected_by) or "UNDETECTED"] for m in ms]))
            if not all(m.detected for m in ms):
                code = 1
        results.append(entry)
    return "\n".join(lines), {"props": ids, "corpora": results}, [], code


def cmd_examples(lib: Library, a) -> tuple:
    files = list(iter_examples())
    if a.show:
        for name, text in files:
            if name == a.show or name.rsplit(".", 1)[0] == a.show:
                return text.rstrip("\n"), {"file": name, "text": text}, [], 0
        raise UsageError(f"no example {a.show!r}; shipped: {', '.join(n for n, _ in files)}")
    ex = example_library()
    rows = [[name, ", ".join(r.name for r in load(text).source.rings),
             ", ".join(m.name for m in load(text).source.modules)] for name, text in files]
    res = {"files": [{"file": r[0], "rings": r[1].split(", "), "modules": r[2].split(", ")} for r in rows],
           "modules": {n: module_summary(M) for n, M in ex.modules.items()}}
    return grid(["file", "rings", "modules"], rows), res, [], 0


COMMANDS = {
    "ring-check": cmd_ring_check, "resolve": cmd_resolve, "syzygy": cmd_syzygy, "cosyzygy": cmd_cosyzygy,
    "dual": cmd_dual, "transpose": cmd_transpose, "ext": cmd_ext, "stablehom": cmd_stablehom,
    "tate": cmd_tate, "gcheck": cmd_gcheck, "gdim": cmd_gdim, "approx": cmd_approx,
    "triplet": cmd_triplet, "verify": cmd_verify, "examples": cmd_examples,
}


# -- parser -------------------------------------------------------------------------------


def _common_options(top: bool) -> argparse.ArgumentParser:
    # options are accepted before and after the command; the copy on each
    # subparser must not reset what was given before it
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-f", "--file", action="append", default=d(None), metavar="PATH",
                        help="definition file (repeatable); the shipped examples are used when omitted")
    common.add_argument("--json", metavar="PATH", default=d(None), help="write the JSON report to PATH ('-' for stdout)")
    common.add_argument("--field", default=d(None), help="default field for rings without 'over' (env TOTREF_FIELD)")
    common.add_argument("--bound", type=int, default=d(None), help="certification bound (env TOTREF_BOUND, default 8)")
    common.add_argument("--timings", action="store_true", default=d(False),
                        help="include wall-clock timings (breaks byte-identical output)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options(top=False)

    p = argparse.ArgumentParser(prog="totref", description="Exact homological invariants over finite local algebras.",
                                parents=[_common_options(top=True)])
    p.add_argument("--version", action="version", version=f"totref {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    s = add("ring-check", "validate a ring and print its invariants")
    s.add_argument("ring")
    s = add("resolve", "minimal free resolution")
    s.add_argument("module")
    s.add_argument("--steps", type=int, default=4)
    for name, h in [("syzygy", "n-th syzygy"), ("cosyzygy", "n-th cosyzygy of a totally reflexive module")]:
        s = add(name, h)
        s.add_argument("module")
        s.add_argument("--n", type=int, default=1)
    for name, h in [("dual", "M* = Hom(M, R)"), ("transpose", "Auslander transpose")]:
        s = add(name, h)
        s.add_argument("module")
    s = add("ext", "dimensions of Ext^i(M, N)")
    s.add_argument("module")
    s.add_argument("target")
    s.add_argument("--i", type=int, nargs="+", default=[1])
    s = add("stablehom", "stable Hom modulo maps through free modules")
    s.add_argument("module")
    s.add_argument("target")
    s = add("tate", "Tate cohomology by both routes")
    s.add_argument("module")
    s.add_argument("target")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--i", type=int, default=None)
    g.add_argument("--window", type=int, default=None, help="all i with |i| <= WINDOW (default 2)")
    s = add("gcheck", "certify total reflexivity")
    s.add_argument("module")
    s = add("gdim", "G-dimension up to the bound")
    s.add_argument("module")
    s = add("approx", "approximation data")
    s.add_argument("kind", choices=["right-g", "gperp", "left-g"])
    s.add_argument("module")
    s.add_argument("--tests", default=None, help="comma-separated test modules")
    s = add("triplet", "the three exact sequences built from an approximation datum")
    s.add_argument("module")
    s.add_argument("--tests", default=None, help="comma-separated test modules")
    s = add("verify", "run the property suite")
    s.add_argument("--props", default="all", help="'all' or comma-separated ids such as P1,P7")
    s.add_argument("--seed", type=int, default=None, help="generate a random corpus (builtin corpus when omitted)")
    s.add_argument("--size", type=int, default=6)
    s.add_argument("--depth", type=int, default=1, help="closure depth of the generated corpus")
    s.add_argument("--rings", default=None, help="comma-separated ring names (default: all defined)")
    s.add_argument("--mutants", action="store_true", help="also check that every injected defect is detected")
    s = add("examples", "list or show the shipped definition files")
    s.add_argument("--list", action="store_true", help="list files and names (the default)")
    s.add_argument("--show", default=None, metavar="NAME")
    return p


def _library(a) -> Library:
    fld = field_from_text(a.field or os.environ.get("TOTREF_FIELD", "GF(101)"))
    if not a.file:
        return example_library(fld)
    text = []
    for path in a.file:
        try:
            with open(path) as fh:
                text.append(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return load("\n".join(text), fld)


def _suggest(name: str, lib: Library | None) -> str:
    if lib is None:
        return ""
    pool = lib.names() + list(lib.rings)
    close = difflib.get_close_matches(name, pool, n=3)
    return f"; did you mean {', '.join(close)}?" if close else f"; known: {', '.join(pool)}"


def report(argv: list[str], results: Any, certificates: list, seed, timings: dict | None) -> dict:
    doc = {"schema": SCHEMA, "engine": {"name": "totref", "version": __version__}, "command": argv,
           "seed": seed, "results": results, "certificates": certificates}
    if timings is not None:
        doc["timings"] = timings
    return doc


def _emit(path: str | None, doc: dict) -> None:
    if path is None:
        return
    text = json.dumps(doc, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    lib = None
    t0 = time.perf_counter()
    try:
        if a.bound is None:
            a.bound = _env_bound()
        if a.bound < 1:
            raise UsageError("--bound must be at least 1")
        lib = _library(a)
        text, results, certs, code = COMMANDS[a.command](lib, a)
    except UsageError as exc:
        print(f"totref: usage error: {exc}", file=sys.stderr)
        return 2
    except (UnknownModule, UnknownRing) as exc:
        name = str(exc).split("'")[1] if "'" in str(exc) else ""
        print(f"totref: usage error: {exc}{_suggest(name, lib)}", file=sys.stderr)
        return 2
    except TotrefError as exc:
        print(f"totref: error[{exc.code}]: {exc}", file=sys.stderr)
        _emit(a.json, report(argv, {"error": {"code": exc.code, "message": str(exc)}}, [],
                             getattr(a, "seed", None), None))
        return 3
    if a.json != "-":
        print(text)
    timings = {"seconds": round(time.perf_counter() - t0, 3)} if a.timings else None
    _emit(a.json, report(argv, results, certs, getattr(a, "seed", None), timings))
    return code


if __name__ == "__main__":
    sys.exit(main())
