"""Property suite: runs the structural statements over module corpora and reports witnesses."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import mutants
from .algebra import LocalAlgebra
from .approx import (
    ab_approximation,
    approx_of_extension,
    default_tests,
    direct_sum_datum,
    gperp_cover_approximation,
    identity_datum,
    is_short_exact,
    minimize_datum,
    rapg_triplet,
    right_f_approximation,
    syzygy_lift,
    verify_datum,
)
from .errors import TotrefError, UnknownProperty
from .gtheory import DEFAULT_BOUND, gcheck, gdim, gperp_member, invariants, iso_test
from .homology import (
    _regular,
    cosyzygy,
    cosyzygy_sequence,
    ext_dim,
    is_n_torsionfree,
    is_stable_module,
    is_torsionless,
    left_f_approximation,
    projective_dimension,
    r_dual,
    resolve,
    strip_free_summands,
    syzygy,
    transpose,
)
from .library import builtin_modules
from .modules import FinModule, FreeMatrix, ModuleHom, coker_of_free_matrix, direct_sum, is_free
from .stable import (
    stable_cosyzygy_map,
    stable_hom,
    stable_omega_roundtrip,
    stable_syzygy_map,
    tate,
    tate_les_first,
    tate_les_second,
)

# -- corpora -------------------------------------------------------------------------------------------


@dataclass
class CorpusEntry:
    module: FinModule
    provenance: str

    @property
    def label(self) -> str:
        return self.module.label


@dataclass
class Corpus:
    algebra: LocalAlgebra
    entries: list[CorpusEntry]
    seed: int | None
    bound: int = DEFAULT_BOUND
    size: int = 0
    closure_depth: int = 0

    @property
    def modules(self) -> list[FinModule]:
        return [e.module for e in self.entries]

    def certified(self) -> list[FinModule]:
        return [M for M in self.modules if gcheck(M, self.bound).certified]

    def tests(self) -> list[FinModule]:
        """Certified G-projectives used as the relative test set (``R`` first)."""
        R = self.algebra
        out = [_regular(R)]
        out += [M for M in self.certified() if not is_free(M)]
        return out

    def nonfree_tests(self) -> list[FinModule]:
        return [M for M in self.certified() if not is_free(M)]

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "seed": self.seed,
            "bound": self.bound,
            "size": self.size,
            "closure_depth": self.closure_depth,
            "modules": [{"label": e.label, "provenance": e.provenance, "vdim": e.module.dim, "nu": e.module.nu}
                        for e in self.entries],
        }


def _random_presentation(R: LocalAlgebra, rng: np.random.Generator, rows: int, cols: int) -> FreeMatrix:
    F = R.field
    m = R.max_ideal
    ent = np.empty((rows, cols, R.dim), dtype=F.dtype)
    for i in range(rows):
        for j in range(cols):
            coeffs = F.vector(rng.integers(0, F.p if F.p else 7, size=m.shape[1]))
            ent[i, j] = F.matmul(m, coeffs.reshape(-1, 1))[:, 0]
    return FreeMatrix(R, ent)


def _is_new(M: FinModule, existing: list[FinModule]) -> bool:
    inv = invariants(M)
    for N in existing:
        if invariants(N) == inv and iso_test(M, N):
            return False
    return True


def generate_corpus(R: LocalAlgebra, seed: int = 1, size: int = 6, closure_depth: int = 1,
                    bound: int = DEFAULT_BOUND, max_vdim: int = 18, max_modules: int = 40,
                    max_rank: int = 3) -> Corpus:
    """Builtins, ``size`` random presentations with entries in ``m``, then closure.

    Closure applies syzygy, cosyzygy, transpose, dual and pairwise sums,
    ``closure_depth`` times; modules over ``max_vdim`` are skipped and
    isomorphic copies dropped.
    """
    rng = np.random.default_rng(seed)
    entries: list[CorpusEntry] = []

    def add(M: FinModule, prov: str) -> bool:
        if M.dim == 0 or M.dim > max_vdim or len(entries) >= max_modules:
            return False
        if not _is_new(M, [e.module for e in entries]):
            return False
        M.validate()
        entries.append(CorpusEntry(M, prov))
        return True

    for M in builtin_modules(R):
        add(M, "builtin")
    for t in range(size):
        rows, cols = int(rng.integers(1, max_rank + 1)), int(rng.integers(1, max_rank + 1))
        M = coker_of_free_matrix(_random_presentation(R, rng, rows, cols), f"rand{t}")
        add(M, f"random(seed={seed},n={t})")
    frontier = list(entries)
    for _ in range(closure_depth):
        fresh: list[CorpusEntry] = []
        ops: list[tuple[str, Callable[[FinModule], FinModule]]] = [
            ("Omega", syzygy), ("Omega^-1", cosyzygy), ("Tr", transpose), ("dual", r_dual)]
        for e in frontier:
            for name, op in ops:
                M = op(e.module)
                M = FinModule(M.R, M.action, f"{name}({e.label})")
                if add(M, f"{name}({e.label})"):
                    fresh.append(entries[-1])
        smallest = min(entries[1:], key=lambda e: (e.module.dim, e.label)) if len(entries) > 1 else None
        pairs = list(zip(frontier, frontier[1:]))
        if smallest is not None:
            pairs += [(e, smallest) for e in frontier if e is not smallest]
        for e1, e2 in pairs:
            S, _, _ = direct_sum(e1.module, e2.module)
            S = FinModule(S.R, S.action, f"{e1.label}+{e2.label}")
            if add(S, f"sum({e1.label},{e2.label})"):
                fresh.append(entries[-1])
        frontier = fresh
    return Corpus(R, entries, seed, bound, size, closure_depth)


def builtin_corpus(R: LocalAlgebra, bound: int = DEFAULT_BOUND) -> Corpus:
    """Builtins plus direct sums with ``R`` and a few sums among themselves."""
    entries: list[CorpusEntry] = []
    mods = builtin_modules(R)
    for M in mods:
        if _is_new(M, [e.module for e in entries]):
            entries.append(CorpusEntry(M, "builtin"))
    base = list(entries)
    Rm = base[0].module
    for e in base[1:]:
        S, _, _ = direct_sum(e.module, Rm)
        S = FinModule(R, S.action, f"{e.label}+{Rm.label}")
        if S.dim <= 18 and _is_new(S, [x.module for x in entries]):
            entries.append(CorpusEntry(S, f"sum({e.label},{Rm.label})"))
    for e1, e2 in zip(base[1:], base[2:]):
        S, _, _ = direct_sum(e1.module, e2.module)
        S = FinModule(R, S.action, f"{e1.label}+{e2.label}")
        if S.dim <= 18 and _is_new(S, [x.module for x in entries]):
            entries.append(CorpusEntry(S, f"sum({e1.label},{e2.label})"))
    return Corpus(R, entries, None, bound)


# -- reports -----------------------------------------------------------------------------------------------


@dataclass
class InstanceResult:
    instance: str
    passed: bool
    witness: dict | None = None


@dataclass
class PropertyReport:
    id: str
    title: str
    instances: int
    passed: bool
    failures: list[InstanceResult] = field(default_factory=list)
    seconds: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "id": self.id,
            "title": self.title,
            "instances": self.instances,
            "passed": self.passed,
            "failures": [{"instance": f.instance, "witness": f.witness} for f in self.failures[:5]],
        }
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def _mod_json(M: FinModule) -> dict:
    return {"label": M.label, "vdim": M.dim, "nu": M.nu}


def _minimize(check: Callable[..., bool], mods: tuple[FinModule, ...]) -> tuple[FinModule, ...]:
    """Greedily replace modules by their stable parts while the failure persists."""
    cur = list(mods)
    for i, M in enumerate(cur):
        try:
            S = strip_free_summands(M).stable
        except TotrefError:
            continue
        if 0 < S.dim < M.dim:
            trial = cur[:i] + [S] + cur[i + 1:]
            try:
                if not check(*trial):
                    cur = trial
            except TotrefError:
                pass
    return tuple(cur)


class _Collector:
    def __init__(self):
        self.results: list[InstanceResult] = []

    def check(self, instance: str, fn: Callable[..., bool], *mods: FinModule, detail: Callable[..., dict] | None = None):
        try:
            ok = bool(fn(*mods))
            err = None
        except TotrefError as exc:
            ok, err = False, f"{exc.code}: {exc}"
        witness = None
        if not ok:
            small = _minimize(fn, mods) if mods and err is None else mods
            witness = {"modules": [_mod_json(M) for M in small]}
            if err:
                witness["error"] = err
            if detail is not None:
                try:
                    witness["detail"] = detail(*small)
                except TotrefError as exc:
                    witness["detail"] = {"error": exc.code}
        self.results.append(InstanceResult(instance, ok, witness))

    def record(self, instance: str, ok: bool, witness: dict | None = None):
        self.results.append(InstanceResult(instance, ok, None if ok else (witness or {})))


# -- the properties -----------------------------------------------------------------------------------------------


def _p1(c: Corpus, out: _Collector):
    for M in c.modules:
        def fc(M):
            pi = right_f_approximation(M)
            ok = pi.is_surjective() and pi.source.dim == M.nu * M.R.dim
            return ok and M.presentation().is_minimal() and resolve(M, 2).is_minimal() \
                and all(S.nu == b for S, b in zip(resolve(M, 2).syzygies, resolve(M, 2).betti))
        out.check(M.label, fc, M)
        def minimal_syz(M):
            return syzygy(M, 1).nu == resolve(M, 1).betti[1] and syzygy(M, 1).dim == M.syzygy()[0].dim
        out.check(f"{M.label}:syzygy", minimal_syz, M)


def _p2(c: Corpus, out: _Collector):
    for M in c.modules:
        def env(M):
            th = left_f_approximation(M)
            if th.target.dim != r_dual(M).nu * M.R.dim:
                return False
            return is_torsionless(M) == th.is_injective()
        out.check(M.label, env, M)


def _p3(c: Corpus, out: _Collector):
    Rm = _regular(c.algebra)
    for M in c.modules:
        def st(M):
            theta, p = cosyzygy_sequence(M)
            Q = p.target
            return is_stable_module(Q) and ext_dim(Q, Rm, 1) == 0
        out.check(M.label, st, M)


def _p4(c: Corpus, out: _Collector):
    b = c.bound
    for X in c.certified():
        for name, op in (("dual", r_dual), ("Tr", transpose), ("Omega", syzygy), ("Omega^-1", cosyzygy)):
            out.check(f"{name}({X.label})", lambda X, op=op: gcheck(op(X), b).certified, X)


def _small(mods: list[FinModule], vmax: int) -> list[FinModule]:
    """Pairwise properties are restricted to modules of k-dimension at most ``vmax``."""
    return [M for M in mods if M.dim <= vmax]


def _p5(c: Corpus, out: _Collector):
    b = c.bound
    cert = c.certified()
    for X, Y in itertools.combinations_with_replacement(_small(cert, 6), 2):
        def sums(X, Y):
            S, _, _ = direct_sum(X, Y)
            return S.dim > 40 or gcheck(S, b).certified
        out.check(f"{X.label}+{Y.label}", sums, X, Y)
    for X in cert:
        def cogen(X):
            theta, p = cosyzygy_sequence(X)
            return theta.is_injective() and is_short_exact(theta, p) and gcheck(p.target, b).certified
        out.check(f"cogenerator({X.label})", cogen, X)

        def kernel_of_cover(X):
            O, inc = X.syzygy()
            return gcheck(O, b).certified
        out.check(f"kernel({X.label})", kernel_of_cover, X)


def _two_of_three(tests, b, L, M, N) -> bool:
    flags = [bool(gperp_member(Z, tests, b)) for Z in (L, M, N)]
    return sum(flags) != 2


def _p6(c: Corpus, out: _Collector):
    b = c.bound
    tests = c.nonfree_tests()
    for M in c.modules:
        O, inc = M.syzygy()
        cov = inc.target
        out.check(f"cover({M.label})", lambda O, cov, M: _two_of_three(tests, b, O, cov, M), O, cov, M)
        theta, p = cosyzygy_sequence(M)
        if theta.is_injective():
            out.check(f"cosyzygy({M.label})", lambda M, F_, Q: _two_of_three(tests, b, M, F_, Q),
                      M, theta.target, p.target)


def _homext_dims(X: FinModule, M: FinModule) -> tuple[int, int, int]:
    a = stable_hom(X, M).dim
    b = ext_dim(X, M.syzygy()[0], 1)
    cx = cosyzygy(X)
    c = ext_dim(cx, M, 1)
    return a, b, c


def _p7(c: Corpus, out: _Collector):
    for X in c.certified():
        for M in c.modules:
            out.check(f"({X.label},{M.label})", lambda X, M: len(set(_homext_dims(X, M))) == 1, X, M,
                      detail=lambda X, M: {"dims": list(_homext_dims(X, M))})


def _p8(c: Corpus, out: _Collector):
    F = c.algebra.field
    cert = _small(c.certified(), 8)
    for X, Y in itertools.product(cert, cert):
        def inv(X, Y):
            s = stable_syzygy_map(X, Y)
            t = stable_cosyzygy_map(X, Y)
            square = s.shape[0] == s.shape[1] and t.shape[0] == t.shape[1]
            return square and F.rank(s) == s.shape[0] and F.rank(t) == t.shape[0] and stable_omega_roundtrip(X, Y)
        out.check(f"({X.label},{Y.label})", inv, X, Y)


def _targets(c: Corpus, n: int = 5) -> list[FinModule]:
    mods = sorted(c.modules, key=lambda M: (M.dim, M.label))
    return mods[:max(n, 0)]


def _p9(c: Corpus, out: _Collector):
    b = c.bound
    targets = _targets(c, 6)
    for X in _small(c.certified(), 8):
        for M in targets:
            def routes(X, M):
                return all(tate(X, M, i, b).agree for i in range(-3, 4))
            out.check(f"routes({X.label},{M.label})", routes, X, M,
                      detail=lambda X, M: {"values": [tate(X, M, i, b).to_json() for i in range(-3, 4)]})

            def vs_ext(X, M):
                return all(tate(X, M, n, b).dim == ext_dim(X, M, n) for n in (1, 2, 3))
            out.check(f"ext({X.label},{M.label})", vs_ext, X, M)
    for X in _small(c.nonfree_tests(), 8):
        for M in targets:
            O, inc = M.syzygy()
            _, pi = M.cover()
            out.check(f"les2({X.label};{M.label})", lambda X, M: tate_les_second(X, inc, pi, 2, b).exact, X, M)
        theta, p = cosyzygy_sequence(X)
        for M in targets:
            out.check(f"les1({X.label};{M.label})", lambda X, M: tate_les_first(theta, p, M, 2, b).exact, X, M)


def _p10(c: Corpus, out: _Collector):
    b = c.bound
    tests = c.tests()
    Rm = _regular(c.algebra)
    cert = _small(c.certified(), 8)
    for X in cert:
        D = identity_datum(X, tests)
        out.record(f"identity({X.label})", verify_datum(D, tests, b).ok)
        # syzygy-lift round trip on X + R
        S, _, _ = direct_sum(X, Rm)
        S.label = f"{X.label}+{Rm.label}"
        try:
            D1 = ab_approximation(S, b, tests, levels=1)
            chk = verify_datum(D1, tests, b)
            out.record(f"lift({S.label})", chk.ok, {"failed": chk.failed()})
        except TotrefError as exc:
            out.record(f"lift({S.label})", False, {"error": exc.code})
        T = rapg_triplet(D)
        chk = T.verify(tests, b)
        out.record(f"triplet({X.label})", chk.ok, {"failed": chk.failed()})
        # extension 0 -> Omega X -> R^nu -> X -> 0 from identity data on the ends
        O, inc = X.syzygy()
        _, pi = X.cover()
        if O.dim and gcheck(O, b).certified:
            try:
                E = approx_of_extension(inc, pi, identity_datum(O, tests), identity_datum(X, tests), b)
                chk = verify_datum(E, tests, b)
                Em = minimize_datum(E)
                ok = chk.ok and verify_datum(Em, tests, b).ok
                out.record(f"extension({X.label})", ok, {"failed": chk.failed()})
            except TotrefError as exc:
                out.record(f"extension({X.label})", False, {"error": exc.code})
    for X, Y in itertools.combinations(_small(cert, 6), 2):
        D = direct_sum_datum(identity_datum(X, tests), identity_datum(Y, tests))
        out.record(f"sum({X.label},{Y.label})", verify_datum(D, tests, b).ok)
    for M in c.modules:
        if not gperp_member(M, c.nonfree_tests(), b):
            continue
        try:
            D = gperp_cover_approximation(M, c.nonfree_tests(), b)
            chk = verify_datum(D, tests, b)
            T = rapg_triplet(D)
            tchk = T.verify(c.nonfree_tests(), b)
            out.record(f"gperp({M.label})", chk.ok and tchk.ok, {"failed": chk.failed() + tchk.failed()})
        except TotrefError as exc:
            out.record(f"gperp({M.label})", False, {"error": exc.code})


def _p11(c: Corpus, out: _Collector):
    b = c.bound
    for X in c.certified():
        out.check(f"torsionless({X.label})", is_torsionless, X)
        out.check(f"torsionfree({X.label})", lambda X: is_n_torsionfree(X, b), X)
    for M in c.modules:
        if not (is_torsionless(M) and is_stable_module(M)):
            continue

        def claim(M):
            return bool(iso_test(syzygy(cosyzygy(M), 1), M))
        out.check(f"omega-cosyzygy({M.label})", claim, M)


def _p12(c: Corpus, out: _Collector, max_vdim: int = 8):
    mods = [M for M in c.modules if M.dim <= max_vdim]
    for X, M in itertools.product(mods, mods):
        def dual(X, M):
            return stable_hom(X, M).dim == stable_hom(transpose(M), transpose(X)).dim
        out.check(f"({X.label},{M.label})", dual, X, M,
                  detail=lambda X, M: {"dims": [stable_hom(X, M).dim, stable_hom(transpose(M), transpose(X)).dim]})


def _p13(c: Corpus, out: _Collector, gbound: int = 3):
    b = c.bound
    tests = c.nonfree_tests()
    for M in c.modules:
        pd = projective_dimension(M, gbound)
        in_perp = bool(gperp_member(M, tests, b))
        if pd is not None:
            out.record(f"pd({M.label})", in_perp and gdim(M, gbound).finite, {"pd": pd, "in_gperp": in_perp})
        elif in_perp:
            g = gdim(M, gbound)
            # finite gdim together with G-perp forces finite pd
            out.record(f"perp({M.label})", not g.finite, {"gdim": str(g)})


@dataclass(frozen=True)
class PropertySpec:
    id: str
    title: str
    run: Callable[[Corpus, _Collector], None]


REGISTRY: dict[str, PropertySpec] = {p.id: p for p in [
    PropertySpec("P1", "minimal free covers: surjective of rank nu, minimal presentations and syzygies", _p1),
    PropertySpec("P2", "torsionless iff the minimal left free approximation is injective", _p2),
    PropertySpec("P3", "cosyzygies are stable with Ext^1(-, R) = 0", _p3),
    PropertySpec("P4", "G-projectivity passes to dual, transpose, syzygy and cosyzygy", _p4),
    PropertySpec("P5", "resolving closure of G and the free cogenerator sequences", _p5),
    PropertySpec("P6", "two-out-of-three for relative G-perp on constructed sequences", _p6),
    PropertySpec("P7", "dim Hom_st(X, M) = dim Ext^1(X, Omega M) = dim Ext^1(Omega^-1 X, M)", _p7),
    PropertySpec("P8", "Omega and Omega^-1 act as mutually inverse maps on stable Hom", _p8),
    PropertySpec("P9", "Tate cohomology: both routes agree, agree with Ext, long exact sequences", _p9),
    PropertySpec("P10", "approximation data: sums, syzygy lifts, extensions and triplets", _p10),
    PropertySpec("P11", "G-projectives torsion-free; Omega(Omega^-1 M) = M for stable torsionless M", _p11),
    PropertySpec("P12", "dim Hom_st(X, M) = dim Hom_st(Tr M, Tr X)", _p12),
    PropertySpec("P13", "finite projective dimension versus G-perp and finite G-dimension", _p13),
]}

ALL = list(REGISTRY)

# properties expected to catch each injected defect
DETECTORS: dict[str, list[str]] = {
    "skip-p-quotient": ["P7"],
    "nonminimal-cover": ["P1"],
    "nonminimal-syzygy": ["P1", "P11"],
    "nonminimal-left-approx": ["P2", "P3"],
    "transpose-no-dual": ["P12"],
    "tate-no-boundaries": ["P9"],
    "approx-skip-padding": ["P10"],
    "approx-zero-lift": ["P10"],
    "gperp-cover-drop-generator": ["P10"],
}


def run_property(pid: str, corpus: Corpus) -> PropertyReport:
    if pid not in REGISTRY:
        raise UnknownProperty(f"unknown property {pid!r}; known: {', '.join(ALL)}")
    spec = REGISTRY[pid]
    out = _Collector()
    t0 = time.perf_counter()
    spec.run(corpus, out)
    secs = time.perf_counter() - t0
    fails = [r for r in out.results if not r.passed]
    return PropertyReport(pid, spec.title, len(out.results), not fails, fails, secs)


def run_properties(ids: Iterable[str], corpus: Corpus) -> list[PropertyReport]:
    return [run_property(p, corpus) for p in ids]


@dataclass
class MutantResult:
    mutant: str
    detected_by: list[str]

    @property
    def detected(self) -> bool:
        return bool(self.detected_by)

    def to_json(self) -> dict:
        return {"mutant": self.mutant, "detected": self.detected, "detected_by": self.detected_by}


def mutant_check(corpus: Corpus, names: Iterable[str] | None = None) -> list[MutantResult]:
    """Run each mutant's detector properties with the defect injected."""
    out = []
    for name in (names or list(mutants.REGISTRY)):
        caught = []
        with mutants.inject(name):
            for pid in DETECTORS.get(name, ALL):
                try:
                    rep = run_property(pid, corpus)
                    failed = not rep.passed
                except TotrefError:
                    failed = True
                if failed:
                    caught.append(pid)
        out.append(MutantResult(name, caught))
    return out
