"""Acceptance criteria, one test each.

Every test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line (visible even
under output capture); the terminal summary repeats all of them.
Run ``pytest tests/test_acceptance.py -v`` to see them.
"""

import json
from contextlib import contextmanager

import numpy as np
import pytest

from totref.approx import (
    ab_approximation,
    approx_of_extension,
    gperp_cover_approximation,
    rapg_triplet,
    verify_datum,
)
from totref.cli import main
from totref.gtheory import gcheck, gdim, gperp_member
from totref.homology import canonical_module, cosyzygy, cosyzygy_sequence, ext_dim, syzygy, trace_ideal
from totref.library import algebra_A, algebra_B
from totref.linalg import GF101
from totref.modules import ModuleHom, cyclic_quotient, direct_sum, ideal_module, is_free, regular_module, residue_field
from totref.stable import stable_hom, tate, tate_les_first, tate_les_second, tate_route_a, tate_route_b
from totref.verify import builtin_corpus, generate_corpus, mutant_check

RESULTS: dict[int, bool] = {}


@pytest.fixture
def criterion(request, capsys):
    @contextmanager
    def run(n: int, title: str):
        ok = False
        try:
            yield
            ok = True
        finally:
            RESULTS[n] = ok
            with capsys.disabled():
                print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {title}")
    return run


@pytest.fixture(scope="module")
def B():
    return algebra_B()


@pytest.fixture(scope="module")
def corpus_A():
    return builtin_corpus(algebra_A())


@pytest.fixture(scope="module")
def corpus_B(B):
    return builtin_corpus(B)


def same_span(F, U, V) -> bool:
    r = F.rank(U)
    return r == F.rank(V) == F.rank(np.concatenate([U, V], axis=1))


def test_1_worked_example(criterion, B):
    with criterion(1, "B has dim 6, socle dim 2, (0:x) = (x); B/(x) certified with period (0,1), nonfree"):
        F = GF101
        assert B.dim == 6
        assert B.socle().shape[1] == 2
        assert not B.is_gorenstein
        x = B.var("x")
        assert same_span(F, B.annihilator(x.reshape(-1, 1)), B.ideal_span(x.reshape(-1, 1)))
        M = cyclic_quotient(B, [x], "B/(x)")
        cert = gcheck(M, 6)
        assert cert.verdict == "CertifiedGProjective"
        assert cert.period == (0, 1)
        assert not is_free(M)
        tr = trace_ideal(M)
        assert F.is_zero(F.matmul(B.residue_functional, tr))


def test_2_gorenstein_sanity(criterion):
    with criterion(2, "over k[x]/(x^2) a seed-1 corpus of >= 20 modules is all Gdim 0, ab data identity-like"):
        A = algebra_A()
        c = generate_corpus(A, seed=1, size=6, closure_depth=2)
        assert len(c.modules) >= 20
        for M in c.modules:
            assert gcheck(M, 8).certified, M.label
            g = gdim(M, 8)
            assert g.finite and g.value == 0
            D = ab_approximation(M, 8)
            assert D.identity_like, M.label


def test_3_homext(criterion, corpus_A, corpus_B):
    with criterion(3, "dim Hom_st(X,M) = dim Ext^1(X, Omega M) = dim Ext^1(Omega^-1 X, M) on >= 50 pairs"):
        pairs = 0
        for c in (corpus_A, corpus_B):
            for X in c.certified():
                X1 = cosyzygy(X)
                for M in c.modules:
                    a = stable_hom(X, M).dim
                    assert a == ext_dim(X, syzygy(M, 1), 1) == ext_dim(X1, M, 1), (X.label, M.label)
                    pairs += 1
        assert pairs >= 50


def test_4_tate_routes(criterion, corpus_B):
    with criterion(4, "Tate routes agree for i in [-3,3] against >= 5 targets; Tate^n = Ext^n for n = 1,2,3"):
        targets = corpus_B.modules
        assert len(targets) >= 5
        for X in corpus_B.certified():
            cert = gcheck(X).complete_resolution
            for M in targets:
                for i in range(-3, 4):
                    a = tate_route_a(X, M, i)
                    b = tate_route_b(cert, M, i).dim
                    assert a == b, (X.label, M.label, i)
                for n in (1, 2, 3):
                    assert tate(X, M, n).dim == ext_dim(X, M, n)


def test_5_long_exact_sequences(criterion, B, corpus_B):
    with criterion(5, "Tate long exact sequences are exact at every node on [-2,2] for >= 10 sequences"):
        reports = []
        M = cyclic_quotient(B, [B.var("x")], "B/(x)")
        Bm = regular_module(B)
        # second variable: syzygy sequences of every corpus module
        for N in corpus_B.modules:
            _, inc = N.syzygy()
            _, pi = N.cover()
            reports.append(tate_les_second(M, inc, pi, window=2))
        # 0 -> (x) -> B -> B/(x) -> 0
        xB, j = ideal_module(B, [B.var("x")])
        beta = ModuleHom(Bm, M, M.cover()[1].mat)
        reports.append(tate_les_second(M, ModuleHom(xB, Bm, j.mat), beta, window=2))
        # a split sequence
        k = residue_field(B)
        _, (i1, _), (_, p2) = direct_sum(k, M)
        reports.append(tate_les_second(M, i1, p2, window=2))
        # first variable: the cosyzygy sequence of B/(x) against every corpus module
        theta, p = cosyzygy_sequence(M)
        for N in corpus_B.modules:
            reports.append(tate_les_first(theta, p, N, window=2))
        assert len(reports) >= 10
        for r in reports:
            assert r.window == (-2, 2)
            assert r.exact


def test_6_property_suite(criterion, capsys):
    props = ",".join(f"P{i}" for i in range(1, 13))
    with criterion(6, "property suite P1-P12 on the A and B corpora (builtin and seeds 1-3) exits 0"):
        codes = {}
        for seed in (None, 1, 2, 3):
            argv = ["verify", "--props", props] + ([] if seed is None else ["--seed", str(seed)])
            codes[seed] = main(argv)
            out = capsys.readouterr().out
            with capsys.disabled():
                print(f"\n  verify {'builtin' if seed is None else f'--seed {seed}'}: exit {codes[seed]}")
            assert codes[seed] == 0, out


def test_7_negative_control(criterion, B):
    with criterion(7, "Ext^i(k,B) != 0 for 1 <= i <= 6, gdim k = InfinityAtBound, B/(x) not in its own G-perp"):
        k = residue_field(B)
        Bm = regular_module(B)
        dims = [ext_dim(k, Bm, i) for i in range(1, 7)]
        assert all(d > 0 for d in dims), dims
        g = gdim(k, 6)
        assert not g.finite and str(g).startswith("InfinityAtBound")
        M = cyclic_quotient(B, [B.var("x")], "B/(x)")
        assert not gperp_member(M, [M])
        assert ext_dim(M, M, 1) == 3


def test_8_approximation_contracts(criterion, B, corpus_B, corpus_A):
    with criterion(8, "approximation data pass their verifiers; every injected defect is detected"):
        data = []
        for c in (corpus_A, corpus_B):
            tests = c.tests()
            for M in c.modules:
                if gdim(M).finite:
                    data.append((ab_approximation(M, tests=tests), tests))
                    # deeper recursion runs the syzygy-lifting construction
                    data.append((ab_approximation(M, tests=tests, levels=2), tests))
        W = canonical_module(B)
        nonfree = corpus_B.nonfree_tests()
        Dw = gperp_cover_approximation(W, nonfree)
        data.append((Dw, corpus_B.tests()))
        M = cyclic_quotient(B, [B.var("x")], "B/(x)")
        xB, j = ideal_module(B, [B.var("x")])
        Bm = regular_module(B)
        alpha = ModuleHom(xB, Bm, j.mat)
        beta = ModuleHom(Bm, M, M.cover()[1].mat)
        De = approx_of_extension(alpha, beta, ab_approximation(xB), ab_approximation(M))
        data.append((De, corpus_B.tests()))
        kinds = {D.provenance for D, _ in data}
        assert {"identity", "syzygy-lift", "gperp-cover", "extension"} <= kinds, kinds
        for D, tests in data:
            chk = verify_datum(D, tests)
            assert chk.ok, (D.target.label, chk.failed())
            T = rapg_triplet(D)
            tchk = T.verify(tests if D.y_kind == "FinitePd" else nonfree)
            assert tchk.ok, (D.target.label, tchk.failed())
        res = mutant_check(corpus_B)
        assert res and all(r.detected for r in res), [r.mutant for r in res if not r.detected]


def test_9_determinism(criterion, tmp_path, capsys):
    with criterion(9, "repeated runs with fixed seeds give byte-identical JSON"):
        runs = [
            ["verify", "--seed", "2", "--size", "4", "--props", "P1,P7,P9,P12"],
            ["tate", "M", "M", "--window", "3"],
            ["gdim", "kB", "--bound", "5"],
            ["approx", "gperp", "omega_B", "--tests", "M"],
        ]
        for argv in runs:
            blobs = []
            for _ in range(2):
                p = tmp_path / "out.json"
                assert main(argv + ["--json", str(p)]) == 0
                blobs.append(p.read_bytes())
            assert blobs[0] == blobs[1], argv
            json.loads(blobs[0])
        capsys.readouterr()
