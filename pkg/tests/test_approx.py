import numpy as np
import pytest

from totref import mutants
from totref.approx import (
    _datum_from_map,
    ab_approximation,
    approx_of_extension,
    default_tests,
    gperp_cover_approximation,
    identity_datum,
    left_g_approximation,
    minimize_datum,
    rapg_triplet,
    right_f_approximation,
    verify_datum,
)
from totref.errors import GdimInfiniteAtBound, NotInGPerp
from totref.gtheory import gcheck
from totref.homology import canonical_module, syzygy
from totref.library import algebra_A
from totref.modules import ModuleHom, direct_sum, free_module, ideal_module, regular_module, residue_field


def test_right_f_approximation_is_cover(B, BM, Bk):
    for M in (BM, Bk):
        pi = right_f_approximation(M)
        assert pi.is_surjective()
        assert pi.source.dim == M.nu * B.dim


def test_ab_of_certified_module_is_identity_like(BM):
    D = ab_approximation(BM)
    assert D.identity_like
    assert verify_datum(D).ok


def test_ab_over_gorenstein_ring():
    A = algebra_A()
    k = residue_field(A)
    D = ab_approximation(k)
    assert D.identity_like
    assert verify_datum(D).ok


def test_ab_refuses_infinite_gdim(Bk):
    with pytest.raises(GdimInfiniteAtBound):
        ab_approximation(Bk, bound=4)


def test_gperp_cover_of_canonical_module(B, BM):
    W = canonical_module(B)
    D = gperp_cover_approximation(W, [BM])
    chk = verify_datum(D, [BM])
    assert chk.ok, chk.failed()
    assert D.Y.dim == W.nu * B.dim - W.dim


def test_gperp_cover_refuses_nonmembers(BM):
    with pytest.raises(NotInGPerp):
        gperp_cover_approximation(BM, [BM])


def test_triplet_of_gperp_datum(B, BM):
    W = canonical_module(B)
    D = gperp_cover_approximation(W, [BM])
    T = rapg_triplet(D)
    chk = T.verify([BM])
    assert chk.ok, chk.failed()


def test_triplet_of_identity_datum(BM):
    T = rapg_triplet(identity_datum(BM))
    assert T.verify([BM]).ok


def test_extension_datum(B, BM):
    xB, inc = ideal_module(B, [B.var("x")])
    R = regular_module(B)
    beta = ModuleHom(R, BM, BM.cover()[1].mat)
    alpha = ModuleHom(xB, R, inc.mat)
    DL = ab_approximation(xB)
    DN = ab_approximation(BM)
    D = approx_of_extension(alpha, beta, DL, DN)
    chk = verify_datum(D)
    assert chk.ok, chk.failed()


def test_minimize_drops_redundant_free_summands(B, BM):
    D = ab_approximation(BM)
    S, _, _ = direct_sum(BM, free_module(B, 1))
    f = ModuleHom(S, BM, np.concatenate([D.f.mat, BM.cover()[1].mat], axis=1))
    big = _datum_from_map(f, "FinitePd", [], "test")
    small = minimize_datum(big)
    assert small.minimal
    assert small.X.dim == BM.dim
    assert verify_datum(small).ok


def test_left_g_over_gorenstein_ring():
    A = algebra_A()
    k = residue_field(A)
    L = left_g_approximation(k)
    assert L.verify([regular_module(A), k]).ok


def test_left_g_of_certified_module(B, BM):
    L = left_g_approximation(BM)
    chk = L.verify([regular_module(B), BM])
    assert chk.ok, chk.failed()
    assert gcheck(L.X).certified


def test_syzygy_lift_datum_for_syzygy_module():
    A = algebra_A()
    k = residue_field(A)
    Ok = syzygy(k, 1)
    D = ab_approximation(Ok)
    assert verify_datum(D).ok


@pytest.mark.parametrize("name", ["gperp-cover-drop-generator"])
def test_mutated_cover_fails_postconditions(B, BM, name):
    W = canonical_module(B)
    with mutants.inject(name):
        D = gperp_cover_approximation(W, [BM])
        assert not verify_datum(D, [BM]).ok


def test_skip_padding_breaks_syzygy_lift():
    A = algebra_A()
    R = regular_module(A)
    assert verify_datum(ab_approximation(R, levels=1)).ok
    with mutants.inject("approx-skip-padding"):
        D = ab_approximation(R, levels=1)
        assert not verify_datum(D).ok
