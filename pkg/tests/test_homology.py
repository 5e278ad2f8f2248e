import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import brute_hom_dim, random_module
from totref.gtheory import iso_test
from totref.homology import (
    bidual_map,
    betti_numbers,
    canonical_module,
    cosyzygy,
    cosyzygy_chain,
    ext,
    ext_dim,
    is_n_torsionfree,
    is_reflexive,
    is_stable_module,
    is_torsionless,
    left_f_approximation,
    matlis_dual,
    r_dual,
    resolve,
    strip_free_summands,
    syzygy,
    trace_ideal,
    transpose,
)
from totref.library import algebra_B
from totref.linalg import GF101
from totref.modules import direct_sum, free_module, is_free, residue_field


def test_resolutions(A, B, BM, BR):
    assert betti_numbers(free_module(B, 2), 3) == [2, 0, 0, 0]
    assert betti_numbers(residue_field(A), 4) == [1, 1, 1, 1, 1]
    seg = resolve(BM, 4)
    assert seg.betti == [1, 1, 1, 1, 1]
    assert seg.is_exact() and seg.is_minimal()


def test_residue_field_of_B_grows(Bk):
    seg = resolve(Bk, 5)
    assert seg.betti == [1, 3, 7, 15, 31, 63]
    assert seg.is_exact() and seg.is_minimal()


@given(st.integers(0, 5000))
def test_betti_numbers_are_syzygy_generators(seed):
    M = random_module(algebra_B(), seed)
    seg = resolve(M, 3)
    assert seg.betti == [S.nu for S in seg.syzygies]
    assert seg.is_exact() and seg.is_minimal()


def test_duals(B, BM, BR, Bk):
    assert iso_test(r_dual(BR), BR)
    assert bidual_map(BR).is_iso()
    D = r_dual(BM)
    assert D.dim == 3 and iso_test(D, BM)
    assert r_dual(Bk).dim == 2


def test_torsionless_and_reflexive(B, BM, BR, Bk):
    assert is_reflexive(BR) and is_reflexive(free_module(B, 2))
    assert is_reflexive(BM)
    # k is isomorphic to the ideal (xy), a submodule of B, so it is torsionless
    assert is_torsionless(Bk)
    assert not is_reflexive(Bk)


@given(st.integers(0, 5000))
def test_torsionless_iff_left_approximation_injective(seed):
    M = random_module(algebra_B(), seed, 2, 1)
    assert is_torsionless(M) == left_f_approximation(M).is_injective()


def test_left_approximation_examples(B, BM, BR):
    f = left_f_approximation(BR)
    assert f.is_iso()
    g = left_f_approximation(BM)
    assert g.target.nu == 1 and g.is_injective()


def test_cosyzygies(A, B, BM, BR):
    assert cosyzygy(BR).dim == 0
    assert iso_test(cosyzygy(BM), BM)
    kA = residue_field(A)
    assert iso_test(cosyzygy(kA), kA)
    ch = cosyzygy_chain(BM, 3)
    assert all(ch.stable) and all(ch.ext1_vanishes)


def test_cosyzygy_chain_random():
    B = algebra_B()
    for seed in range(6):
        ch = cosyzygy_chain(random_module(B, seed), 2)
        assert all(ch.stable) and all(ch.ext1_vanishes)


def test_transposes(A, B, BM):
    assert transpose(free_module(B, 2)).dim == 0
    assert iso_test(transpose(BM), BM)
    kA = residue_field(A)
    assert iso_test(transpose(kA), kA)


@given(st.integers(0, 5000))
def test_double_transpose_up_to_free_summands(seed):
    M = random_module(algebra_B(), seed)
    TT = strip_free_summands(transpose(transpose(M))).stable
    assert iso_test(TT, strip_free_summands(M).stable)


def test_ext_examples(A, B, BM, BR):
    assert all(ext_dim(BR, BM, i) == 0 for i in (1, 2, 3))
    kA = residue_field(A)
    assert ext_dim(kA, kA, 1) == 1
    assert all(ext_dim(BM, BR, i) == 0 for i in range(1, 7))
    assert ext(BM, BM, 0).dim == brute_hom_dim(BM, BM)


@given(st.integers(0, 3000), st.integers(1, 2))
def test_ext_dimension_shifting_and_additivity(seed, i):
    B = algebra_B()
    M = random_module(B, seed, 1, 2)
    N = residue_field(B)
    assert ext_dim(M, N, i + 1) == ext_dim(syzygy(M, 1), N, i)
    S, _, _ = direct_sum(M, N)
    assert ext_dim(S, N, i) == ext_dim(M, N, i) + ext_dim(N, N, i)


def test_ext_module_structure(Bk):
    E = ext(Bk, Bk, 1).module
    E.validate()
    assert E.dim == 3


def test_n_torsionfree(BM, Bk):
    assert is_n_torsionfree(BM, 4)
    assert not is_n_torsionfree(Bk, 1) or not is_n_torsionfree(Bk, 2)


def test_matlis_and_canonical(B, BR, Bk):
    assert iso_test(matlis_dual(Bk), Bk)
    W = canonical_module(B)
    assert (W.dim, W.nu) == (6, 2)
    assert not iso_test(W, BR)
    assert iso_test(matlis_dual(matlis_dual(W)), W)


@given(st.integers(0, 3000))
def test_matlis_double_dual(seed):
    M = random_module(algebra_B(), seed)
    assert iso_test(matlis_dual(matlis_dual(M)), M)


def test_trace_and_stability(B, BM, BR):
    assert trace_ideal(BR).shape[1] == B.dim
    assert not is_stable_module(BR)
    tr = trace_ideal(BM)
    assert tr.shape[1] == 3 and is_stable_module(BM)
    S, _, _ = direct_sum(BM, BR)
    split = strip_free_summands(S)
    assert split.free_rank == 1 and iso_test(split.stable, BM)
    assert split.iso.is_iso()
    assert is_free(free_module(B, 3))
