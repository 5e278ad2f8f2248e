"""Resolutions, duals, transposes, Ext and the related module tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import mutants
from .algebra import LocalAlgebra
from .modules import (
    FinModule,
    FreeMatrix,
    HomSpace,
    ModuleHom,
    Subquotient,
    cokernel,
    coker_of_free_matrix,
    free_module,
    hom_cached,
    power_action,
    regular_module,
    submodule,
)


# -- minimal free resolutions -------------------------------------------------


@dataclass
class ResolutionSegment:
    """``F_n -> ... -> F_1 -> F_0 -> M -> 0`` with minimal differentials.

    ``differentials[i]`` is ``d_{i+1}: F_{i+1} -> F_i``; ``syzygies[i]`` is
    ``Omega^i M`` (``syzygies[0] = M``).
    """

    module: FinModule
    length: int
    betti: list[int]
    differentials: list[FreeMatrix]
    syzygies: list[FinModule]

    def d(self, i: int) -> FreeMatrix:
        """``d_i: F_i -> F_{i-1}`` for ``i >= 1``."""
        return self.differentials[i - 1]

    def is_exact(self) -> bool:
        F = self.module.F
        mats = [d.to_linear() for d in self.differentials]
        for a, b in zip(mats[1:], mats[:-1]):
            if not F.is_exact_at(a, b):
                return False
        if mats:
            aug = self.module.cover_matrix
            if not F.is_exact_at(mats[0], aug):
                return False
        return True

    def is_minimal(self) -> bool:
        return all(d.is_minimal() for d in self.differentials)

    def reaches_zero(self) -> bool:
        return self.syzygies[-1].dim == 0


def syzygy(M: FinModule, n: int = 1) -> FinModule:
    for _ in range(n):
        M = _omega(M)
    return M


def _omega(M: FinModule) -> FinModule:
    if mutants.active("nonminimal-syzygy") and M.dim:
        # pads the syzygy with a free summand: Omega M + R
        from .modules import direct_sum
        om, _ = M.syzygy()
        S, _, _ = direct_sum(om, regular_module(M.R))
        return S
    return M.syzygy()[0]


def resolve(M: FinModule, n: int) -> ResolutionSegment:
    """Minimal free resolution up to homological degree ``n`` (``n`` differentials)."""
    if mutants.any_active():
        syz = [M]
        for _ in range(n):
            syz.append(_omega(syz[-1]))
        return ResolutionSegment(M, n, [S.nu for S in syz], [syz[i].presentation() for i in range(n)], syz)
    chain = M.memo("syz-chain", lambda: [M])
    with M._lock:
        have = len(chain)
    while have <= n:
        nxt = _omega(chain[have - 1])
        with M._lock:
            if len(chain) == have:
                chain.append(nxt)
            have = len(chain)
    syz = chain[: n + 1]
    diffs = [syz[i].presentation() for i in range(n)]
    return ResolutionSegment(M, n, [S.nu for S in syz], diffs, list(syz))


def betti_numbers(M: FinModule, n: int) -> list[int]:
    return resolve(M, n).betti


def projective_dimension(M: FinModule, bound: int) -> int | None:
    """``pd M`` if the resolution reaches 0 within ``bound`` steps, else ``None``."""
    seg = resolve(M, bound + 1)
    for i, S in enumerate(seg.syzygies):
        if S.dim == 0:
            return max(i - 1, 0) if i > 0 else 0
    return None


# -- Ext ----------------------------------------------------------------------


@dataclass
class ExtGroup:
    """``Ext^i_R(M, N)`` as cohomology of ``Hom(F_., N)``."""

    i: int
    cohomology: Subquotient

    @property
    def dim(self) -> int:
        return self.cohomology.dim

    @property
    def module(self) -> FinModule:
        return self.cohomology.module


def cochain_map(d: FreeMatrix, N: FinModule) -> np.ndarray:
    """``Hom(d, N): N^{rows} -> N^{cols}``."""
    return d.act_on(N)


def ext(M: FinModule, N: FinModule, i: int) -> ExtGroup:
    F = M.F
    seg = resolve(M, i + 1)
    n = N.dim
    out_map = cochain_map(seg.d(i + 1), N)
    Z = F.kernel(out_map)
    if i == 0:
        Bsp = F.zeros(seg.betti[0] * n, 0)
    else:
        Bsp = F.column_basis(cochain_map(seg.d(i), N))
    return ExtGroup(i, Subquotient(F, Z, Bsp, power_action(N, seg.betti[i]), M.R))


def ext_dim(M: FinModule, N: FinModule, i: int) -> int:
    """``dim_k Ext^i(M, N)`` by rank counting (memoised on ``M``)."""
    def compute():
        F = M.F
        seg = resolve(M, i + 1)
        n = N.dim
        total = seg.betti[i] * n
        out_rank = F.rank(cochain_map(seg.d(i + 1), N)) if seg.betti[i + 1] and total else 0
        in_rank = F.rank(cochain_map(seg.d(i), N)) if i >= 1 and seg.betti[i - 1] and total else 0
        return (N, total - out_rank - in_rank)
    if mutants.any_active():
        return compute()[1]
    return M.memo(("ext-dim", id(N), i), compute)[1]


# -- duals ------------------------------------------------------------------------


def r_dual_space(M: FinModule) -> HomSpace:
    return hom_cached(M, _regular(M.R))


def _regular(R: LocalAlgebra) -> FinModule:
    cache = R.__dict__.setdefault("_regular_module", None)
    if cache is None:
        cache = regular_module(R)
        R.__dict__["_regular_module"] = cache
    return cache


def r_dual(M: FinModule) -> FinModule:
    """``M* = Hom_R(M, R)``."""
    def compute():
        D = r_dual_space(M).module
        D.label = f"{M.label}*" if M.label else "dual"
        return D
    return M.memo("r-dual", compute)


def dual_generators(M: FinModule) -> list[np.ndarray]:
    """k-matrices ``M -> R`` of the chosen minimal generators of ``M*``."""
    H = r_dual_space(M)
    D = r_dual(M)
    return [H.to_matrix(g) for g in D.generators.T]


def left_f_approximation(M: FinModule) -> ModuleHom:
    """Minimal left approximation by free modules: ``M -> R^{nu(M*)}``."""
    F, R = M.F, M.R
    gens = dual_generators(M)
    if mutants.active("nonminimal-left-approx"):
        gens = gens + [F.zeros(R.dim, M.dim)]
    target = free_module(R, len(gens))
    mat = np.concatenate(gens, axis=0) if gens else F.zeros(0, M.dim)
    return ModuleHom(M, target, mat)


def bidual_map(M: FinModule) -> ModuleHom:
    """The natural map ``sigma: M -> M**``."""
    F = M.F
    Dstar = r_dual(M)
    H2 = r_dual_space(Dstar)
    images = left_f_approximation_matrix(M)
    if H2.dim == 0:
        return ModuleHom(M, r_dual(Dstar), F.zeros(0, M.dim))
    coords = F.matmul(H2._left, images)
    return ModuleHom(M, r_dual(Dstar), coords)


def left_f_approximation_matrix(M: FinModule) -> np.ndarray:
    gens = dual_generators(M)
    return np.concatenate(gens, axis=0) if gens else M.F.zeros(0, M.dim)


def is_torsionless(M: FinModule) -> bool:
    return bidual_map(M).is_injective()


def is_reflexive(M: FinModule) -> bool:
    s = bidual_map(M)
    return s.is_injective() and s.is_surjective()


# -- cosyzygies ------------------------------------------------------------------


def cosyzygy(M: FinModule) -> FinModule:
    """``Omega^{-1} M``: cokernel of the minimal left free approximation."""
    def compute():
        theta = left_f_approximation(M)
        Q, _ = cokernel(theta)
        Q.label = f"Omega^-1({M.label})" if M.label else "cosyzygy"
        return Q
    if mutants.any_active():
        return compute()
    return M.memo("cosyzygy", compute)


def cosyzygy_sequence(M: FinModule) -> tuple[ModuleHom, ModuleHom]:
    """``M -theta-> R^m -> Omega^{-1} M -> 0``."""
    theta = left_f_approximation(M)
    Q, proj = cokernel(theta)
    return theta, proj


@dataclass
class CosyzygyChain:
    module: FinModule
    length: int
    modules: list[FinModule]
    approximations: list[ModuleHom]
    stable: list[bool] = field(default_factory=list)
    ext1_vanishes: list[bool] = field(default_factory=list)


def cosyzygy_chain(M: FinModule, n: int) -> CosyzygyChain:
    if n < 1:
        raise ValueError("n must be at least 1")
    mods, maps = [], []
    cur = M
    for _ in range(n):
        theta = left_f_approximation(cur)
        Q, _ = cokernel(theta)
        maps.append(theta)
        mods.append(Q)
        cur = Q
    reg = _regular(M.R)
    return CosyzygyChain(
        M, n, mods, maps,
        stable=[is_stable_module(Q) for Q in mods],
        ext1_vanishes=[ext_dim(Q, reg, 1) == 0 for Q in mods],
    )


def cosyzygy_power(M: FinModule, n: int) -> FinModule:
    for _ in range(n):
        M = cosyzygy(M)
    return M


def omega_power(M: FinModule, i: int) -> FinModule:
    """``Omega^i M`` for any integer ``i`` (cosyzygies for negative ``i``)."""
    return syzygy(M, i) if i >= 0 else cosyzygy_power(M, -i)


# -- transpose ----------------------------------------------------------------------


def transpose(M: FinModule) -> FinModule:
    """``Tr M = coker(d_1^T)`` for the minimal presentation ``d_1``."""
    def compute():
        d = M.presentation()
        if mutants.active("transpose-no-dual"):
            return coker_of_free_matrix(d, f"Tr({M.label})")
        return coker_of_free_matrix(d.transpose(), f"Tr({M.label})" if M.label else "Tr")
    if mutants.any_active():
        return compute()
    return M.memo("transpose", compute)


def transpose_of_presentation(d: FreeMatrix, label: str = "") -> FinModule:
    """Transpose relative to an arbitrary (possibly non-minimal) presentation ``d``."""
    return coker_of_free_matrix(d.transpose(), label)


def is_n_torsionfree(M: FinModule, n: int) -> bool:
    T = transpose(M)
    reg = _regular(M.R)
    return all(ext_dim(T, reg, i) == 0 for i in range(1, n + 1))


# -- Matlis duality -------------------------------------------------------------------


def matlis_dual(M: FinModule) -> FinModule:
    """``D(M) = Hom_k(M, k)`` with ``(r f)(m) = f(r m)``."""
    action = np.ascontiguousarray(np.transpose(M.action, (0, 2, 1)))
    return FinModule(M.R, action, f"D({M.label})" if M.label else "D")


def canonical_module(R: LocalAlgebra) -> FinModule:
    W = matlis_dual(regular_module(R))
    W.label = "omega"
    return W


# -- trace ideal, stability and free summands ------------------------------------------


def trace_ideal(M: FinModule) -> np.ndarray:
    """Basis (inside ``R``) of the sum of images of all ``M -> R``."""
    F, R = M.F, M.R
    mats = r_dual_space(M).matrices
    if not mats or M.dim == 0:
        return F.zeros(R.dim, 0)
    return F.column_basis(np.concatenate(mats, axis=1))


def is_stable_module(M: FinModule) -> bool:
    """No nonzero free summand, i.e. the trace ideal lies in ``m``."""
    R = M.R
    tr = trace_ideal(M)
    return all(not R.is_unit(c) for c in tr.T)


@dataclass
class FreeSplitting:
    """``M = S + R^t`` with explicit maps.

    ``inc_stable: S -> M`` and ``inc_free: R^t -> M`` together give an
    isomorphism ``S + R^t -> M``.
    """

    module: FinModule
    stable: FinModule
    free_rank: int
    inc_stable: ModuleHom
    inc_free: ModuleHom

    @cached_property
    def iso(self) -> ModuleHom:
        from .modules import direct_sum
        S, _, _ = direct_sum(self.stable, free_module(self.module.R, self.free_rank))
        return ModuleHom(S, self.module, np.concatenate([self.inc_stable.mat, self.inc_free.mat], axis=1))


def strip_free_summands(M: FinModule) -> FreeSplitting:
    """Split off free summands one at a time until the remainder is stable."""
    F, R = M.F, M.R
    free_vecs: list[np.ndarray] = []
    cur, inc = M, F.eye(M.dim)
    while cur.dim:
        H = r_dual_space(cur)
        found = None
        for psi in H.matrices:
            # psi(e_j) is a unit for some basis vector e_j
            res = F.matmul(R.residue_functional, psi)[0]
            nz = np.nonzero(res)[0]
            if nz.size:
                found = (psi, int(nz[0]))
                break
        if found is None:
            break
        psi, j = found
        free_vecs.append(inc[:, j].copy())
        K = F.kernel(psi)
        sub, sinc = submodule(cur, K)
        inc = F.matmul(inc, sinc.mat)
        cur = sub
    cur.label = f"stable({M.label})" if M.label else "stable"
    t = len(free_vecs)
    Fr = free_module(R, t)
    free_map = F.zeros(M.dim, t * R.dim)
    for c, v in enumerate(free_vecs):
        free_map[:, c * R.dim:(c + 1) * R.dim] = np.stack([F.matmul(M.action[l], v.reshape(-1, 1))[:, 0] for l in range(R.dim)], axis=1)
    return FreeSplitting(M, cur, t, ModuleHom(cur, M, inc), ModuleHom(Fr, M, free_map))


def stable_part(M: FinModule) -> FinModule:
    return strip_free_summands(M).stable
