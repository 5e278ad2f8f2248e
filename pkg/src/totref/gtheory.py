"""Isomorphism testing, G-projectivity certificates, G-dimension and G-perp membership."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import mutants
from .errors import AlgebraMismatch, NotCertified
from .homology import (
    _regular,
    ext_dim,
    is_reflexive,
    left_f_approximation,
    r_dual,
    resolve,
    syzygy,
    transpose,
)
from .modules import FinModule, FreeMatrix, ModuleHom, hom_cached, is_free

DEFAULT_BOUND = 8


# -- isomorphism test ------------------------------------------------------------------


@dataclass
class IsoResult:
    verdict: str  # "CertifiedIso" | "CertifiedNot" | "ProbablyNot"
    hom: ModuleHom | None = None
    reason: str = ""
    trials: int = 0
    failure_bound: float = 0.0

    def __bool__(self) -> bool:
        return self.verdict == "CertifiedIso"

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "reason": self.reason}
        if self.verdict == "ProbablyNot":
            out["trials"] = self.trials
            out["failure_bound"] = self.failure_bound
        return out


def invariants(M: FinModule) -> tuple:
    """Cheap isomorphism invariants: vdim, nu, dim mM, beta_1, dim ann, socle dim."""
    def compute():
        return (M.dim, M.nu, M.mM.shape[1], M.relations.shape[1], M.annihilator.shape[1], M.socle.shape[1])
    return M.memo("invariants", compute)


def iso_test(M: FinModule, N: FinModule, trials: int = 24, seed: int = 0) -> IsoResult:
    """Decide ``M ~= N``; an isomorphism is searched for among random homomorphisms.

    A map is an isomorphism iff vdims agree and its reduction modulo ``m``
    is surjective (Nakayama), so only a ``nu x nu`` determinant matters and a
    random element of ``Hom(M, N)`` misses with probability at most
    ``nu / |k|`` when an isomorphism exists.
    """
    if not M.R.same_as(N.R):
        raise AlgebraMismatch("modules live over different algebras")
    F = M.F
    im, iN = invariants(M), invariants(N)
    if im != iN:
        names = ["vdim", "nu", "dim mM", "beta_1", "dim ann", "socle dim"]
        diff = [n for n, a, b in zip(names, im, iN) if a != b]
        return IsoResult("CertifiedNot", reason=f"invariant(s) differ: {', '.join(diff)}")
    if M.dim == 0:
        return IsoResult("CertifiedIso", ModuleHom(M, N, F.zeros(0, 0)), reason="zero modules")
    H = hom_cached(M, N)
    if H.dim == 0:
        return IsoResult("CertifiedNot", reason="Hom(M, N) = 0")
    # top maps M/mM -> N/mN for each basis homomorphism
    comp = N.generators
    qN = F.inverse(np.concatenate([N.mM, comp], axis=1))[N.mM.shape[1]:, :]
    tops = [F.matmul(qN, F.matmul(phi, M.generators)) for phi in H.matrices]
    rng = np.random.default_rng(seed)
    nu = M.nu
    candidates = [np.eye(H.dim, dtype=int)[:, j] for j in range(H.dim)]
    for t in range(trials):
        candidates.append(rng.integers(0, F.p if F.p else 1000, size=H.dim))
    for c in candidates:
        c = F.vector(c)
        top = F.zeros(nu, nu)
        for cj, tj in zip(c, tops):
            if cj:
                top = F.add(top, F.scale(cj, tj))
        if F.rank(top) == nu:
            phi = F.zeros(N.dim, M.dim)
            for cj, mj in zip(c, H.matrices):
                if cj:
                    phi = F.add(phi, F.scale(cj, mj))
            h = ModuleHom(M, N, phi)
            if h.is_iso():
                return IsoResult("CertifiedIso", h, reason="invertible homomorphism found")
    bound = min(1.0, nu / F.size) ** trials
    return IsoResult("ProbablyNot", reason="no invertible homomorphism among random samples",
                     trials=trials, failure_bound=bound)


def is_isomorphic(M: FinModule, N: FinModule) -> bool:
    return bool(iso_test(M, N))


def stably_isomorphic(M: FinModule, N: FinModule) -> IsoResult:
    """Isomorphism after stripping free summands from both sides."""
    from .homology import strip_free_summands
    return iso_test(strip_free_summands(M).stable, strip_free_summands(N).stable)


# -- complete resolutions ---------------------------------------------------------------


@dataclass
class CompleteResolutionCert:
    """Certificate that ``X`` is G-projective, with its complete resolution.

    ``period = (a, b)`` records a witnessed isomorphism ``Omega^a X ~= Omega^b X``.
    The complete resolution ``T`` has ``T_i = F_i`` (minimal resolution of X)
    for ``i >= 0`` and ``T_{-j} = G_{j-1}^*`` (dual of the minimal resolution
    of ``X*``) for ``j >= 1``; ``d_0 = theta . pi``.
    """

    module: FinModule
    period: tuple[int, int]
    witness: ModuleHom | None
    bound: int
    zero_period: bool = False

    @property
    def period_length(self) -> int:
        return self.period[1] - self.period[0]

    @cached_property
    def _dual_module(self) -> FinModule:
        return r_dual(self.module)

    def ranks(self, lo: int, hi: int) -> dict[int, int]:
        X = self.module
        out = {}
        pos = resolve(X, max(hi, 0) + 1).betti if hi >= 0 else []
        neg = resolve(self._dual_module, max(-lo, 0) + 1).betti if lo < 0 else []
        for i in range(lo, hi + 1):
            out[i] = pos[i] if i >= 0 else neg[-i - 1]
        return out

    def differential(self, i: int) -> FreeMatrix:
        """``d_i: T_i -> T_{i-1}``."""
        X = self.module
        if i >= 1:
            return resolve(X, i).d(i)
        if i == 0:
            theta = left_f_approximation(X)
            cov, pi = X.cover()
            return FreeMatrix.from_hom(theta @ pi, theta.target.nu if theta.target.dim else 0, X.nu)
        j = -i
        return resolve(self._dual_module, j).d(j).transpose()

    def window(self, lo: int, hi: int) -> dict[int, FreeMatrix]:
        """Differentials ``d_i`` for ``lo <= i <= hi``."""
        return {i: self.differential(i) for i in range(lo, hi + 1)}

    def verify(self, lo: int = -3, hi: int = 3) -> bool:
        """Exactness of ``T`` and ``T*`` at every node strictly inside the window."""
        F = self.module.F
        R = self.module.R
        mats = {i: d.to_linear() for i, d in self.window(lo, hi).items()}
        duals = {i: d.transpose().to_linear() for i, d in self.window(lo, hi).items()}
        for i in range(lo + 1, hi + 1):
            # node T_{i-1}: d_i into it, d_{i-1} out of it
            a, b = mats[i], mats[i - 1]
            if not F.is_exact_at(a, b):
                return False
            if not F.is_exact_at(duals[i - 1], duals[i]):
                return False
        # the image of d_0 is X: rank of d_0 equals vdim X
        if lo <= 0 <= hi and F.rank(mats[0]) != self.module.dim:
            return False
        return True

    def to_json(self) -> dict:
        return {
            "period": list(self.period),
            "zero_period": self.zero_period,
            "bound": self.bound,
            "ranks": {str(k): v for k, v in self.ranks(-2, 2).items()},
        }


# -- G-projectivity ---------------------------------------------------------------------


@dataclass
class GCert:
    verdict: str  # CertifiedGProjective | CertifiedNotGProjective | UndecidedAtBound
    bound: int
    witness: dict | None = None
    complete_resolution: CompleteResolutionCert | None = None
    routes: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.verdict == "CertifiedGProjective"

    @property
    def period(self) -> tuple[int, int] | None:
        return self.complete_resolution.period if self.complete_resolution else None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "bound": self.bound}
        if self.witness:
            out["witness"] = self.witness
        if self.complete_resolution:
            out["complete_resolution"] = self.complete_resolution.to_json()
        out["routes"] = self.routes
        return out


def _find_period(M: FinModule, upto: int) -> tuple[int, int, ModuleHom] | None:
    seg = resolve(M, upto)
    syz = seg.syzygies
    for b in range(1, upto + 1):
        for a in range(b):
            if invariants(syz[a]) != invariants(syz[b]):
                continue
            res = iso_test(syz[a], syz[b])
            if res:
                return a, b, res.hom
    return None


def gcheck(M: FinModule, bound: int = DEFAULT_BOUND) -> GCert:
    """Certify (or refute) G-projectivity of ``M`` within ``bound``.

    Refutation: ``M`` not reflexive, or a nonvanishing ``Ext^i(M, R)``,
    ``Ext^i(M*, R)`` or ``Ext^i(Tr M, R)`` with ``1 <= i <= bound``.
    Certification: a repeat ``Omega^a M ~= Omega^b M`` with ``b <= bound``
    plus vanishing through degree ``b``; the periodic stretch of the
    resolution is then totally acyclic, so vanishing holds in all degrees.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if mutants.any_active():
        return _gcheck(M, bound)
    return M.memo(("gcheck", bound), lambda: _gcheck(M, bound))


def _gcheck(M: FinModule, bound: int) -> GCert:
    Rm = _regular(M.R)
    routes: dict[str, list[int]] = {"ext_M": [], "ext_Mstar": [], "ext_TrM": []}
    if M.dim == 0 or is_free(M):
        cert = CompleteResolutionCert(M, (1, 2) if M.dim else (0, 1), None, bound, zero_period=True)
        return GCert("CertifiedGProjective", bound, complete_resolution=cert, routes=routes)
    period = None
    for i in range(1, bound + 1):
        e = ext_dim(M, Rm, i)
        routes["ext_M"].append(e)
        if e:
            return GCert("CertifiedNotGProjective", bound, witness={"condition": "Ext(M,R)", "index": i}, routes=routes)
        if period is None:
            period = _find_period(M, i)
    if not is_reflexive(M):
        return GCert("CertifiedNotGProjective", bound, witness={"condition": "reflexive", "index": None}, routes=routes)
    Mstar, TrM = r_dual(M), transpose(M)
    for name, N in (("ext_Mstar", Mstar), ("ext_TrM", TrM)):
        for i in range(1, bound + 1):
            e = ext_dim(N, Rm, i)
            routes[name].append(e)
            if e:
                cond = "Ext(M*,R)" if name == "ext_Mstar" else "Ext(Tr M,R)"
                return GCert("CertifiedNotGProjective", bound, witness={"condition": cond, "index": i}, routes=routes)
    if period is None:
        return GCert("UndecidedAtBound", bound, witness={"condition": "no syzygy repeat within bound", "index": None},
                     routes=routes)
    a, b, iso = period
    cert = CompleteResolutionCert(M, (a, b), iso, bound)
    return GCert("CertifiedGProjective", bound, complete_resolution=cert, routes=routes)


def require_certificate(X: FinModule, bound: int = DEFAULT_BOUND) -> CompleteResolutionCert:
    g = gcheck(X, bound)
    if not g.certified:
        raise NotCertified(f"{X.label or 'module'} is not certified G-projective ({g.verdict})")
    return g.complete_resolution


@dataclass
class GDim:
    value: int | None  # None means InfinityAtBound
    bound: int
    ext_dims: list[int]
    consistent: bool = True
    searched: int | None = None  # last syzygy examined when the size cap stopped the search

    @property
    def finite(self) -> bool:
        return self.value is not None

    def __str__(self) -> str:
        return str(self.value) if self.finite else "InfinityAtBound"

    def to_json(self) -> dict:
        out = {"gdim": self.value if self.finite else "InfinityAtBound", "bound": self.bound,
               "ext_M_R": self.ext_dims, "consistent": self.consistent}
        if self.searched is not None:
            out["searched_upto"] = self.searched
        return out


# syzygies past this vector-space dimension are not examined: Ext against them
# costs time and memory growing with the cube of their size
GDIM_MAX_VDIM = 300


def gdim(M: FinModule, bound: int = DEFAULT_BOUND, max_vdim: int = GDIM_MAX_VDIM) -> GDim:
    """Least ``n <= bound`` with ``Omega^n M`` certified G-projective.

    The search also stops at the first syzygy larger than ``max_vdim``;
    ``searched`` then records how far it got.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    Rm = _regular(M.R)
    last = bound
    for n in range(bound + 1):
        O = syzygy(M, n)
        if O.dim > max(max_vdim, M.dim):
            last = n - 1
            break
        g = gcheck(O, bound)
        if g.certified:
            exts = [ext_dim(M, Rm, i) for i in range(1, n + 1)]
            nonzero = [i for i, e in enumerate(exts, start=1) if e]
            expected = max(nonzero) if nonzero else 0
            return GDim(n, bound, exts, consistent=(expected == n))
    exts = [ext_dim(M, Rm, i) for i in range(1, max(last, 0) + 1)]
    return GDim(None, bound, exts, searched=None if last == bound else last)


# -- G-perp relative to a test set ---------------------------------------------------------


@dataclass
class GPerpResult:
    member: bool
    per_test: list[dict]

    def __bool__(self) -> bool:
        return self.member


def gperp_member(M: FinModule, tests: list[FinModule], bound: int = DEFAULT_BOUND) -> GPerpResult:
    """``Ext^i(X, M) = 0`` for all ``i >= 1`` and every certified test ``X``.

    For a test with a syzygy repeat ``(a, b)``, degrees ``1..max(b, p+1)``
    cover everything, ``p = b - a`` being the period.
    """
    per = []
    ok = True
    for X in tests:
        cert = require_certificate(X, bound)
        a, b = cert.period
        top = max(b, cert.period_length + 1)
        dims = [] if cert.zero_period else [ext_dim(X, M, i) for i in range(1, top + 1)]
        vanish = not any(dims)
        per.append({"test": X.label, "degrees": top, "ext_dims": dims, "vanishes": vanish})
        ok = ok and vanish
    return GPerpResult(ok, per)
