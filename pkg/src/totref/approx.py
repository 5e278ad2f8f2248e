"""Approximation constructions: free covers, right G-approximations and their relatives.

An :class:`ApproxDatum` packages ``0 -> Y -iota-> X -f-> M -> 0`` with ``X``
G-projective and ``Y`` either of finite projective dimension or in G-perp
relative to a finite test set.  "Right approximation" is always checked
against an explicit list of certified G-projective test modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import mutants
from .errors import ConstructionFailed, GdimInfiniteAtBound, NotInGPerp
from .gtheory import DEFAULT_BOUND, gcheck, gdim, gperp_member
from .homology import _regular, left_f_approximation, projective_dimension, r_dual, transpose
from .linalg import NoSolution
from .modules import (
    FinModule,
    FreeMatrix,
    ModuleHom,
    cokernel,
    direct_sum,
    free_module,
    hom_cached,
    identity,
    kernel,
    pullback,
    pushout,
    quotient,
    submodule,
    zero_map,
    zero_module,
)
from .stable import _lift_cols, _lift_to_covers, _rows_to_free_map, extend_through_approximation


# -- free approximations -----------------------------------------------------------------------


def right_f_approximation(M: FinModule) -> ModuleHom:
    """The minimal free cover ``R^nu -> M``."""
    cov, pi = M.cover()
    if mutants.active("nonminimal-cover"):
        R, F = M.R, M.F
        big = free_module(R, M.nu + 1)
        return ModuleHom(big, M, np.concatenate([pi.mat, F.zeros(M.dim, R.dim)], axis=1))
    return pi


# -- the datum ---------------------------------------------------------------------------------


@dataclass
class ApproxDatum:
    target: FinModule
    X: FinModule
    Y: FinModule
    iota: ModuleHom
    f: ModuleHom
    y_kind: str  # "FinitePd" | "GPerpRelative"
    tests: list[FinModule] = field(default_factory=list)
    minimal: bool = False
    provenance: str = ""

    @property
    def identity_like(self) -> bool:
        return self.Y.dim == 0 and self.f.is_iso()

    def to_json(self) -> dict:
        return {
            "provenance": self.provenance,
            "target_vdim": self.target.dim,
            "X": {"vdim": self.X.dim, "nu": self.X.nu},
            "Y": {"vdim": self.Y.dim, "kind": self.y_kind},
            "minimal": self.minimal,
            "identity_like": self.identity_like,
            "tests": [T.label for T in self.tests],
        }


@dataclass
class DatumCheck:
    checks: dict[str, bool]
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]


def default_tests(R, extra: list[FinModule] | None = None) -> list[FinModule]:
    return [_regular(R)] + list(extra or [])


def hom_surjective(Xp: FinModule, f: ModuleHom) -> bool:
    """``Hom(X', f): Hom(X', X) -> Hom(X', M)`` is onto."""
    F = f.F
    HM = hom_cached(Xp, f.target)
    if HM.dim == 0:
        return True
    HX = hom_cached(Xp, f.source)
    if HX.dim == 0:
        return False
    comp = [F.matmul(f.mat, m) for m in HX.matrices]
    return F.rank(HM.from_matrices(comp)) == HM.dim


def is_short_exact(iota: ModuleHom, f: ModuleHom) -> bool:
    F = f.F
    if not (iota.is_linear() and f.is_linear()):
        return False
    if iota.mat.size and f.mat.size and not F.is_zero(F.matmul(f.mat, iota.mat)):
        return False
    return iota.is_injective() and f.is_surjective() and iota.rank + f.rank == f.source.dim


def verify_datum(D: ApproxDatum, tests: list[FinModule] | None = None, bound: int = DEFAULT_BOUND) -> DatumCheck:
    """Postconditions: exactness, certificates for ``X`` and ``Y``, test-set surjectivity."""
    tests = tests if tests is not None else (D.tests or default_tests(D.target.R))
    checks = {"exact": is_short_exact(D.iota, D.f)}
    checks["X_certified"] = gcheck(D.X, bound).certified
    details = {}
    if D.y_kind == "FinitePd":
        pd = projective_dimension(D.Y, bound)
        checks["Y_finite_pd"] = pd is not None
        details["pd_Y"] = pd
    else:
        try:
            checks["Y_in_gperp"] = bool(gperp_member(D.Y, tests, bound))
        except Exception:  # a test lacking a certificate
            checks["Y_in_gperp"] = False
    checks["test_surjective"] = all(hom_surjective(T, D.f) for T in tests)
    return DatumCheck(checks, details)


def identity_datum(M: FinModule, tests=None, provenance: str = "identity") -> ApproxDatum:
    Z = zero_module(M.R)
    return ApproxDatum(M, M, Z, zero_map(Z, M), identity(M), "FinitePd", list(tests or []), True, provenance)


def _datum_from_map(f: ModuleHom, y_kind: str, tests, provenance: str) -> ApproxDatum:
    Y, iota = kernel(f)
    Y.label = "Y"
    return ApproxDatum(f.target, f.source, Y, iota, f, y_kind, list(tests or []), False, provenance)


# -- Auslander-Buchweitz approximations ---------------------------------------------------------


def _free_inclusion(R, nu: int, columns: list[int]) -> np.ndarray:
    """k-matrix of ``R^l -> R^nu`` sending basis vector ``i`` to basis vector ``columns[i]``."""
    F = R.field
    ent = np.zeros((nu, len(columns), R.dim), dtype=F.dtype)
    for i, c in enumerate(columns):
        ent[c, i, R.unit] = 1
    return FreeMatrix(R, ent).to_linear()


def syzygy_lift(D: ApproxDatum, M: FinModule) -> ApproxDatum:
    """From a datum for ``Omega M`` build one for ``M``.

    With ``D: 0 -> Y -> X -f-> Omega M -> 0`` and the minimal left free
    approximation ``rho: X -> R^m``, the composite ``X -> Omega M -> R^nu``
    extends to ``g: R^m -> R^nu``; ``g`` induces ``Omega^{-1} X -> M``, and
    padding with ``R^l`` makes the middle map onto.
    """
    R, F = M.R, M.F
    d = R.dim
    OM, j = M.syzygy()
    if D.target is not OM:
        raise ConstructionFailed("datum is not for the syzygy of the given module")
    cov, pi = M.cover()
    nu = M.nu
    X = D.X
    rho = left_f_approximation(X)
    m = rho.target.dim // d
    jf = F.matmul(j.mat, D.f.mat)
    rows = extend_through_approximation(X, [jf[i * d:(i + 1) * d, :] for i in range(nu)])
    g = _rows_to_free_map(R, rows, m)
    X1, q = cokernel(rho)
    X1.label = f"Omega^-1({X.label})" if X.label else "Omega^-1 X"
    if X1.dim:
        sec = F.solve(q.mat, F.eye(X1.dim))
        h = F.matmul(pi.mat, F.matmul(g, sec))
    else:
        h = F.zeros(M.dim, 0)
    # residues of g decide how many free summands are needed
    gbar = F.zeros(nu, m)
    for c in range(m):
        col = g[:, c * d + R.unit]
        gbar[:, c] = [F.matmul(R.residue_functional, col[i * d:(i + 1) * d].reshape(-1, 1))[0, 0] for i in range(nu)]
    pad = [int(np.argmax(v)) for v in F.complement(F.column_basis(gbar), nu).T] if nu else []
    if mutants.active("approx-skip-padding"):
        pad = []
    if pad:
        Fl = free_module(R, len(pad))
        Xn, _, _ = direct_sum(X1, Fl, label=f"{X1.label} + R^{len(pad)}")
        fmat = np.concatenate([h, F.matmul(pi.mat, _free_inclusion(R, nu, pad))], axis=1)
    else:
        Xn, fmat = X1, h
    f_new = ModuleHom(Xn, M, fmat)
    out = _datum_from_map(f_new, "FinitePd", D.tests, "syzygy-lift")
    return out


def ab_approximation(M: FinModule, bound: int = DEFAULT_BOUND, tests=None, levels: int | None = None) -> ApproxDatum:
    """Right G-approximation of a module of finite G-dimension.

    ``levels`` forces the recursion depth (it must be at least the
    G-dimension); by default the G-dimension itself is used.
    """
    g = gdim(M, bound)
    if not g.finite:
        raise GdimInfiniteAtBound(f"no finite G-dimension found for {M.label or 'module'} within bound {bound}")
    n = g.value if levels is None else max(levels, g.value)
    return _ab(M, n, tests)


def _ab(M: FinModule, n: int, tests) -> ApproxDatum:
    if n == 0:
        return identity_datum(M, tests, "identity")
    D = _ab(M.syzygy()[0], n - 1, tests)
    return syzygy_lift(D, M)


# -- G-perp cover approximation -------------------------------------------------------------------


def gperp_cover_approximation(M: FinModule, tests: list[FinModule], bound: int = DEFAULT_BOUND) -> ApproxDatum:
    """For ``M`` in G-perp (relative to ``tests``) the free cover is a right G-approximation."""
    if not gperp_member(M, tests, bound):
        raise NotInGPerp(f"{M.label or 'module'} is not in G-perp relative to the test set")
    R, F = M.R, M.F
    cov, pi = M.cover()
    if mutants.active("gperp-cover-drop-generator") and M.nu:
        cov = free_module(R, M.nu - 1)
        pi = ModuleHom(cov, M, pi.mat[:, :cov.dim])
    D = _datum_from_map(pi, "GPerpRelative", tests, "gperp-cover")
    return D


# -- the three-sequence package ----------------------------------------------------------------------


@dataclass
class Triplet:
    first: tuple[ModuleHom, ModuleHom]   # 0 -> Y -> X -> M -> 0
    second: tuple[ModuleHom, ModuleHom]  # 0 -> M -> Y' -> X' -> 0
    third: tuple[ModuleHom, ModuleHom]   # 0 -> X -> M + F -> Y' -> 0
    X_prime: FinModule
    Y_prime: FinModule
    y_kind: str

    def verify(self, tests: list[FinModule], bound: int = DEFAULT_BOUND) -> DatumCheck:
        checks = {
            "first_exact": is_short_exact(*self.first),
            "second_exact": is_short_exact(*self.second),
            "third_exact": is_short_exact(*self.third),
            "X_prime_certified": gcheck(self.X_prime, bound).certified,
        }
        if self.y_kind == "FinitePd":
            checks["Y_prime_finite_pd"] = projective_dimension(self.Y_prime, bound) is not None
        else:
            checks["Y_prime_in_gperp"] = bool(gperp_member(self.Y_prime, tests, bound))
        return DatumCheck(checks)


def rapg_triplet(D: ApproxDatum) -> Triplet:
    """Pushout of ``f: X -> M`` along the (injective) left free approximation of ``X``."""
    X, M = D.X, D.target
    theta = left_f_approximation(X)
    Fr = theta.target
    Xp, p = cokernel(theta)
    Xp.label = "X'"
    Yp, a, b = pushout(D.f, theta)  # a: M -> Y', b: F -> Y'
    Yp.label = "Y'"
    # Y' -> X' induced by (0, p)
    Fm = M.F
    S, incs, projs = direct_sum(M, Fr)
    pu = ModuleHom(S, Yp, np.concatenate([a.mat, b.mat], axis=1))
    # a section of the pushout projection
    sec = Fm.solve(pu.mat, Fm.eye(Yp.dim)) if Yp.dim else Fm.zeros(S.dim, 0)
    second_map = ModuleHom(Yp, Xp, Fm.matmul(Fm.matmul(p.mat, projs[1].mat), sec))
    third_in = ModuleHom(X, S, np.concatenate([D.f.mat, Fm.reduce(-theta.mat)], axis=0))
    return Triplet((D.iota, D.f), (a, second_map), (third_in, pu), Xp, Yp, D.y_kind)


# -- sums, extensions, minimisation ---------------------------------------------------------------------


def direct_sum_datum(D1: ApproxDatum, D2: ApproxDatum) -> ApproxDatum:
    M, _, _ = direct_sum(D1.target, D2.target)
    X, _, _ = direct_sum(D1.X, D2.X)
    Y, _, _ = direct_sum(D1.Y, D2.Y)
    F = M.F
    from .linalg import direct_sum_matrix
    f = ModuleHom(X, M, direct_sum_matrix(F, [D1.f.mat, D2.f.mat]))
    iota = ModuleHom(Y, X, direct_sum_matrix(F, [D1.iota.mat, D2.iota.mat]))
    kind = "FinitePd" if D1.y_kind == D2.y_kind == "FinitePd" else "GPerpRelative"
    tests = D1.tests or D2.tests
    return ApproxDatum(M, X, Y, iota, f, kind, tests, D1.minimal and D2.minimal, "direct-sum")


def approx_of_extension(alpha: ModuleHom, beta: ModuleHom, DL: ApproxDatum, DN: ApproxDatum,
                        bound: int = DEFAULT_BOUND) -> ApproxDatum:
    """Datum for ``M`` from ``0 -> L -alpha-> M -beta-> N -> 0`` and data for ``L`` and ``N``.

    Pull ``X_N -> N`` back along ``beta`` to ``0 -> L -> P -> X_N -> 0``; its
    class, read off the cover ``0 -> Omega X_N -> R^n -> X_N -> 0`` as
    ``c: Omega X_N -> L``, lifts through ``f_L`` (``Ext^1(Omega X_N, Y_L) = 0``)
    to ``c'``.  The pushout ``E`` of ``R^n <- Omega X_N -c'-> X_L`` is
    G-projective and maps onto ``M``.
    """
    F, R = alpha.F, alpha.source.R
    L, M, N = alpha.source, alpha.target, beta.target
    if DL.target is not L or DN.target is not N:
        raise ConstructionFailed("data do not match the ends of the sequence")
    XN, fN = DN.X, DN.f
    XL, fL = DL.X, DL.f
    # lift the cover of X_N to M: beta . s = fN . pi
    cov, pi = XN.cover()
    OXN, inc = XN.syzygy()
    want = F.matmul(fN.mat, pi.mat)
    try:
        s = _r_linear_lift(cov, beta, want)
    except NoSolution as exc:
        raise ConstructionFailed("cover does not lift to the middle term") from exc
    # c: Omega X_N -> L with alpha . c = s . inc
    si = F.matmul(s, inc.mat)
    try:
        c = F.solve(alpha.mat, si) if OXN.dim else F.zeros(L.dim, 0)
    except NoSolution as exc:
        raise ConstructionFailed("extension class is not supported on L") from exc
    cmap = ModuleHom(OXN, L, c)
    # c': Omega X_N -> X_L with fL . c' = c
    if mutants.active("approx-zero-lift"):
        cp = F.zeros(XL.dim, OXN.dim)
    else:
        cp = _lift_hom(OXN, fL, c)
    E, to_E_from_cov, to_E_from_XL = pushout(inc, ModuleHom(OXN, XL, cp))
    E.label = "E"
    # E -> M: (s, alpha . fL) on R^n + X_L
    S, _, _ = direct_sum(cov, XL)
    both = np.concatenate([to_E_from_cov.mat, to_E_from_XL.mat], axis=1)
    sec = F.solve(both, F.eye(E.dim)) if E.dim else F.zeros(S.dim, 0)
    onS = np.concatenate([s, F.matmul(alpha.mat, fL.mat)], axis=1)
    fE = ModuleHom(E, M, F.matmul(onS, sec))
    kind = "FinitePd" if DL.y_kind == DN.y_kind == "FinitePd" else "GPerpRelative"
    return _datum_from_map(fE, kind, DL.tests or DN.tests, "extension")


def _r_linear_lift(cov: FinModule, beta: ModuleHom, want: np.ndarray) -> np.ndarray:
    """R-linear ``s: R^n -> M`` with ``beta . s = want`` (``want`` R-linear on the free module)."""
    F, R = beta.F, beta.source.R
    d = R.dim
    n = cov.dim // d if d else 0
    M = beta.source
    cols = []
    for c in range(n):
        cols.append(F.solve(beta.mat, want[:, c * d + R.unit]))
    if not cols:
        return F.zeros(M.dim, 0)
    imgs = np.stack(cols, axis=1)
    # extend R-linearly: e_c * b_l -> b_l . m_c
    out = F.zeros(M.dim, cov.dim)
    for c in range(n):
        for l in range(d):
            out[:, c * d + l] = F.matmul(M.action[l], imgs[:, c:c + 1])[:, 0]
    return out


def _lift_hom(G: FinModule, f: ModuleHom, c: np.ndarray) -> np.ndarray:
    """An R-linear ``c'`` with ``f . c' = c``, searched inside ``Hom(G, source f)``."""
    F = f.F
    if G.dim == 0:
        return F.zeros(f.source.dim, 0)
    HX = hom_cached(G, f.source)
    HM = hom_cached(G, f.target)
    if HX.dim == 0:
        if F.is_zero(c):
            return F.zeros(f.source.dim, G.dim)
        raise ConstructionFailed("no homomorphisms to lift through")
    A = HM.from_matrices([F.matmul(f.mat, m) for m in HX.matrices])
    try:
        x = F.solve(A, HM.from_matrix(c))
    except NoSolution as exc:
        raise ConstructionFailed("extension class does not lift through the approximation") from exc
    return HX.to_matrix(x)


def minimize_datum(D: ApproxDatum) -> ApproxDatum:
    """Drop free summands of ``X`` whose image is already covered by the rest."""
    from .homology import strip_free_summands
    F, R = D.X.F, D.X.R
    d = R.dim
    split = strip_free_summands(D.X)
    iso = split.iso  # S + R^t -> X
    t = split.free_rank
    f_on = F.matmul(D.f.mat, iso.mat)  # S + R^t -> M
    keep = list(range(split.stable.dim)) + [split.stable.dim + c * d + l for c in range(t) for l in range(d)]
    dropped = []
    for c in range(t):
        start = split.stable.dim + c * d
        rest = [i for i in keep if not (start <= i < start + d)]
        target = f_on[:, start + R.unit]
        try:
            F.solve(f_on[:, rest], target) if rest else None
        except NoSolution:
            continue
        if not rest and not F.is_zero(target):
            continue
        keep = rest
        dropped.append(c)
    if not dropped:
        return ApproxDatum(D.target, D.X, D.Y, D.iota, D.f, D.y_kind, D.tests, True, D.provenance)
    Sum = iso.source
    sub_basis = F.eye(Sum.dim)[:, keep]
    Xs, xinc = submodule(Sum, sub_basis, "X")
    f_new = ModuleHom(Xs, D.target, F.matmul(f_on, sub_basis))
    out = _datum_from_map(f_new, D.y_kind, D.tests, D.provenance + "+minimized")
    out.minimal = True
    return out


# -- left approximations via the transpose --------------------------------------------------------------


@dataclass
class LeftApprox:
    phi: ModuleHom  # M -> X
    X: FinModule
    source_datum: ApproxDatum

    def verify(self, tests: list[FinModule], bound: int = DEFAULT_BOUND) -> DatumCheck:
        F = self.phi.F
        checks = {"linear": self.phi.is_linear(), "X_certified": gcheck(self.X, bound).certified}
        for T in tests:
            HX = hom_cached(self.X, T)
            HM = hom_cached(self.phi.source, T)
            if HM.dim == 0:
                ok = True
            elif HX.dim == 0:
                ok = False
            else:
                comp = [F.matmul(m, self.phi.mat) for m in HX.matrices]
                ok = F.rank(HM.from_matrices(comp)) == HM.dim
            checks[f"hom_surjective[{T.label}]"] = ok
        return DatumCheck(checks)


def left_g_approximation(M: FinModule, bound: int = DEFAULT_BOUND, tests=None) -> LeftApprox:
    """``M -> X`` through which maps to G-projectives factor, built from a right approximation of ``Tr M``."""
    F, R = M.F, M.R
    d = R.dim
    dM = M.presentation()  # nu(M) x beta1(M)
    dMT = dM.transpose()
    TrM, qT = quotient(free_module(R, dMT.rows), dMT.to_linear(), f"Tr({M.label})")
    gd = gdim(TrM, bound)
    if not gd.finite:
        raise GdimInfiniteAtBound("transpose has infinite G-dimension within bound")
    D = ab_approximation(TrM, bound, tests)
    X0, g = D.X, D.f
    dX = X0.presentation()  # nu(X0) x beta1(X0)
    # g0: R^nu(X0) -> R^beta1(M) over g
    covX, piX = X0.cover()
    want = F.matmul(g.mat, piX.mat)
    g0_lin = _r_linear_lift_free(R, qT, want, X0.nu)
    g0 = FreeMatrix.from_columns(R, g0_lin[:, [c * d + R.unit for c in range(X0.nu)]], dMT.rows) if X0.nu else None
    if g0 is not None and dX.cols:
        g1 = _lift_cols(R, dMT, g0.compose(dX))  # nu(M) x beta1(X0)
        g1T = g1.transpose()
    else:
        g1T = FreeMatrix(R, np.zeros((dX.cols, M.nu, d), dtype=F.dtype))
    dXT = dX.transpose()
    TrX0, qX = quotient(free_module(R, dXT.rows), dXT.to_linear(), "Tr X0") if dXT.rows else (zero_module(R), None)
    if TrX0.dim:
        phi0 = F.matmul(qX.mat, F.matmul(g1T.to_linear(), M.cover_section))
    else:
        phi0 = F.zeros(0, M.dim)
    # pad with generators of M* not reached by phi0*
    theta = left_f_approximation(M)
    pad = _needed_dual_generators(M, TrX0, phi0)
    pieces = [phi0] + [theta.mat[c * d:(c + 1) * d, :] for c in pad]
    mods = [TrX0] + [free_module(R, 1) for _ in pad]
    X, _, _ = direct_sum(*mods, label=f"Tr X0 + R^{len(pad)}")
    phi = ModuleHom(M, X, np.concatenate(pieces, axis=0))
    return LeftApprox(phi, X, D)


def _r_linear_lift_free(R, q: ModuleHom, want: np.ndarray, n: int) -> np.ndarray:
    F = R.field
    d = R.dim
    out = F.zeros(q.source.dim, n * d)
    Fq = q.source
    for c in range(n):
        img = F.solve(q.mat, want[:, c * d + R.unit])
        for l in range(d):
            out[:, c * d + l] = F.matmul(Fq.action[l], img.reshape(-1, 1))[:, 0]
    return out


def _needed_dual_generators(M: FinModule, T: FinModule, phi0: np.ndarray) -> list[int]:
    """Indices of generators of ``M*`` to add so that ``X* -> M*`` becomes onto."""
    F = M.F
    Dm = r_dual(M)
    H = hom_cached(M, _regular(M.R))
    if Dm.dim == 0:
        return []
    img_vecs = []
    if T.dim:
        for psi in hom_cached(T, _regular(M.R)).matrices:
            img_vecs.append(H.from_matrix(F.matmul(psi, phi0)))
    span = np.concatenate([Dm.mM] + ([np.stack(img_vecs, axis=1)] if img_vecs else []), axis=1)
    chosen = []
    for c, gen in enumerate(Dm.generators.T):
        if not F.in_span(span, gen):
            chosen.append(c)
            span = np.concatenate([span, gen.reshape(-1, 1)], axis=1)
    return chosen
