"""Finitely generated modules over a :class:`LocalAlgebra` as k-vector spaces with action.

A module of k-dimension ``n`` over an algebra of dimension ``d`` stores an
array ``action`` of shape ``(d, n, n)``: ``action[l]`` is the matrix of the
basis element ``e_l``.  The free module ``R^r`` uses block coordinates, block
``c`` holding the ``R``-coordinates of the ``c``-th component.
"""

from __future__ import annotations

import threading
from functools import cached_property

import numpy as np

from .algebra import LocalAlgebra
from .errors import AlgebraMismatch, CompositionMismatch, InvalidModule
from .linalg import Field, direct_sum_matrix


def _act(F: Field, action: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Matrix of the ring element ``r`` given the basis actions."""
    if F.dtype is object:
        out = F.zeros(action.shape[1], action.shape[2])
        for i in np.nonzero(r)[0]:
            out = out + r[i] * action[i]
        return F.reduce(out)
    return F.reduce(np.tensordot(r, action, axes=(0, 0)))


def _conj(F: Field, left: np.ndarray, action: np.ndarray, right: np.ndarray) -> np.ndarray:
    """``left @ action[l] @ right`` for every ``l``."""
    d = action.shape[0]
    out = np.empty((d, left.shape[0], right.shape[1]), dtype=F.dtype)
    for l in range(d):
        out[l] = F.matmul(F.matmul(left, action[l]), right)
    return out


class FinModule:
    """A finitely generated module, stored as a k-space with the algebra action."""

    def __init__(self, R: LocalAlgebra, action: np.ndarray, label: str = ""):
        self.R = R
        self.F = R.field
        self.action = action
        self.dim = action.shape[1]
        self.label = label
        self._memo: dict = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        lab = f" {self.label}" if self.label else ""
        return f"<FinModule{lab} vdim={self.dim} nu={self.nu}>"

    # -- basic structure ----------------------------------------------------

    def act(self, r: np.ndarray) -> np.ndarray:
        return _act(self.F, self.action, r)

    @cached_property
    def gen_action(self) -> list[np.ndarray]:
        return [self.act(g) for g in self.R.gens.T]

    def memo(self, key, compute):
        """Per-module cache guarded by a lock (safe under concurrent readers)."""
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        value = compute()
        with self._lock:
            return self._memo.setdefault(key, value)

    def validate(self) -> "FinModule":
        F, R = self.F, self.R
        if self.action.shape != (R.dim, self.dim, self.dim):
            raise InvalidModule("action array has the wrong shape")
        if not np.array_equal(self.action[R.unit], F.eye(self.dim)):
            raise InvalidModule("the unit does not act as the identity")
        for i in range(R.dim):
            for j in range(i, R.dim):
                lhs = F.matmul(self.action[i], self.action[j])
                rhs = self.act(R.table[i, j])
                if not np.array_equal(lhs, rhs):
                    raise InvalidModule(f"action of e_{i} e_{j} does not match structure constants")
        return self

    @cached_property
    def mM(self) -> np.ndarray:
        """Basis of ``m M``."""
        F = self.F
        if self.dim == 0 or not self.gen_action:
            return F.zeros(self.dim, 0)
        return F.column_basis(np.concatenate(self.gen_action, axis=1))

    @property
    def nu(self) -> int:
        """Minimal number of generators."""
        return self.dim - self.mM.shape[1]

    @cached_property
    def generators(self) -> np.ndarray:
        """Lexicographically first standard basis vectors complementing ``m M``."""
        return self.F.complement(self.mM, self.dim)

    @cached_property
    def generator_indices(self) -> list[int]:
        return [int(np.nonzero(c)[0][0]) for c in self.generators.T]

    @cached_property
    def socle(self) -> np.ndarray:
        F = self.F
        if not self.gen_action:
            return F.eye(self.dim)
        return F.kernel(np.concatenate(self.gen_action, axis=0))

    @cached_property
    def annihilator(self) -> np.ndarray:
        """Basis of ``ann_R(M)`` inside ``R``."""
        F, R = self.F, self.R
        if self.dim == 0:
            return F.eye(R.dim)
        # r -> r.M as a linear map R -> End_k(M)
        flat = self.action.reshape(R.dim, -1).T
        return F.kernel(flat)

    def is_zero(self) -> bool:
        return self.dim == 0

    # -- minimal cover ------------------------------------------------------

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        """k-matrix of ``pi: R^nu -> M`` sending basis vector ``c`` to generator ``c``."""
        F = self.F
        blocks = [self.action[:, :, j].T for j in self.generator_indices]
        if not blocks:
            return F.zeros(self.dim, 0)
        return np.ascontiguousarray(np.concatenate(blocks, axis=1))

    @cached_property
    def cover_section(self) -> np.ndarray:
        """A k-linear right inverse of :attr:`cover_matrix`."""
        F = self.F
        if self.dim == 0:
            return F.zeros(self.cover_matrix.shape[1], 0)
        return F.solve(self.cover_matrix, F.eye(self.dim))

    @cached_property
    def relations(self) -> np.ndarray:
        """Minimal generators of ``ker pi`` as columns in ``R^nu`` coordinates."""
        return self._relations()

    def _relations(self) -> np.ndarray:
        omega, inc = self.syzygy()
        return self.F.matmul(inc.mat, omega.generators)

    def cover(self) -> tuple["FinModule", "ModuleHom"]:
        """Minimal free cover ``pi: R^nu -> M``."""
        return self.memo("cover", self._cover)

    def _cover(self):
        Fr = free_module(self.R, self.nu)
        return Fr, ModuleHom(Fr, self, self.cover_matrix)

    def syzygy(self) -> tuple["FinModule", "ModuleHom"]:
        """First syzygy ``Omega M = ker pi`` with its inclusion into the cover."""
        return self.memo("syzygy", self._syzygy)

    def _syzygy(self):
        F = self.F
        cov, pi = self.cover()
        K = F.kernel(self.cover_matrix)
        return submodule(cov, K, f"Omega({self.label})" if self.label else "Omega")

    def presentation(self) -> "FreeMatrix":
        """Minimal presentation matrix ``R^{beta_1} -> R^{nu}``."""
        return FreeMatrix.from_columns(self.R, self.relations, self.nu)

    def to_json(self) -> dict:
        F = self.F
        return {
            "label": self.label,
            "vdim": self.dim,
            "nu": self.nu,
            "action": [[[F.to_int(x) for x in row] for row in g] for g in self.gen_action],
        }


class ModuleHom:
    """An R-linear map ``source -> target`` stored as a k-matrix."""

    def __init__(self, source: FinModule, target: FinModule, mat: np.ndarray):
        if not source.R.same_as(target.R):
            raise AlgebraMismatch("source and target live over different algebras")
        if mat.shape != (target.dim, source.dim):
            raise CompositionMismatch(f"matrix shape {mat.shape} does not match ({target.dim}, {source.dim})")
        self.source = source
        self.target = target
        self.mat = mat
        self.F = source.F

    def __repr__(self) -> str:
        return f"<ModuleHom {self.source.dim} -> {self.target.dim}>"

    def is_linear(self) -> bool:
        F = self.F
        for a, b in zip(self.source.gen_action, self.target.gen_action):
            if not np.array_equal(F.matmul(self.mat, a), F.matmul(b, self.mat)):
                return False
        return True

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        if other.target is not self.source and other.target.dim != self.source.dim:
            raise CompositionMismatch("maps are not composable")
        return ModuleHom(other.source, self.target, self.F.matmul(self.mat, other.mat))

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.source, self.target, self.F.add(self.mat, other.mat))

    def __sub__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.source, self.target, self.F.sub(self.mat, other.mat))

    def scaled(self, c) -> "ModuleHom":
        return ModuleHom(self.source, self.target, self.F.scale(c, self.mat))

    @property
    def rank(self) -> int:
        return self.F.rank(self.mat)

    def is_injective(self) -> bool:
        return self.rank == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def is_zero(self) -> bool:
        return self.F.is_zero(self.mat)

    def inverse(self) -> "ModuleHom":
        return ModuleHom(self.target, self.source, self.F.inverse(self.mat))


def identity(M: FinModule) -> ModuleHom:
    return ModuleHom(M, M, M.F.eye(M.dim))


def zero_map(M: FinModule, N: FinModule) -> ModuleHom:
    return ModuleHom(M, N, M.F.zeros(N.dim, M.dim))


# -- free modules and matrices over R -------------------------------------------


def free_action(R: LocalAlgebra, n: int) -> np.ndarray:
    F = R.field
    out = np.empty((R.dim, n * R.dim, n * R.dim), dtype=F.dtype)
    eye = F.eye(n)
    for l in range(R.dim):
        out[l] = np.kron(eye, R.mult[l]) if n else F.zeros(0, 0)
    return out


def free_module(R: LocalAlgebra, n: int, label: str | None = None) -> FinModule:
    M = FinModule(R, free_action(R, n), label if label is not None else f"R^{n}")
    M._free_rank = n
    return M


def zero_module(R: LocalAlgebra) -> FinModule:
    return free_module(R, 0, "0")


class FreeMatrix:
    """A ``rows x cols`` matrix over ``R``: the map ``R^cols -> R^rows``.

    ``entries[i, j]`` is the coordinate vector of the ring element in row
    ``i``, column ``j``.
    """

    def __init__(self, R: LocalAlgebra, entries: np.ndarray):
        self.R = R
        self.entries = entries
        self.rows, self.cols = entries.shape[:2]

    @classmethod
    def from_columns(cls, R: LocalAlgebra, columns: np.ndarray, rows: int) -> "FreeMatrix":
        """Columns given as vectors of ``R^rows`` in block coordinates."""
        d = R.dim
        ent = np.empty((rows, columns.shape[1], d), dtype=R.field.dtype)
        for j in range(columns.shape[1]):
            ent[:, j, :] = columns[:, j].reshape(rows, d)
        return cls(R, ent)

    @classmethod
    def from_elements(cls, R: LocalAlgebra, grid) -> "FreeMatrix":
        rows = len(grid)
        cols = len(grid[0]) if rows else 0
        ent = np.empty((rows, cols, R.dim), dtype=R.field.dtype)
        for i in range(rows):
            for j in range(cols):
                ent[i, j] = grid[i][j]
        return cls(R, ent)

    @classmethod
    def from_hom(cls, f: ModuleHom, rows: int, cols: int) -> "FreeMatrix":
        """Read the ring matrix of a map between free modules ``R^cols -> R^rows``."""
        R = f.source.R
        d = R.dim
        cols_vec = f.mat[:, [c * d + R.unit for c in range(cols)]]
        return cls.from_columns(R, cols_vec, rows)

    def to_linear(self) -> np.ndarray:
        """k-matrix of shape ``(rows*d, cols*d)``."""
        R, F = self.R, self.R.field
        d = R.dim
        out = F.zeros(self.rows * d, self.cols * d)
        for i in range(self.rows):
            for j in range(self.cols):
                if np.any(self.entries[i, j]):
                    out[i * d:(i + 1) * d, j * d:(j + 1) * d] = R.mul_matrix(self.entries[i, j])
        return out

    def as_hom(self, source: FinModule | None = None, target: FinModule | None = None) -> ModuleHom:
        src = source if source is not None else free_module(self.R, self.cols)
        tgt = target if target is not None else free_module(self.R, self.rows)
        return ModuleHom(src, tgt, self.to_linear())

    def transpose(self) -> "FreeMatrix":
        return FreeMatrix(self.R, np.ascontiguousarray(np.transpose(self.entries, (1, 0, 2))))

    def is_minimal(self) -> bool:
        """All entries lie in the maximal ideal."""
        R = self.R
        return all(not R.is_unit(self.entries[i, j]) for i in range(self.rows) for j in range(self.cols))

    def act_on(self, M: FinModule) -> np.ndarray:
        """k-matrix of ``M^rows -> M^cols``, ``(m_i) -> (sum_i a_ij m_i)_j``.

        This is ``Hom(d, M)`` under ``Hom(R^n, M) = M^n``.
        """
        F = M.F
        n = M.dim
        out = F.zeros(self.cols * n, self.rows * n)
        for i in range(self.rows):
            for j in range(self.cols):
                if np.any(self.entries[i, j]):
                    out[j * n:(j + 1) * n, i * n:(i + 1) * n] = M.act(self.entries[i, j])
        return out

    def compose(self, other: "FreeMatrix") -> "FreeMatrix":
        """``self @ other`` as ring matrices."""
        R = self.R
        F = R.field
        ent = np.empty((self.rows, other.cols, R.dim), dtype=F.dtype)
        for i in range(self.rows):
            for j in range(other.cols):
                acc = R.zero()
                for k in range(self.cols):
                    if np.any(self.entries[i, k]) and np.any(other.entries[k, j]):
                        acc = F.add(acc, R.mul(self.entries[i, k], other.entries[k, j]))
                ent[i, j] = acc
        return FreeMatrix(R, ent)

    def format(self) -> list[list[str]]:
        return [[self.R.format_element(self.entries[i, j]) for j in range(self.cols)] for i in range(self.rows)]


# -- sub- and quotient modules ----------------------------------------------------


def submodule_action(R: LocalAlgebra, action: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Action on the span of ``basis`` (which must be R-stable)."""
    F = R.field
    left = F.left_inverse(basis)
    return _conj(F, left, action, basis)


def submodule(M: FinModule, basis: np.ndarray, label: str = "") -> tuple[FinModule, ModuleHom]:
    """Submodule spanned by independent columns ``basis``, with its inclusion."""
    S = FinModule(M.R, submodule_action(M.R, M.action, basis), label)
    return S, ModuleHom(S, M, basis)


def quotient(M: FinModule, sub: np.ndarray, label: str = "") -> tuple[FinModule, ModuleHom]:
    """``M / span(sub)`` with the projection; ``sub`` must span an R-submodule."""
    F = M.F
    sub = F.column_basis(sub) if sub.shape[1] else sub
    comp = F.complement(sub, M.dim)
    full = np.concatenate([sub, comp], axis=1)
    coords = F.inverse(full)[sub.shape[1]:, :]
    Q = FinModule(M.R, _conj(F, coords, M.action, comp), label)
    return Q, ModuleHom(M, Q, coords)


def submodule_generated(M: FinModule, vectors: np.ndarray) -> np.ndarray:
    """Basis of the R-submodule generated by the columns of ``vectors``."""
    F = M.F
    if vectors.shape[1] == 0:
        return F.zeros(M.dim, 0)
    blocks = [F.matmul(M.action[l], vectors) for l in range(M.R.dim)]
    return F.column_basis(np.concatenate(blocks, axis=1))


def kernel(f: ModuleHom) -> tuple[FinModule, ModuleHom]:
    return submodule(f.source, f.F.kernel(f.mat), "ker")


def image(f: ModuleHom) -> tuple[FinModule, ModuleHom]:
    return submodule(f.target, f.F.column_basis(f.mat), "im")


def cokernel(f: ModuleHom) -> tuple[FinModule, ModuleHom]:
    return quotient(f.target, f.mat, "coker")


def coker_of_free_matrix(d: FreeMatrix, label: str = "") -> FinModule:
    """``R^rows / image(d)``."""
    Fr = free_module(d.R, d.rows)
    if d.cols == 0:
        Fr.label = label or Fr.label
        return Fr
    Q, _ = quotient(Fr, d.to_linear(), label)
    return Q


def direct_sum(*mods: FinModule, label: str = "") -> tuple[FinModule, list[ModuleHom], list[ModuleHom]]:
    """Direct sum with inclusions and projections."""
    if not mods:
        raise ValueError("direct_sum needs at least one module")
    R = mods[0].R
    for M in mods:
        if not M.R.same_as(R):
            raise AlgebraMismatch("summands live over different algebras")
    F = R.field
    action = np.empty((R.dim, sum(M.dim for M in mods), sum(M.dim for M in mods)), dtype=F.dtype)
    for l in range(R.dim):
        action[l] = direct_sum_matrix(F, [M.action[l] for M in mods])
    S = FinModule(R, action, label or " + ".join(M.label or "?" for M in mods))
    if all(hasattr(M, "_free_rank") for M in mods):
        S._free_rank = sum(M._free_rank for M in mods)
    incs, projs = [], []
    off = 0
    for M in mods:
        inc = F.zeros(S.dim, M.dim)
        inc[off:off + M.dim, :] = F.eye(M.dim)
        incs.append(ModuleHom(M, S, inc))
        projs.append(ModuleHom(S, M, inc.T.copy()))
        off += M.dim
    return S, incs, projs


def hstack_maps(maps: list[ModuleHom], source: FinModule) -> ModuleHom:
    """``(f_1, ..., f_n): source = M_1 + ... + M_n -> N``."""
    return ModuleHom(source, maps[0].target, np.concatenate([f.mat for f in maps], axis=1))


def vstack_maps(maps: list[ModuleHom], target: FinModule) -> ModuleHom:
    """``(f_1; ...; f_n): M -> target = N_1 + ... + N_n``."""
    return ModuleHom(maps[0].source, target, np.concatenate([f.mat for f in maps], axis=0))


def pushout(f: ModuleHom, g: ModuleHom) -> tuple[FinModule, ModuleHom, ModuleHom]:
    """Pushout of ``B <-f- A -g-> C``: ``P = (B + C) / {(f a, -g a)}``."""
    F = f.F
    S, (iB, iC), _ = direct_sum(f.target, g.target)
    rel = np.concatenate([f.mat, F.reduce(-g.mat)], axis=0)
    P, proj = quotient(S, rel, "pushout")
    return P, proj @ iB, proj @ iC


def pullback(f: ModuleHom, g: ModuleHom) -> tuple[FinModule, ModuleHom, ModuleHom]:
    """Pullback of ``B -f-> D <-g- C``: ``P = {(b, c) : f b = g c}``."""
    F = f.F
    S, _, (pB, pC) = direct_sum(f.source, g.source)
    diff = np.concatenate([f.mat, F.reduce(-g.mat)], axis=1)
    P, inc = submodule(S, F.kernel(diff), "pullback")
    return P, pB @ inc, pC @ inc


def module_from_generator_actions(R: LocalAlgebra, mats: list[np.ndarray], label: str = "") -> FinModule:
    """Build a module from the matrices of the algebra generators."""
    F = R.field
    n = mats[0].shape[0] if mats else 0
    if len(mats) != R.gens.shape[1]:
        raise InvalidModule(f"expected {R.gens.shape[1]} action matrices, got {len(mats)}")
    # span R by words in the generators, tracking the matching operators
    elems = [R.one()]
    ops = [F.eye(n)]
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            for g, A in zip(R.gens.T, mats):
                e = R.mul(g, elems[idx])
                if F.in_span(np.stack(elems, axis=1), e):
                    continue
                elems.append(e)
                ops.append(F.matmul(A, ops[idx]))
                nxt.append(len(elems) - 1)
        frontier = nxt
    E = np.stack(elems, axis=1)
    if E.shape[1] != R.dim:
        raise InvalidModule("generators do not span the algebra")
    coeff = F.inverse(E)  # basis element e_l = sum_w coeff[w, l] word_w
    action = np.empty((R.dim, n, n), dtype=F.dtype)
    for l in range(R.dim):
        action[l] = _act(F, np.stack(ops), coeff[:, l])
    return FinModule(R, action, label).validate()


def cyclic_quotient(R: LocalAlgebra, ideal_gens: list[np.ndarray], label: str = "") -> FinModule:
    """``R / (ideal_gens)``."""
    d = FreeMatrix.from_elements(R, [list(ideal_gens)]) if ideal_gens else FreeMatrix(R, np.empty((1, 0, R.dim), dtype=R.field.dtype))
    return coker_of_free_matrix(d, label)


def ideal_module(R: LocalAlgebra, ideal_gens: list[np.ndarray], label: str = "") -> tuple[FinModule, ModuleHom]:
    """The ideal generated by ``ideal_gens`` as a submodule of ``R``."""
    Rm = free_module(R, 1, "R")
    basis = submodule_generated(Rm, np.stack(ideal_gens, axis=1))
    return submodule(Rm, basis, label)


def regular_module(R: LocalAlgebra) -> FinModule:
    return free_module(R, 1, "R")


def residue_field(R: LocalAlgebra) -> FinModule:
    return cyclic_quotient(R, list(R.gens.T), "k")


def is_free(M: FinModule) -> bool:
    return M.dim == M.nu * M.R.dim


def ensure_same_algebra(*mods: FinModule) -> None:
    R = mods[0].R
    for M in mods[1:]:
        if not M.R.same_as(R):
            raise AlgebraMismatch("modules live over different algebras")


# -- Hom spaces -------------------------------------------------------------------


class HomSpace:
    """``Hom_R(M, N)`` computed from the minimal presentation of ``M``.

    A homomorphism is recorded by the images ``(n_1, ..., n_nu)`` of the
    chosen generators of ``M``; these tuples form the subspace :attr:`basis`
    of ``N^nu``.  ``coords`` always refer to that basis.
    """

    def __init__(self, M: FinModule, N: FinModule):
        ensure_same_algebra(M, N)
        self.M, self.N = M, N
        F = self.F = M.F
        R = M.R
        nu, n, d = M.nu, N.dim, R.dim
        rel = M.relations
        system = F.zeros(rel.shape[1] * n, nu * n)
        for j in range(rel.shape[1]):
            for c in range(nu):
                r = rel[c * d:(c + 1) * d, j]
                if np.any(r):
                    system[j * n:(j + 1) * n, c * n:(c + 1) * n] = N.act(r)
        self.basis = F.kernel(system) if nu * n else F.zeros(0, 0)
        self.dim = self.basis.shape[1]

    def __repr__(self) -> str:
        return f"<HomSpace dim={self.dim}>"

    @cached_property
    def _left(self) -> np.ndarray:
        return self.F.left_inverse(self.basis)

    def images_to_matrix(self, images: np.ndarray) -> np.ndarray:
        """k-matrix of the map determined by generator images (flattened ``N^nu`` vector)."""
        F, M, N = self.F, self.M, self.N
        nu, n = M.nu, N.dim
        if nu == 0 or n == 0:
            return F.zeros(n, M.dim)
        blocks = []
        for c in range(nu):
            nc = images[c * n:(c + 1) * n]
            blocks.append(F.reduce(np.einsum("lij,j->il", N.action, nc)))
        phi_free = np.concatenate(blocks, axis=1)
        return F.matmul(phi_free, M.cover_section)

    def to_matrix(self, coords: np.ndarray) -> np.ndarray:
        return self.images_to_matrix(self.F.matmul(self.basis, coords.reshape(-1, 1))[:, 0])

    def to_hom(self, coords: np.ndarray) -> ModuleHom:
        return ModuleHom(self.M, self.N, self.to_matrix(coords))

    @cached_property
    def matrices(self) -> list[np.ndarray]:
        F = self.F
        eye = F.eye(self.dim)
        return [self.to_matrix(eye[:, i]) for i in range(self.dim)]

    def images_of(self, phi: np.ndarray) -> np.ndarray:
        """Generator images of a k-matrix ``phi: M -> N`` as a flat ``N^nu`` vector."""
        F = self.F
        if self.M.nu == 0:
            return F.zeros(0, 1)[:, 0]
        return F.matmul(phi, self.M.generators).T.reshape(-1)

    def from_matrix(self, phi: np.ndarray) -> np.ndarray:
        F = self.F
        if self.dim == 0:
            return F.zeros(0, 1)[:, 0]
        return F.matmul(self._left, self.images_of(phi).reshape(-1, 1))[:, 0]

    def from_matrices(self, phis: list[np.ndarray]) -> np.ndarray:
        """Coordinates of several maps, as columns."""
        F = self.F
        if not phis:
            return F.zeros(self.dim, 0)
        cols = np.stack([self.images_of(p) for p in phis], axis=1)
        return F.matmul(self._left, cols)

    @cached_property
    def module(self) -> FinModule:
        """``Hom_R(M, N)`` with ``(r.phi)(m) = r.phi(m)``."""
        F, R, N = self.F, self.M.R, self.N
        nu = self.M.nu
        action = np.empty((R.dim, self.dim, self.dim), dtype=F.dtype)
        eye = F.eye(nu)
        for l in range(R.dim):
            big = np.kron(eye, N.action[l]) if nu else F.zeros(0, 0)
            action[l] = F.matmul(F.matmul(self._left, big), self.basis)
        return FinModule(R, action, f"Hom({self.M.label},{self.N.label})")


def hom_space(M: FinModule, N: FinModule) -> HomSpace:
    return HomSpace(M, N)


def hom_cached(M: FinModule, N: FinModule) -> HomSpace:
    """Memoised on the source module, keyed by target identity."""
    return M.memo(("hom", id(N)), lambda: (N, HomSpace(M, N)))[1]


class Subquotient:
    """``Z / B`` for subspaces ``B <= Z`` of an ambient space with an optional action.

    ``coords(v)`` gives quotient coordinates of a vector of ``Z``; ``reps``
    are the chosen (lexicographically first) representatives of a basis.
    """

    def __init__(self, F: Field, Z: np.ndarray, Bsp: np.ndarray, action: np.ndarray | None = None,
                 R: LocalAlgebra | None = None):
        self.F = F
        self.Z = Z
        self._zleft = F.left_inverse(Z)
        bz = F.matmul(self._zleft, Bsp) if Bsp.shape[1] else F.zeros(Z.shape[1], 0)
        bz = F.column_basis(bz) if bz.shape[1] else bz
        comp = F.complement(bz, Z.shape[1])
        full = np.concatenate([bz, comp], axis=1)
        self._qcoords = F.inverse(full)[bz.shape[1]:, :] if full.shape[1] else F.zeros(0, 0)
        self._comp = comp
        self.dim = comp.shape[1]
        self.reps = F.matmul(Z, comp) if self.dim else F.zeros(Z.shape[0], 0)
        self.action = action
        self.R = R

    def coords(self, v: np.ndarray) -> np.ndarray:
        """Quotient coordinates of the columns of ``v`` (assumed inside ``Z``)."""
        F = self.F
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if self.dim == 0:
            return F.zeros(0, v.shape[1])
        return F.matmul(self._qcoords, F.matmul(self._zleft, v))

    @cached_property
    def module(self) -> FinModule:
        F, R = self.F, self.R
        act = np.empty((R.dim, self.dim, self.dim), dtype=F.dtype)
        for l in range(R.dim):
            act[l] = self.coords(F.matmul(self.action[l], self.reps)) if self.dim else F.zeros(0, 0)
        return FinModule(R, act)


def power_action(M: FinModule, n: int) -> np.ndarray:
    """Action on ``M^n``."""
    F, R = M.F, M.R
    out = np.empty((R.dim, n * M.dim, n * M.dim), dtype=F.dtype)
    eye = F.eye(n)
    for l in range(R.dim):
        out[l] = np.kron(eye, M.action[l]) if n else F.zeros(0, 0)
    return out
