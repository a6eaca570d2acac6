"""Matrix realizations of the preset groups over Q and over finite fields.

Each preset is realized in its natural representation with basis vectors of
weights ``lambda_i`` (coordinates in the character lattice basis).  The Borel
subgroup is the upper triangular part.  Root vectors are found by solving the
defining linear conditions of the Lie algebra on the matrix entries of the
right weight, so nothing about Chevalley bases is hard-coded.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exactcore import nullspace
from .fq import FqField, field as get_field
from .rootsys import RootSystem, WeylGroup, load, reflection_matrix

Matrix = List[List[Fraction]]


class UnsupportedPreset(ValueError):
    pass


class TooLarge(RuntimeError):
    pass


def _antidiag(signs):
    n = len(signs)
    return [[Fraction(signs[i]) if j == n - 1 - i else Fraction(0) for j in range(n)] for i in range(n)]


# natural representation data: weights in lattice coordinates and an optional
# invariant bilinear form J (the Lie algebra is {X : X^T J + J X = 0})
_DATA = {
    "SL2": dict(weights=[(1,), (-1,)], form=None, order=lambda q: q * (q * q - 1)),
    "GL2": dict(weights=[(1, 0), (0, 1)], form=None, order=lambda q: q * (q - 1) * (q * q - 1)),
    "Sp4": dict(weights=[(1, 0), (0, 1), (0, -1), (-1, 0)], form=_antidiag([1, 1, -1, -1]),
                order=lambda q: q ** 4 * (q * q - 1) * (q ** 4 - 1)),
    "SO5": dict(weights=[(1, 0), (0, 1), (0, 0), (0, -1), (-1, 0)], form=_antidiag([1] * 5),
                order=lambda q: q ** 4 * (q * q - 1) * (q ** 4 - 1)),
    "SL2xSL2": dict(weights=[(1, 0), (-1, 0), (0, 1), (0, -1)], form=None,
                    order=lambda q: (q * (q * q - 1)) ** 2),
}


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _bracket(a, b):
    ab, ba = _matmul(a, b), _matmul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


@dataclass
class Realization:
    name: str
    rs: RootSystem
    W: WeylGroup
    n: int
    weights: List[Tuple[int, ...]]
    form: Optional[Matrix]
    root_vectors: Dict[int, Matrix]
    order_fn: object

    def order(self, q: int) -> int:
        return self.order_fn(q)

    def root_lattice_coords(self, i: int) -> Tuple[int, ...]:
        return tuple(self.rs.lattice_coords(self.rs.roots[i]))

    def torus_lie_basis(self) -> List[Matrix]:
        """diag(lambda_ij) for each lattice coordinate j: a basis of t."""
        r = len(self.weights[0])
        return [[[Fraction(self.weights[i][j]) if i == k else Fraction(0) for k in range(self.n)]
                 for i in range(self.n)] for j in range(r)]

    def in_lie_algebra(self, X: Matrix) -> bool:
        if self.form is None:
            if self.name == "GL2":
                return True
            if self.name == "SL2xSL2":
                blocks = {0: 0, 1: 0, 2: 1, 3: 1}
                if any(X[i][j] != 0 for i in range(4) for j in range(4) if blocks[i] != blocks[j]):
                    return False
                return X[0][0] + X[1][1] == 0 and X[2][2] + X[3][3] == 0
            return sum(X[i][i] for i in range(self.n)) == 0
        J = self.form
        XtJ = _matmul([list(r) for r in zip(*X)], J)
        JX = _matmul(J, X)
        return all(a + b == 0 for r, s in zip(XtJ, JX) for a, b in zip(r, s))


def _form_equations(J, positions, n):
    """Rows of the linear system X^T J + J X = 0 restricted to ``positions``."""
    rows = []
    for a in range(n):
        for b in range(n):
            row = []
            for (i, j) in positions:
                # X_{ij} contributes J_{ib} to (X^T J)_{jb} and J_{ai} to (J X)_{aj}
                c = Fraction(0)
                if j == a:
                    c += J[i][b]
                if j == b:
                    c += J[a][i]
                row.append(c)
            if any(row):
                rows.append(row)
    return rows


def _root_vector(rs, weights, form, n, alpha_coords):
    positions = [(i, j) for i in range(n) for j in range(n)
                 if i != j and tuple(x - y for x, y in zip(weights[i], weights[j])) == alpha_coords]
    if not positions:
        raise UnsupportedPreset(f"no matrix entries of weight {alpha_coords}")
    if form is None:
        sols = [[Fraction(int(k == m)) for m in range(len(positions))] for k in range(len(positions))]
    else:
        sols = nullspace(_form_equations(form, positions, n), len(positions))
    if len(sols) != 1:
        raise UnsupportedPreset(f"root space of weight {alpha_coords} has dimension {len(sols)}")
    v = sols[0]
    lead = next(x for x in v if x != 0)
    v = [x / lead for x in v]
    M = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), x in zip(positions, v):
        M[i][j] = x
    return M


@lru_cache(maxsize=None)
def realization(name: str) -> Realization:
    if name not in _DATA:
        raise UnsupportedPreset(f"no matrix realization for {name!r}")
    d = _DATA[name]
    rs, W, _ = load(name)
    weights = [tuple(w) for w in d["weights"]]
    n = len(weights)
    vectors: Dict[int, Matrix] = {}
    for i in rs.positive:
        coords = tuple(rs.lattice_coords(rs.roots[i]))
        E = _root_vector(rs, weights, d["form"], n, coords)
        if any(E[a][b] != 0 for a in range(n) for b in range(a + 1)):
            raise UnsupportedPreset(f"positive root {rs.roots[i]} is not upper triangular")
        F = _root_vector(rs, weights, d["form"], n, tuple(-c for c in coords))
        H = _bracket(E, F)
        HE = _bracket(H, E)
        a, b = next((a, b) for a in range(n) for b in range(n) if E[a][b] != 0)
        c = HE[a][b] / E[a][b]
        F = [[x * 2 / c for x in r] for r in F]
        vectors[i] = E
        vectors[rs.neg(i)] = F
    R = Realization(name, rs, W, n, weights, d["form"], vectors, d["order"])
    for M in vectors.values():
        assert R.in_lie_algebra(M)
    return R


# ---------------------------------------------------------------------------
# finite field level


class FqRealization:
    """A preset over ``F_q``: root elements, torus, Weyl representatives."""

    def __init__(self, R: Realization, F: FqField):
        if F.p == 2:
            raise UnsupportedPreset("characteristic 2 is not supported")
        self.R, self.F, self.n = R, F, R.n
        self.rs = R.rs
        self.E = {i: F.rational_matrix(M) for i, M in R.root_vectors.items()}
        half = F.inv(2)
        self.E2h = {i: F.scal(half, F.matmul(M, M)) for i, M in self.E.items()}
        self.rank = len(R.weights[0])
        self.lam = np.array(R.weights, dtype=np.int64)
        self._sdot: Dict[int, np.ndarray] = {}

    @property
    def q(self):
        return self.F.q

    def x(self, i: int, t) -> np.ndarray:
        """Root elements ``x_alpha(t) = 1 + tE + t^2 E^2/2``; ``t`` scalar or array."""
        F = self.F
        t = np.asarray(t, dtype=np.int64)
        t2 = F.vmul(t, t)
        I = np.eye(self.n, dtype=np.int64)
        tE = F.vmul(t[..., None, None], self.E[i])
        t2E = F.vmul(t2[..., None, None], self.E2h[i])
        return F.vadd(F.vadd(np.broadcast_to(I, tE.shape), tE), t2E)

    def sdot(self, i: int) -> np.ndarray:
        if i not in self._sdot:
            F = self.F
            a = self.x(i, 1)
            b = self.x(self.rs.neg(i), F.neg(1))
            self._sdot[i] = F.matmul(F.matmul(a, b), a)
        return self._sdot[i]

    def torus(self, params: Sequence[int]) -> np.ndarray:
        """diag(prod_j t_j^{lambda_ij}) for ``t_j`` in F_q^x."""
        F = self.F
        d = []
        for row in self.lam:
            v = 1
            for tj, e in zip(params, row):
                v = F.mul(v, F.pow(int(tj), int(e)))
            d.append(v)
        return np.diag(np.array(d, dtype=np.int64))

    def torus_generators(self) -> List[np.ndarray]:
        g = self.F.generator
        return [self.torus([g if j == k else 1 for j in range(self.rank)]) for k in range(self.rank)]

    def torus_elements(self):
        """All of T^F together with their parameter vectors."""
        import itertools
        params = list(itertools.product(self.F.units, repeat=self.rank))
        return params, np.array([self.torus(p) for p in params], dtype=np.int64)

    def root_value(self, i: int, params: Sequence[int]) -> int:
        F = self.F
        v = 1
        for tj, e in zip(params, self.R.root_lattice_coords(i)):
            v = F.mul(v, F.pow(int(tj), int(e)))
        return v

    # products of root subgroups ------------------------------------------
    def unipotent_product(self, roots: Sequence[int]):
        """All ordered products ``prod x_{alpha_k}(t_k)`` with parameters."""
        F, q = self.F, self.q
        mats = np.eye(self.n, dtype=np.int64)[None]
        params = np.zeros((1, 0), dtype=np.int64)
        ts = np.arange(q, dtype=np.int64)
        for i in roots:
            X = self.x(i, ts)  # (q, n, n)
            mats = F.matmul(mats[:, None], X[None]).reshape(-1, self.n, self.n)
            params = np.concatenate([np.repeat(params, q, axis=0),
                                     np.tile(ts, len(params))[:, None]], axis=1)
        return params, mats

    def element_from_params(self, roots: Sequence[int], params: Sequence[int]) -> np.ndarray:
        M = np.eye(self.n, dtype=np.int64)
        for i, t in zip(roots, params):
            M = self.F.matmul(M, self.x(i, int(t)))
        return M

    # Weyl group ----------------------------------------------------------
    def weyl_reps(self, simple: Sequence[int]) -> List[Tuple[Tuple[int, ...], np.ndarray, Tuple[int, ...]]]:
        """Elements of the reflection group generated by ``simple`` as
        (root permutation, representative matrix, word), words reduced."""
        rs = self.rs
        refl = {}
        for s in simple:
            m = reflection_matrix(rs.roots[s])
            refl[s] = tuple(rs.index(tuple(sum(m[a][b] * r[b] for b in range(rs.ambient))
                                           for a in range(rs.ambient))) for r in rs.roots)
        ident = tuple(range(rs.n_roots))
        out = [(ident, np.eye(self.n, dtype=np.int64), ())]
        seen = {ident}
        queue = deque(out)
        while queue:
            perm, M, word = queue.popleft()
            for s in simple:
                newperm = tuple(perm[refl[s][k]] for k in range(rs.n_roots))
                if newperm not in seen:
                    seen.add(newperm)
                    item = (newperm, self.F.matmul(M, self.sdot(s)), word + (s,))
                    out.append(item)
                    queue.append(item)
        return out

    def bruhat_coset_reps(self, positive: Sequence[int], simple: Sequence[int]) -> np.ndarray:
        """Representatives ``u w`` of ``L/B_L`` for the subsystem with the
        given positive and simple roots; ``u`` runs over ``U_w``."""
        pos = list(positive)
        reps = []
        for perm, M, _ in self.weyl_reps(simple):
            # perm encodes w acting on roots: w(alpha_k) = alpha_{perm[k]}
            inv = {perm[k]: k for k in range(len(perm))}
            posset = set(self.rs.positive)
            roots = [a for a in pos if inv[a] not in posset]
            _, U = self.unipotent_product(roots)
            reps.append(self.F.matmul(U, M[None]))
        return np.concatenate(reps, axis=0)

    def borel_elements(self, positive: Optional[Sequence[int]] = None) -> np.ndarray:
        pos = list(self.rs.positive if positive is None else positive)
        _, T = self.torus_elements()
        _, U = self.unipotent_product(pos)
        return self.F.matmul(T[:, None], U[None]).reshape(-1, self.n, self.n)


@lru_cache(maxsize=None)
def over(name: str, q: int) -> FqRealization:
    return FqRealization(realization(name), get_field(q))


# ---------------------------------------------------------------------------
# batch helpers


def is_upper(M: np.ndarray) -> np.ndarray:
    n = M.shape[-1]
    low = np.tril(np.ones((n, n), dtype=bool), -1)
    return ~np.any(M[..., low] != 0, axis=-1)


def is_unitriangular(M: np.ndarray) -> np.ndarray:
    n = M.shape[-1]
    diag = np.all(M[..., np.arange(n), np.arange(n)] == 1, axis=-1)
    return is_upper(M) & diag


def upper_keys(M: np.ndarray, q: int) -> np.ndarray:
    """Pack the strictly upper entries base ``q`` into one integer."""
    n = M.shape[-1]
    iu = np.triu_indices(n, 1)
    flat = M[..., iu[0], iu[1]]
    w = q ** np.arange(flat.shape[-1], dtype=np.int64)
    return flat @ w


def flag_canonical(F: FqField, M: np.ndarray) -> np.ndarray:
    """Canonical representative of ``M B_GL`` (right multiplication by upper
    triangular matrices): column-reduced echelon form, batched."""
    M = np.array(M, dtype=np.int64, copy=True)
    single = M.ndim == 2
    if single:
        M = M[None]
    N, n, _ = M.shape
    idx = np.arange(N)
    pivots = []
    for j in range(n):
        col = M[:, :, j]
        for (pj, r) in pivots:
            c = col[idx, r]  # entry in the earlier pivot row
            M[:, :, j] = F.matsub(M[:, :, j], F.vmul(c[:, None], M[:, :, pj]))
            col = M[:, :, j]
        nz = col != 0
        # pivot is the lowest nonzero row
        r = n - 1 - np.argmax(nz[:, ::-1], axis=1)
        lead = col[idx, r]
        if np.any(lead == 0):
            raise ZeroDivisionError("singular matrix in flag canonicalization")
        M[:, :, j] = F.vmul(F.inv_t[lead][:, None], col)
        pivots.append((j, r))
    return M[0] if single else M


def flag_keys(F: FqField, M: np.ndarray) -> List[bytes]:
    C = flag_canonical(F, M)
    if C.ndim == 2:
        C = C[None]
    return [c.tobytes() for c in C]
