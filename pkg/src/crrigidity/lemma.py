"""Divisibility of Hermitian sums Σ g_j f̄_j by |z|² = Σ z_i z̄_i.

Polynomials in (z, z̄) over ℂⁿ are stored as maps ``(I, J) -> c`` for the
monomial ``c z^I z̄^J``.  Multiplication by |z|² preserves the bidegree
grading, so division is solved one bidegree block at a time; the block
operator is injective and the quotient, when it exists, is unique.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionWindowViolated, FamilySizeMismatch, InternalInconsistency
from .tensors import check_hermitian, flat_tensor, orthonormal_frame

Index = tuple[int, ...]

MAX_DEGREE = 8


@dataclass(frozen=True)
class BidegreePoly:
    n: int
    coeffs: Mapping[tuple[Index, Index], complex]

    def __post_init__(self):
        clean: dict[tuple[Index, Index], complex] = {}
        for (I, J), c in self.coeffs.items():
            I, J = tuple(int(i) for i in I), tuple(int(j) for j in J)
            if len(I) != self.n or len(J) != self.n:
                raise ValueError(f"multi-index length mismatch for n={self.n}: {(I, J)}")
            if max(I + J, default=0) > MAX_DEGREE:
                raise ValueError(f"degree cap {MAX_DEGREE} exceeded by {(I, J)}")
            c = complex(c)
            if c != 0:
                clean[(I, J)] = clean.get((I, J), 0j) + c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, n: int) -> "BidegreePoly":
        return cls(n, {})

    @classmethod
    def holomorphic(cls, n: int, terms: Mapping[Index, complex]) -> "BidegreePoly":
        return cls(n, {(tuple(I), (0,) * n): c for I, c in terms.items()})

    @classmethod
    def norm_squared(cls, n: int) -> "BidegreePoly":
        e = np.eye(n, dtype=int)
        return cls(n, {(tuple(e[i]), tuple(e[i])): 1.0 for i in range(n)})

    def is_holomorphic(self) -> bool:
        return all(not any(J) for _, J in self.coeffs)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.coeffs.values())

    def max_abs(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def __add__(self, other: "BidegreePoly") -> "BidegreePoly":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0j) + c
        return BidegreePoly(self.n, out)

    def __sub__(self, other: "BidegreePoly") -> "BidegreePoly":
        return self + other.scale(-1.0)

    def scale(self, c: complex) -> "BidegreePoly":
        return BidegreePoly(self.n, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other: "BidegreePoly") -> "BidegreePoly":
        out: dict[tuple[Index, Index], complex] = {}
        for (I1, J1), c1 in self.coeffs.items():
            for (I2, J2), c2 in other.coeffs.items():
                key = (tuple(a + b for a, b in zip(I1, I2)), tuple(a + b for a, b in zip(J1, J2)))
                out[key] = out.get(key, 0j) + c1 * c2
        return BidegreePoly(self.n, out)

    def conj(self) -> "BidegreePoly":
        return BidegreePoly(self.n, {(J, I): c.conjugate() for (I, J), c in self.coeffs.items()})

    def __call__(self, z) -> complex:
        z = np.asarray(z, dtype=complex)
        zc = np.conj(z)
        total = 0j
        for (I, J), c in self.coeffs.items():
            total += c * np.prod(z**np.array(I)) * np.prod(zc**np.array(J))
        return complex(total)

    def to_terms(self) -> list:
        return [[list(I), list(J), c.real, c.imag] for (I, J), c in self.coeffs.items()]


def _monomials(n: int, degree: int) -> list[Index]:
    out = []
    for combo in combinations_with_replacement(range(n), degree):
        idx = [0] * n
        for i in combo:
            idx[i] += 1
        out.append(tuple(idx))
    return sorted(out)


def _check_family(family: Sequence[BidegreePoly], name: str) -> None:
    for j, f in enumerate(family):
        if not f.is_holomorphic():
            raise ValueError(f"{name}[{j}] depends on z̄")
        zero = ((0,) * f.n, (0,) * f.n)
        if f.coeffs.get(zero, 0) != 0:
            raise ValueError(f"{name}[{j}] does not vanish at the origin")


def hermitian_sum(gs: Sequence[BidegreePoly], fs: Sequence[BidegreePoly]) -> BidegreePoly:
    """Σ_j g_j(z) conj(f_j(z)), coefficient exact."""
    if len(gs) != len(fs):
        raise FamilySizeMismatch(f"{len(gs)} g's against {len(fs)} f's")
    ns = {p.n for p in (*gs, *fs)}
    if len(ns) > 1:
        raise FamilySizeMismatch(f"mixed variable counts {sorted(ns)}")
    n = ns.pop() if ns else 1
    total = BidegreePoly.zero(n)
    for g, f in zip(gs, fs):
        total = total + g * f.conj()
    return total


# exact linear algebra ----------------------------------------------------


def _solve_exact(matrix: list[list[int]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve an overdetermined integer system exactly; None if inconsistent."""
    rows = [[Fraction(v) for v in row] + [b] for row, b in zip(matrix, rhs)]
    n_cols = len(matrix[0]) if matrix else 0
    pivots = []
    r = 0
    for col in range(n_cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][col]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    sol = [Fraction(0)] * n_cols
    for i, col in enumerate(pivots):
        sol[col] = rows[i][-1]
    return sol


def divide_by_norm(P: BidegreePoly, exact: bool = False, tol: float = 1e-10) -> BidegreePoly | None:
    """Return A with P = |z|²·A, or None when P is not divisible.

    ``exact=True`` solves each block over the rationals (float inputs are
    converted exactly), which is the safe mode for Gaussian-integer data.
    """
    n = P.n
    blocks: dict[tuple[int, int], dict[tuple[Index, Index], complex]] = {}
    for (I, J), c in P.coeffs.items():
        blocks.setdefault((sum(I), sum(J)), {})[(I, J)] = c
    scale = max(1.0, P.max_abs())
    quotient: dict[tuple[Index, Index], complex] = {}
    for (p, q), block in blocks.items():
        if p == 0 or q == 0:
            return None
        unknowns = [(I, J) for I in _monomials(n, p - 1) for J in _monomials(n, q - 1)]
        rows = [(I, J) for I in _monomials(n, p) for J in _monomials(n, q)]
        row_of = {key: r for r, key in enumerate(rows)}
        mat = np.zeros((len(rows), len(unknowns)), dtype=int)
        for col, (I, J) in enumerate(unknowns):
            for i in range(n):
                I2 = I[:i] + (I[i] + 1,) + I[i + 1 :]
                J2 = J[:i] + (J[i] + 1,) + J[i + 1 :]
                mat[row_of[(I2, J2)], col] += 1
        target = np.zeros(len(rows), dtype=complex)
        for key, c in block.items():
            target[row_of[key]] = c
        if exact:
            sol_re = _solve_exact(mat.tolist(), [Fraction(v) for v in target.real])
            sol_im = _solve_exact(mat.tolist(), [Fraction(v) for v in target.imag])
            if sol_re is None or sol_im is None:
                return None
            sol = np.array([complex(float(a), float(b)) for a, b in zip(sol_re, sol_im)])
        else:
            sol, *_ = np.linalg.lstsq(mat.astype(float), target, rcond=None)
            if np.abs(mat @ sol - target).max(initial=0.0) > tol * scale:
                return None
        snap = 0.0 if exact else tol * scale
        for key, c in zip(unknowns, sol):
            if abs(c) > snap:
                quotient[key] = c
    return BidegreePoly(n, quotient)


# verdicts ------------------------------------------------------------------


class LemmaVerdict(str, enum.Enum):
    ZERO_FORCED = "ZeroForced"
    SHARPNESS_WITNESS = "SharpnessWitness"
    NOT_DIVISIBLE = "NotDivisible"
    INCONSISTENT = "Inconsistent"


@dataclass(frozen=True)
class LemmaOutcome:
    verdict: LemmaVerdict
    quotient: BidegreePoly | None
    n: int
    k: int

    @property
    def lemma_applies(self) -> bool:
        return self.k <= self.n - 1


def lemma_verdict(
    gs: Sequence[BidegreePoly],
    fs: Sequence[BidegreePoly],
    exact: bool = False,
    tol: float = 1e-10,
) -> LemmaOutcome:
    _check_family(gs, "g")
    _check_family(fs, "f")
    P = hermitian_sum(gs, fs)
    n, k = P.n, len(gs)
    A = divide_by_norm(P, exact=exact, tol=tol)
    if A is None:
        return LemmaOutcome(LemmaVerdict.NOT_DIVISIBLE, None, n, k)
    zero_tol = 0.0 if exact else tol * max(1.0, P.max_abs())
    if k <= n - 1:
        if A.is_zero(zero_tol) and P.is_zero(zero_tol):
            return LemmaOutcome(LemmaVerdict.ZERO_FORCED, A, n, k)
        return LemmaOutcome(LemmaVerdict.INCONSISTENT, A, n, k)
    if A.is_zero(zero_tol):
        return LemmaOutcome(LemmaVerdict.ZERO_FORCED, A, n, k)
    return LemmaOutcome(LemmaVerdict.SHARPNESS_WITNESS, A, n, k)


def _quadratic(n: int, sym) -> BidegreePoly:
    terms: dict[Index, complex] = {}
    for a in range(n):
        for b in range(n):
            idx = [0] * n
            idx[a] += 1
            idx[b] += 1
            terms[tuple(idx)] = terms.get(tuple(idx), 0j) + sym[a, b]
    return BidegreePoly.holomorphic(n, terms)


def _flat_quartic(witnesses, g) -> BidegreePoly:
    n = len(g)
    t = sum((flat_tensor(*w, g).components for w in witnesses), np.zeros((n,) * 4, dtype=complex))
    e = np.eye(n, dtype=int)
    out: dict[tuple[Index, Index], complex] = {}
    for a in range(n):
        for b in range(n):
            for m in range(n):
                for v in range(n):
                    key = (tuple(e[a] + e[m]), tuple(e[b] + e[v]))
                    out[key] = out.get(key, 0j) + t[a, b, m, v]
    return BidegreePoly(n, out)


def tensor_lemma_check(G, A, B, g=None, witnesses=None, exact: bool = False, tol: float = 1e-10) -> bool:
    """Whether Σ G_{ab̄} A^a(X,X) conj(B^b(X,X)) vanishes identically.

    ``A`` and ``B`` have shape ``(N - n, n, n)`` and are symmetric in the
    last two indices.  The quartic is reduced to the divisibility problem
    for the families g_a = A^a(X, X), h_a = Σ_b conj(G_{ab̄}) B^b(X, X)
    after a linear change of variables turning |X|²_g into the standard
    norm.  When ``witnesses`` (tuples of four matrices) are supplied they
    must reproduce the quartic as a flat right-hand side.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    codim, n, _ = A.shape
    if B.shape != A.shape:
        raise FamilySizeMismatch(f"A has shape {A.shape}, B has {B.shape}")
    if codim > n - 1:
        raise DimensionWindowViolated(f"N - n = {codim} exceeds n - 1 = {n - 1}")
    G = check_hermitian(G, name="G")
    if G.shape != (codim, codim):
        raise FamilySizeMismatch(f"G must be {codim}x{codim}")
    for arr, name in ((A, "A"), (B, "B")):
        if np.abs(arr - arr.transpose(0, 2, 1)).max(initial=0.0) > 1e-12 * max(1.0, np.abs(arr).max(initial=0.0)):
            raise ValueError(f"{name} must be symmetric in its lower indices")
    g = np.eye(n, dtype=complex) if g is None else check_hermitian(g, name="g")

    gs = [_quadratic(n, A[a]) for a in range(codim)]
    hs = [_quadratic(n, sum(np.conj(G[a, b]) * B[b] for b in range(codim))) for a in range(codim)]
    if witnesses is not None:
        lhs = hermitian_sum(gs, hs)
        if not (lhs - _flat_quartic(witnesses, g)).is_zero(tol * max(1.0, lhs.max_abs())):
            raise ValueError("witnesses do not reproduce the quartic")

    # X = M Y with |X|_g = |Y|; quadratic forms transform as M^T A M
    M = orthonormal_frame(g)
    gs_y = [_quadratic(n, M.T @ A[a] @ M) for a in range(codim)]
    hs_y = [_quadratic(n, M.T @ sum(np.conj(G[a, b]) * B[b] for b in range(codim)) @ M) for a in range(codim)]
    outcome = lemma_verdict(gs_y, hs_y, exact=exact, tol=tol)
    if outcome.verdict is LemmaVerdict.INCONSISTENT:
        raise InternalInconsistency("divisible quartic with nonzero quotient below the lemma's dimension bound")
    return outcome.verdict is LemmaVerdict.ZERO_FORCED
