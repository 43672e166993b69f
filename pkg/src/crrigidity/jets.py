"""Wirtinger jets of real-analytic polynomial data in (w, w̄).

A :class:`BidegreeJet` stores the mixed partials

    D[a, b] = ∂^{a+b} F / ∂w^a ∂w̄^b ,   0 <= a <= Jw, 0 <= b <= Jw̄

of a function at a base point.  Arithmetic on jets is the truncated
Leibniz / Faà di Bruno calculus, carried out on Taylor coefficients
``T[a, b] = D[a, b] / (a! b!)`` where products become 2-D convolutions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Mapping

import numpy as np

from .errors import DivisionNearZero, LogNonPositive, RealityViolation

MAX_ORDER = 8
DEFAULT_ORDER = (3, 3)
VALUE_FLOOR = 1e-12


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def _factorial_grid(shape: tuple[int, int]) -> np.ndarray:
    fa = np.array([factorial(a) for a in range(shape[0])], dtype=float)
    fb = np.array([factorial(b) for b in range(shape[1])], dtype=float)
    return np.outer(fa, fb)


@dataclass(frozen=True)
class HermitianDefiningFunction:
    """Real polynomial ``q(w, w̄) = Σ c_ab w^a w̄^b`` with ``c_ab = conj(c_ba)``."""

    coeffs: Mapping[tuple[int, int], complex]
    reality_tol: float = 1e-12

    def __post_init__(self):
        clean = {}
        for (a, b), c in self.coeffs.items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent in {(a, b)}")
            c = complex(c)
            if c != 0:
                clean[(int(a), int(b))] = clean.get((int(a), int(b)), 0j) + c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))
        scale = max([abs(c) for c in clean.values()], default=1.0)
        for (a, b), c in clean.items():
            partner = clean.get((b, a), 0j)
            if abs(c - partner.conjugate()) > self.reality_tol * max(1.0, scale):
                raise RealityViolation((a, b))

    @classmethod
    def from_terms(cls, terms) -> "HermitianDefiningFunction":
        """Build from ``[a, b, re, im]`` rows (the problem-file layout)."""
        coeffs: dict[tuple[int, int], complex] = {}
        for a, b, re, im in terms:
            key = (int(a), int(b))
            coeffs[key] = coeffs.get(key, 0j) + complex(re, im)
        return cls(coeffs)

    @classmethod
    def radial(cls, radial_coeffs: Mapping[int, float]) -> "HermitianDefiningFunction":
        """``q = Σ c_j |w|^{2j}``; e.g. ``{0: -1, 1: 1, 2: eps}``."""
        return cls({(j, j): complex(c) for j, c in radial_coeffs.items()})

    @property
    def degree(self) -> tuple[int, int]:
        if not self.coeffs:
            return (0, 0)
        return (max(a for a, _ in self.coeffs), max(b for _, b in self.coeffs))

    def __call__(self, w: complex) -> float:
        w = complex(w)
        wb = w.conjugate()
        total = sum(c * w**a * wb**b for (a, b), c in self.coeffs.items())
        return complex(total).real

    def to_terms(self) -> list[list[float]]:
        return [[a, b, c.real, c.imag] for (a, b), c in self.coeffs.items()]


@dataclass(frozen=True)
class BidegreeJet:
    """Mixed Wirtinger partials of a function at ``basepoint`` up to ``order``."""

    partials: np.ndarray
    basepoint: complex = 0j
    floor: float = field(default=VALUE_FLOOR, compare=False)

    def __post_init__(self):
        arr = np.array(self.partials, dtype=complex)
        if arr.ndim != 2:
            raise ValueError("jet partials must be a 2-D array")
        arr.setflags(write=False)
        object.__setattr__(self, "partials", arr)
        object.__setattr__(self, "basepoint", complex(self.basepoint))

    # construction -----------------------------------------------------------
    @classmethod
    def from_taylor(cls, taylor, basepoint=0j, floor=VALUE_FLOOR) -> "BidegreeJet":
        taylor = np.asarray(taylor, dtype=complex)
        return cls(taylor * _factorial_grid(taylor.shape), basepoint, floor)

    @classmethod
    def constant(cls, value, order=DEFAULT_ORDER, basepoint=0j) -> "BidegreeJet":
        d = np.zeros((order[0] + 1, order[1] + 1), dtype=complex)
        d[0, 0] = value
        return cls(d, basepoint)

    @classmethod
    def coordinate(cls, w: complex, order=DEFAULT_ORDER, conjugate=False) -> "BidegreeJet":
        """Jet of the function ``w`` (or ``w̄``) at ``w``."""
        w = complex(w)
        d = np.zeros((order[0] + 1, order[1] + 1), dtype=complex)
        if conjugate:
            d[0, 0] = w.conjugate()
            if order[1] >= 1:
                d[0, 1] = 1.0
        else:
            d[0, 0] = w
            if order[0] >= 1:
                d[1, 0] = 1.0
        return cls(d, w)

    # accessors --------------------------------------------------------------
    @property
    def order(self) -> tuple[int, int]:
        return (self.partials.shape[0] - 1, self.partials.shape[1] - 1)

    @property
    def value(self) -> complex:
        return complex(self.partials[0, 0])

    def __getitem__(self, ab) -> complex:
        return complex(self.partials[ab])

    def taylor(self) -> np.ndarray:
        return self.partials / _factorial_grid(self.partials.shape)

    def truncate(self, order) -> "BidegreeJet":
        if order[0] > self.order[0] or order[1] > self.order[1]:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        return BidegreeJet(self.partials[: order[0] + 1, : order[1] + 1], self.basepoint, self.floor)

    def _common(self, other) -> tuple[np.ndarray, np.ndarray, tuple[int, int]]:
        if not isinstance(other, BidegreeJet):
            other = BidegreeJet.constant(other, self.order, self.basepoint)
        order = (min(self.order[0], other.order[0]), min(self.order[1], other.order[1]))
        return self.truncate(order).taylor(), other.truncate(order).taylor(), order

    # arithmetic -------------------------------------------------------------
    def __add__(self, other) -> "BidegreeJet":
        a, b, _ = self._common(other)
        return BidegreeJet.from_taylor(a + b, self.basepoint, self.floor)

    __radd__ = __add__

    def __neg__(self) -> "BidegreeJet":
        return BidegreeJet(-self.partials, self.basepoint, self.floor)

    def __sub__(self, other) -> "BidegreeJet":
        return self + (-other if isinstance(other, BidegreeJet) else -complex(other))

    def __rsub__(self, other) -> "BidegreeJet":
        return (-self) + other

    def __mul__(self, other) -> "BidegreeJet":
        if not isinstance(other, BidegreeJet):
            return BidegreeJet(self.partials * complex(other), self.basepoint, self.floor)
        a, b, _ = self._common(other)
        return BidegreeJet.from_taylor(_convolve(a, b), self.basepoint, self.floor)

    __rmul__ = __mul__

    def reciprocal(self) -> "BidegreeJet":
        t = self.taylor()
        f0 = t[0, 0]
        if abs(f0) < self.floor:
            raise DivisionNearZero(f"jet value {f0!r} below floor {self.floor}")
        u = t / f0
        u[0, 0] = 0.0
        # 1/(1+u) = Σ (-u)^k; u has no constant term so the series is finite
        out = _series(u, [(-1.0) ** k for k in range(sum(t.shape))])
        return BidegreeJet.from_taylor(out / f0, self.basepoint, self.floor)

    def __truediv__(self, other) -> "BidegreeJet":
        if not isinstance(other, BidegreeJet):
            other = complex(other)
            if abs(other) < self.floor:
                raise DivisionNearZero(f"divisor {other!r} below floor {self.floor}")
            return BidegreeJet(self.partials / other, self.basepoint, self.floor)
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "BidegreeJet":
        return self.reciprocal() * complex(other)

    def log(self) -> "BidegreeJet":
        """Principal logarithm of a jet whose value is real and positive."""
        t = self.taylor()
        f0 = t[0, 0]
        if not (f0.real > self.floor and abs(f0.imag) <= 1e-12 * max(1.0, abs(f0.real))):
            raise LogNonPositive(f"jet value {f0!r} is not a positive real above {self.floor}")
        u = t / f0
        u[0, 0] = 0.0
        n_terms = sum(t.shape)
        out = _series(u, [0.0] + [(-1.0) ** (k + 1) / k for k in range(1, n_terms)])
        out[0, 0] = np.log(f0.real)
        return BidegreeJet.from_taylor(out, self.basepoint, self.floor)

    def derive_w(self) -> "BidegreeJet":
        if self.order[0] < 1:
            raise ValueError("no w-derivative left in this jet")
        return BidegreeJet(self.partials[1:, :], self.basepoint, self.floor)

    def derive_wbar(self) -> "BidegreeJet":
        if self.order[1] < 1:
            raise ValueError("no w̄-derivative left in this jet")
        return BidegreeJet(self.partials[:, 1:], self.basepoint, self.floor)

    def conj(self) -> "BidegreeJet":
        """Jet of the conjugate function (swaps the roles of w and w̄)."""
        return BidegreeJet(np.conj(self.partials.T), self.basepoint, self.floor)


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ra, rb = a.shape
    out = np.zeros_like(a)
    for i in range(ra):
        for j in range(rb):
            if a[i, j] != 0:
                out[i:, j:] += a[i, j] * b[: ra - i, : rb - j]
    return out


def _series(u: np.ndarray, coeffs) -> np.ndarray:
    """Σ_k coeffs[k] u^k, truncated to the shape of ``u``."""
    out = np.zeros_like(u)
    power = np.zeros_like(u)
    power[0, 0] = 1.0
    for c in coeffs:
        if c != 0:
            out = out + c * power
        power = _convolve(power, u)
    return out


def eval_jet(q: HermitianDefiningFunction, w: complex, order=DEFAULT_ORDER) -> BidegreeJet:
    """Exact partials of the polynomial ``q`` at ``w`` up to ``order``."""
    jw, jb = order
    if not (0 <= jw <= MAX_ORDER and 0 <= jb <= MAX_ORDER):
        raise ValueError(f"jet order {order} outside [0, {MAX_ORDER}]")
    w = complex(w)
    wb = w.conjugate()
    d = np.zeros((jw + 1, jb + 1), dtype=complex)
    for (a, b), c in q.coeffs.items():
        for i in range(min(a, jw) + 1):
            fa = _falling(a, i) * (w ** (a - i) if a > i else 1.0)
            for j in range(min(b, jb) + 1):
                fb = _falling(b, j) * (wb ** (b - j) if b > j else 1.0)
                d[i, j] += c * fa * fb
    return BidegreeJet(d, w)


# finite-difference oracle -------------------------------------------------

_CENTRAL = {
    0: {0: 1.0},
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
    4: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
}


def _xy_expansion(a: int, b: int) -> dict[tuple[int, int], complex]:
    """Coefficients of ∂x^j ∂y^k in (∂x - i∂y)^a (∂x + i∂y)^b / 2^(a+b)."""
    poly = {(0, 0): 1.0 + 0j}
    for factor in [(1.0, -1j)] * a + [(1.0, 1j)] * b:
        nxt: dict[tuple[int, int], complex] = {}
        for (j, k), c in poly.items():
            nxt[(j + 1, k)] = nxt.get((j + 1, k), 0) + c * factor[0]
            nxt[(j, k + 1)] = nxt.get((j, k + 1), 0) + c * factor[1]
        poly = nxt
    scale = 2.0 ** (a + b)
    return {jk: c / scale for jk, c in poly.items() if c != 0}


def _fd_once(f, x: float, y: float, a: int, b: int, step: float) -> complex:
    total = 0j
    for (j, k), c in _xy_expansion(a, b).items():
        acc = 0.0
        for sx, cx in _CENTRAL[j].items():
            for sy, cy in _CENTRAL[k].items():
                acc += cx * cy * f(x + sx * step, y + sy * step)
        total += c * acc / step ** (j + k)
    return total


def fd_partial_oracle(q, w: complex, a: int, b: int, step: float | None = None) -> complex:
    """Central-difference estimate of ∂^{a+b}q/∂w^a∂w̄^b with one Richardson level.

    ``q`` is any callable ``w -> real``.  The default step is 1e-3 for total
    order <= 2 and 5e-2 for orders 3 and 4, where rounding in the wider
    stencils dominates.  After one Richardson level the stencils are exact
    on polynomials of total degree <= 6, so the wide step costs nothing
    there.
    """
    if a < 0 or b < 0 or a + b > 4:
        raise ValueError("finite-difference oracle supports a + b <= 4")
    w = complex(w)
    if a + b == 0:
        return complex(q(w))
    if step is None:
        step = 1e-3 if a + b <= 2 else 5e-2
    if not 0 < step < 1:
        raise ValueError("step must lie in (0, 1)")

    def f(x, y):
        return q(complex(x, y))

    coarse = _fd_once(f, w.real, w.imag, a, b, step)
    fine = _fd_once(f, w.real, w.imag, a, b, step / 2)
    return (4.0 * fine - coarse) / 3.0
