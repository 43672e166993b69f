"""Hermitian matrices and curvature-type 4-tensors T_{αβ̄μν̄}.

Index convention: ``T.components[a, b, m, v]`` is ``T_{a b̄ m v̄}``; barred
slots are 1 and 3.  Hermitian matrices are plain complex ndarrays with
``g[a, b] = g_{a b̄}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooSmall, NonHermitianInput, SingularMetric

MAX_DIM = 16
PIVOT_FLOOR = 1e-12


def check_hermitian(m, tol: float = 1e-10, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonHermitianInput(f"{name} must be square, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {m.shape[0]} exceeds cap {MAX_DIM}")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.conj().T).max(initial=0.0) > tol * scale:
        raise NonHermitianInput(f"{name} is not Hermitian")
    return m


def hermitian_pivots(m) -> np.ndarray:
    """Pivots of an LDL* elimination without pivoting (all > 0 iff positive definite)."""
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    piv = np.empty(n)
    for k in range(n):
        d = a[k, k].real
        piv[k] = d
        if abs(d) < 1e-300:
            piv[k + 1 :] = 0.0
            break
        a[k + 1 :, k + 1 :] -= np.outer(a[k + 1 :, k], a[k, k + 1 :]) / d
    return piv


def is_positive_definite(m, floor: float = PIVOT_FLOOR) -> bool:
    return bool(np.all(hermitian_pivots(m) > floor))


def _metric_inverse(g) -> np.ndarray:
    g = check_hermitian(g, name="metric")
    if not is_positive_definite(g):
        raise SingularMetric("metric is not positive definite")
    return np.linalg.inv(g)


def orthonormal_frame(g) -> np.ndarray:
    """Matrix E with ``E.T @ g @ E.conj() = I`` (columns are a unitary frame)."""
    g = check_hermitian(g, name="metric")
    if not is_positive_definite(g):
        raise SingularMetric("metric is not positive definite")
    c = np.linalg.cholesky(g)
    return np.linalg.inv(c).T


@dataclass(frozen=True)
class Curvature4Tensor:
    components: np.ndarray

    def __post_init__(self):
        arr = np.array(self.components, dtype=complex)
        if arr.ndim != 4 or len(set(arr.shape)) != 1:
            raise ValueError(f"expected an n^4 array, got shape {arr.shape}")
        if arr.shape[0] > MAX_DIM:
            raise ValueError(f"dimension {arr.shape[0]} exceeds cap {MAX_DIM}")
        arr.setflags(write=False)
        object.__setattr__(self, "components", arr)

    @classmethod
    def zeros(cls, n: int) -> "Curvature4Tensor":
        return cls(np.zeros((n,) * 4, dtype=complex))

    @property
    def n(self) -> int:
        return self.components.shape[0]

    def __add__(self, other: "Curvature4Tensor") -> "Curvature4Tensor":
        return Curvature4Tensor(self.components + other.components)

    def __sub__(self, other: "Curvature4Tensor") -> "Curvature4Tensor":
        return Curvature4Tensor(self.components - other.components)

    def __mul__(self, c) -> "Curvature4Tensor":
        return Curvature4Tensor(self.components * c)

    __rmul__ = __mul__

    def max_norm(self) -> float:
        return float(np.abs(self.components).max(initial=0.0))

    def frame_norm(self, g) -> float:
        """Frobenius norm in a g-orthonormal frame (frame independent)."""
        return float(np.linalg.norm(self.in_frame(orthonormal_frame(g)).components))

    def in_frame(self, e) -> "Curvature4Tensor":
        ec = np.conj(e)
        t = np.einsum("abmv,ai,bj,mk,vl->ijkl", self.components, e, ec, e, ec, optimize=True)
        return Curvature4Tensor(t)

    def hermitian_defect(self) -> float:
        t = self.components
        return float(np.abs(t - np.conj(t.transpose(1, 0, 3, 2))).max(initial=0.0))

    def pair_defect(self) -> float:
        t = self.components
        d1 = np.abs(t - t.transpose(2, 1, 0, 3)).max(initial=0.0)
        d2 = np.abs(t - t.transpose(0, 3, 2, 1)).max(initial=0.0)
        return float(max(d1, d2))

    def quartic(self, x) -> complex:
        """T(X, X̄, X, X̄)."""
        x = np.asarray(x, dtype=complex)
        xc = np.conj(x)
        return complex(np.einsum("abmv,a,b,m,v->", self.components, x, xc, x, xc))


def gradient_vector(h, z) -> np.ndarray:
    """p_α = Σ_β h_{αβ̄} z̄^β, the holomorphic gradient of z ↦ h(z, z̄)."""
    h = check_hermitian(h, name="h")
    return h @ np.conj(np.asarray(z, dtype=complex))


def build_levi_metric(h, Q: complex, p) -> np.ndarray:
    """g_{αβ̄} = h_{αβ̄} + Q p_α p_β̄."""
    h = check_hermitian(h, name="h")
    Q = complex(Q)
    if abs(Q.imag) > 1e-10 * max(1.0, abs(Q.real)):
        raise NonHermitianInput(f"Q must be real, got {Q!r}")
    p = np.asarray(p, dtype=complex)
    return h + Q.real * np.outer(p, np.conj(p))


def pseudo_hermitian_curvature(A: float, B: float, g, p) -> Curvature4Tensor:
    """R_{βᾱρσ̄} = -A(g_{βᾱ}g_{ρσ̄} + g_{ρᾱ}g_{βσ̄}) - B p_β p_ᾱ p_ρ p_σ̄."""
    g = check_hermitian(g, name="g")
    A = float(np.real(A))
    B = float(np.real(B))
    p = np.asarray(p, dtype=complex)
    pc = np.conj(p)
    t = -A * (np.einsum("ab,mv->abmv", g, g) + np.einsum("mb,av->abmv", g, g))
    t = t - B * np.einsum("a,b,m,v->abmv", p, pc, p, pc)
    return Curvature4Tensor(t)


def space_form_shape(g, kappa: float = 1.0) -> Curvature4Tensor:
    """κ(g_{αβ̄}g_{μν̄} + g_{μβ̄}g_{αν̄})."""
    return pseudo_hermitian_curvature(-kappa, 0.0, g, np.zeros(len(g)))


def ricci_and_scalar(R: Curvature4Tensor, g) -> tuple[np.ndarray, float]:
    ginv = _metric_inverse(g)
    # g^{μν̄} with ginv[ν, μ] convention: Σ_ν g[λ, ν] ginv[ν, μ] = δ
    ric = np.einsum("vm,mvab->ab", ginv, R.components)
    scal = np.einsum("ba,ab->", ginv, ric)
    return ric, float(scal.real)


def _trace_correction(R: Curvature4Tensor, g) -> Curvature4Tensor:
    n = R.n
    if n < 2:
        raise DimensionTooSmall("trace-free projection needs n >= 2")
    g = np.asarray(g, dtype=complex)
    ric, scal = ricci_and_scalar(R, g)
    e = np.einsum
    ricci_part = (
        e("ab,mv->abmv", ric, g)
        + e("mb,av->abmv", ric, g)
        + e("av,mb->abmv", ric, g)
        + e("mv,ab->abmv", ric, g)
    ) / (n + 2)
    scalar_part = scal * (e("ab,mv->abmv", g, g) + e("av,mb->abmv", g, g)) / ((n + 1) * (n + 2))
    return Curvature4Tensor(R.components - ricci_part + scalar_part)


def bochner_tensor(R: Curvature4Tensor, g) -> Curvature4Tensor:
    """Bochner tensor of a Kähler curvature tensor (Ricci/scalar trace correction)."""
    return _trace_correction(R, g)


def _flat_basis(n: int) -> np.ndarray:
    """Columns: δ-patterns X_{ij} placed in the four slot pairings, flattened."""
    eye = np.eye(n)
    cols = []
    for i in range(n):
        for j in range(n):
            x = np.zeros((n, n))
            x[i, j] = 1.0
            cols.append(np.einsum("ab,mv->abmv", x, eye).ravel())  # X_{αβ̄} g_{μν̄}
            cols.append(np.einsum("mb,av->abmv", x, eye).ravel())  # X_{μβ̄} g_{αν̄}
            cols.append(np.einsum("av,mb->abmv", x, eye).ravel())  # X_{αν̄} g_{μβ̄}
            cols.append(np.einsum("mv,ab->abmv", x, eye).ravel())  # X_{μν̄} g_{αβ̄}
    return np.array(cols).T


def traceless_projection(R: Curvature4Tensor, g, symmetry_tol: float = 1e-12) -> Curvature4Tensor:
    """Trace-free component of ``R`` with respect to ``g``.

    For tensors with the curvature pair symmetries this is the Ricci/scalar
    correction shared with :func:`bochner_tensor`.  Other tensors are
    projected g-orthogonally off the span of the four δ-slot patterns, which
    kills all four single traces.
    """
    if R.n < 2:
        raise DimensionTooSmall("trace-free projection needs n >= 2")
    g = check_hermitian(g, name="g")
    scale = max(1.0, R.max_norm())
    if R.pair_defect() <= symmetry_tol * scale:
        return _trace_correction(R, g)
    e = orthonormal_frame(g)
    t = R.in_frame(e).components.ravel()
    basis = _flat_basis(R.n)
    coef, *_ = np.linalg.lstsq(basis, t, rcond=None)
    s = (t - basis @ coef).reshape((R.n,) * 4)
    return Curvature4Tensor(s).in_frame(np.linalg.inv(e))


def single_traces(T: Curvature4Tensor, g) -> list[np.ndarray]:
    """The four g-contractions of one barred with one unbarred slot."""
    ginv = _metric_inverse(g)
    t = T.components
    return [
        np.einsum("ba,abmv->mv", ginv, t),
        np.einsum("va,abmv->mb", ginv, t),
        np.einsum("bm,abmv->av", ginv, t),
        np.einsum("vm,abmv->ab", ginv, t),
    ]


@dataclass(frozen=True)
class FlatnessResult:
    flat: bool
    residual: float
    witness: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None


def _hermitian_basis(n: int) -> list[np.ndarray]:
    out = []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[i, i] = 1.0
        out.append(m)
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = m[j, i] = 1.0
            out.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = 1j
            m[j, i] = -1j
            out.append(m)
    return out


def flat_tensor(H, H_hat, H_star, W, g) -> Curvature4Tensor:
    """H_{αβ̄}g_{μν̄} + Ĥ_{μβ̄}g_{αν̄} + H*_{αν̄}g_{μβ̄} + W̃_{μν̄}g_{αβ̄}."""
    e = np.einsum
    g = np.asarray(g, dtype=complex)
    t = (
        e("ab,mv->abmv", H, g)
        + e("mb,av->abmv", H_hat, g)
        + e("av,mb->abmv", H_star, g)
        + e("mv,ab->abmv", W, g)
    )
    return Curvature4Tensor(t)


def conformal_flat_test(T: Curvature4Tensor, g, tol: float = 1e-8) -> FlatnessResult:
    """Least-squares fit of T by four Hermitian witness matrices against g."""
    g = check_hermitian(g, name="g")
    if not is_positive_definite(g):
        raise SingularMetric("metric is not positive definite")
    n = T.n
    basis = _hermitian_basis(n)
    zero = np.zeros((n, n), dtype=complex)
    columns = []
    for slot in range(4):
        for m in basis:
            args = [zero] * 4
            args[slot] = m
            columns.append(flat_tensor(*args, g).components.ravel())
    design = np.array(columns).T
    target = T.components.ravel()
    real_design = np.vstack([design.real, design.imag])
    real_target = np.concatenate([target.real, target.imag])
    coef, *_ = np.linalg.lstsq(real_design, real_target, rcond=None)
    residual = float(np.abs(design @ coef - target).max(initial=0.0))
    if residual > tol:
        return FlatnessResult(False, residual, None)
    k = len(basis)
    witness = tuple(
        sum(c * m for c, m in zip(coef[slot * k : (slot + 1) * k], basis)) for slot in range(4)
    )
    return FlatnessResult(True, residual, witness)


def quartic_identity_check(h, z, x) -> tuple[float, float]:
    """Both sides of Σ p_α p_β̄ p_μ p_ν̄ XᾱX̄^βX^μX̄^ν = |Σ h_{β'β̄}z^{β'}X̄^β h_{ν'ν̄}z^{ν'}X̄^ν|²."""
    h = check_hermitian(h, name="h")
    z = np.asarray(z, dtype=complex)
    x = np.asarray(x, dtype=complex)
    p = gradient_vector(h, z)
    pc = np.conj(p)
    xc = np.conj(x)
    quartic = np.einsum("a,b,m,v->abmv", p, pc, p, pc)
    lhs = np.einsum("abmv,a,b,m,v->", quartic, x, xc, x, xc)
    inner = np.einsum("pb,p,b->", h, z, xc)  # Σ h_{β'β̄} z^{β'} X̄^β
    rhs = abs(inner * inner) ** 2
    return float(lhs.real), float(rhs)
