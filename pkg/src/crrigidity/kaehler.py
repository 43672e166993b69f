"""Complex space forms, holomorphic embeddings and the Gauss equation.

Curvature convention (matches κ(h⊗h + swap) for the space forms):

    R_{ij̄kl̄} = -∂_k ∂_l̄ g_{ij̄} + g^{pq̄} ∂_k g_{iq̄} ∂_l̄ g_{pj̄}
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import tensors
from .errors import EmptySampleSet, NotImmersion, NotInDomain, OutOfDomain
from .jets import HermitianDefiningFunction
from .tensors import Curvature4Tensor

IMMERSION_FLOOR = 1e-10
FD_STEP = 1e-3


@dataclass(frozen=True)
class SpaceFormChart:
    """ℂᴺ (κ=0), the affine chart of ℙᴺ (κ=1) or the unit ball (κ=-1)."""

    dim: int
    kappa: int

    def __post_init__(self):
        if self.kappa not in (-1, 0, 1):
            raise ValueError(f"kappa must be -1, 0 or 1, got {self.kappa}")
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    def contains(self, z) -> bool:
        return self.kappa != -1 or float(np.vdot(z, z).real) < 1.0

    def _point(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if z.shape != (self.dim,):
            raise ValueError(f"expected a point of C^{self.dim}, got shape {z.shape}")
        if not self.contains(z):
            raise OutOfDomain(f"|z| >= 1 outside the ball chart: {z}")
        return z

    def metric(self, z) -> np.ndarray:
        """h_{ij̄} = δ_ij/(1+κ|z|²) - κ z̄_i z_j/(1+κ|z|²)²."""
        z = self._point(z)
        s = 1.0 + self.kappa * float(np.vdot(z, z).real)
        return np.eye(self.dim) / s - self.kappa * np.outer(np.conj(z), z) / s**2

    def metric_derivative(self, z) -> np.ndarray:
        """d[k, i, j] = ∂h_{ij̄}/∂z_k."""
        z = self._point(z)
        kap = self.kappa
        s = 1.0 + kap * float(np.vdot(z, z).real)
        zc = np.conj(z)
        eye = np.eye(self.dim)
        d = -kap * np.einsum("k,ij->kij", zc, eye) / s**2
        d -= kap * np.einsum("i,jk->kij", zc, eye) / s**2
        d += 2 * kap**2 * np.einsum("i,j,k->kij", zc, z, zc) / s**3
        return d

    def curvature(self, z) -> Curvature4Tensor:
        return tensors.space_form_shape(self.metric(z), float(self.kappa))

    def christoffel(self, z) -> np.ndarray:
        """Γ[i, j, k] = Γ^i_{jk} = g^{il̄} ∂_j g_{kl̄}."""
        ginv = np.linalg.inv(self.metric(z))
        return np.einsum("li,jkl->ijk", ginv, self.metric_derivative(z))


def space_form_metric(chart: SpaceFormChart, z) -> np.ndarray:
    return chart.metric(z)


def numeric_curvature(metric: Callable[[np.ndarray], np.ndarray], z, step: float = FD_STEP) -> Curvature4Tensor:
    """Kähler curvature of a metric function by central differences (one Richardson level)."""
    z = np.asarray(z, dtype=complex)
    n = len(z)

    def at(x):
        return np.asarray(metric(x[:n] + 1j * x[n:]), dtype=complex)

    x0 = np.concatenate([z.real, z.imag])
    dim = 2 * n
    g0 = at(x0)

    def first(h):
        out = np.empty((dim, n, n), dtype=complex)
        for u in range(dim):
            e = np.zeros(dim)
            e[u] = h
            out[u] = (at(x0 + e) - at(x0 - e)) / (2 * h)
        return out

    def second(h):
        out = np.empty((dim, dim, n, n), dtype=complex)
        for u in range(dim):
            eu = np.zeros(dim)
            eu[u] = h
            out[u, u] = (at(x0 + eu) - 2 * g0 + at(x0 - eu)) / h**2
            for v in range(u + 1, dim):
                ev = np.zeros(dim)
                ev[v] = h
                val = (at(x0 + eu + ev) - at(x0 + eu - ev) - at(x0 - eu + ev) + at(x0 - eu - ev)) / (4 * h**2)
                out[u, v] = out[v, u] = val
        return out

    d1 = (4 * first(step / 2) - first(step)) / 3
    d2 = (4 * second(step / 2) - second(step)) / 3
    dx, dy = d1[:n], d1[n:]
    dz = (dx - 1j * dy) / 2  # dz[k] = ∂_k g
    dzb = (dx + 1j * dy) / 2  # dzb[l] = ∂_l̄ g
    xx, xy, yx, yy = d2[:n, :n], d2[:n, n:], d2[n:, :n], d2[n:, n:]
    ddb = (xx + yy + 1j * (xy - yx)) / 4  # ddb[k, l] = ∂_k ∂_l̄ g
    ginv = np.linalg.inv(g0)
    R = -np.einsum("klij->ijkl", ddb)
    R += np.einsum("qp,kiq,lpj->ijkl", ginv, dz, dzb)
    return Curvature4Tensor(R)


def kaehler_curvature(chart: SpaceFormChart, z, method: str = "closed") -> Curvature4Tensor:
    g = chart.metric(z)
    if not tensors.is_positive_definite(g):
        raise tensors.SingularMetric("metric is not positive definite")
    if method == "closed":
        return chart.curvature(z)
    if method == "numeric":
        return numeric_curvature(chart.metric, z)
    raise ValueError(f"unknown method {method!r}")


# holomorphic maps ----------------------------------------------------------


@dataclass(frozen=True)
class HoloEmbedding:
    """Polynomial map ℂⁿ → ℂᴺ; each component is ``{multi-index: coeff}``."""

    n: int
    components: tuple[Mapping[tuple[int, ...], complex], ...]

    def __post_init__(self):
        comps = []
        for comp in self.components:
            clean = {}
            for I, c in comp.items():
                I = tuple(int(i) for i in I)
                if len(I) != self.n or min(I, default=0) < 0:
                    raise ValueError(f"bad multi-index {I} for n={self.n}")
                if complex(c) != 0:
                    clean[I] = clean.get(I, 0j) + complex(c)
            comps.append(dict(sorted(clean.items())))
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def from_terms(cls, n: int, terms) -> "HoloEmbedding":
        return cls(n, tuple({tuple(I): complex(re, im) for I, re, im in comp} for comp in terms))

    @property
    def N(self) -> int:
        return len(self.components)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.array([sum(c * np.prod(z ** np.array(I)) for I, c in comp.items()) for comp in self.components], dtype=complex)

    def jacobian(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        J = np.zeros((self.N, self.n), dtype=complex)
        for i, comp in enumerate(self.components):
            for I, c in comp.items():
                for a in range(self.n):
                    if I[a] == 0:
                        continue
                    e = np.array(I)
                    e[a] -= 1
                    J[i, a] += c * I[a] * np.prod(z**e)
        return J

    def hessian(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        H = np.zeros((self.N, self.n, self.n), dtype=complex)
        for i, comp in enumerate(self.components):
            for I, c in comp.items():
                for a in range(self.n):
                    for b in range(self.n):
                        e = np.array(I)
                        coef = e[a]
                        e[a] -= 1
                        coef *= e[b] if e[b] > 0 else 0
                        if coef == 0:
                            continue
                        e[b] -= 1
                        H[i, a, b] += c * coef * np.prod(z**e)
        return H

    def check_immersion(self, z) -> np.ndarray:
        J = self.jacobian(z)
        sv = np.linalg.svd(J, compute_uv=False)
        if len(sv) < self.n or sv[-1] < IMMERSION_FLOOR:
            raise NotImmersion(f"Jacobian rank < {self.n} at z = {np.asarray(z)}")
        return J

    def pullback_metric(self, chart: SpaceFormChart, z) -> np.ndarray:
        J = self.check_immersion(z)
        return J.T @ chart.metric(self(z)) @ np.conj(J)

    def to_terms(self) -> list:
        return [[[list(I), c.real, c.imag] for I, c in comp.items()] for comp in self.components]


def _inner(G, u, v) -> complex:
    return complex(u @ G @ np.conj(v))


@dataclass(frozen=True)
class SecondFundamentalForm:
    components: np.ndarray  # [A, α, γ] in an orthonormal normal frame
    normal_frame: np.ndarray  # columns, ĝ-orthonormal, ĝ-orthogonal to the tangent image
    induced_metric: np.ndarray

    def norm(self) -> float:
        """ĝ-norm of the full tensor (tangent slots raised with the induced metric)."""
        ginv = np.linalg.inv(self.induced_metric)
        h = self.components
        val = np.einsum("Aag,Abd,ba,dg->", h, np.conj(h), ginv, ginv)
        return float(np.sqrt(max(val.real, 0.0)))

    def symmetry_defect(self) -> float:
        h = self.components
        return float(np.abs(h - h.transpose(0, 2, 1)).max(initial=0.0))


def second_fundamental_form(f: HoloEmbedding, chart: SpaceFormChart, z) -> SecondFundamentalForm:
    if chart.dim != f.N:
        raise ValueError(f"map lands in C^{f.N} but chart has dimension {chart.dim}")
    z = np.asarray(z, dtype=complex)
    J = f.check_immersion(z)
    x = f(z)
    if not chart.contains(x):
        raise OutOfDomain(f"f(z) = {x} leaves the chart")
    G = chart.metric(x)
    hess = f.hessian(z) + np.einsum("ijk,ja,kg->iag", chart.christoffel(x), J, J)

    basis: list[np.ndarray] = []
    for a in range(f.n):
        v = J[:, a].copy()
        for b in basis:
            v = v - _inner(G, v, b) * b
        basis.append(v / np.sqrt(_inner(G, v, v).real))
    normals: list[np.ndarray] = []
    for i in range(f.N):
        if len(normals) == f.N - f.n:
            break
        v = np.zeros(f.N, dtype=complex)
        v[i] = 1.0
        for b in basis + normals:
            v = v - _inner(G, v, b) * b
        nv = np.sqrt(max(_inner(G, v, v).real, 0.0))
        if nv > 1e-8:
            normals.append(v / nv)
    frame = np.array(normals).T if normals else np.zeros((f.N, 0), dtype=complex)
    h = np.einsum("iag,ij,jA->Aag", hess, G, np.conj(frame))
    induced = J.T @ G @ np.conj(J)
    return SecondFundamentalForm(h, frame, induced)


def gauss_residual(f: HoloEmbedding, chart: SpaceFormChart, z, step: float = FD_STEP) -> Curvature4Tensor:
    """R̂|_{f} - R_induced - h^A_{αγ} conj(h^B_{βδ}) ĝ_{AB̄}."""
    z = np.asarray(z, dtype=complex)
    sff = second_fundamental_form(f, chart, z)
    J = f.jacobian(z)
    Jc = np.conj(J)
    Rhat = chart.curvature(f(z)).components
    restricted = np.einsum("ijkl,ia,jb,kc,ld->abcd", Rhat, J, Jc, J, Jc, optimize=True)
    induced = numeric_curvature(lambda w: f.pullback_metric(chart, w), z, step)
    h = sff.components
    second = np.einsum("Aag,Abd->abgd", h, np.conj(h))
    return Curvature4Tensor(restricted - induced.components - second)


@dataclass(frozen=True)
class ConformalFit:
    k: float
    deviation: float
    conformal: bool


def conformal_factor_check(
    f: HoloEmbedding,
    source: SpaceFormChart,
    chart: SpaceFormChart,
    samples: Sequence,
    tol: float = 1e-6,
) -> ConformalFit:
    """Best constant k with f*σ ≈ k ω over the samples, and the worst relative miss."""
    if len(samples) < 2:
        raise EmptySampleSet("conformality needs at least two sample points")
    if source.dim != f.n:
        raise ValueError("source metric dimension differs from the map's source")
    pulls = [f.pullback_metric(chart, z) for z in samples]
    omegas = [source.metric(z) for z in samples]
    num = sum(np.vdot(w, p).real for p, w in zip(pulls, omegas))
    den = sum(np.vdot(w, w).real for w in omegas)
    k = num / den
    dev = max(np.linalg.norm(p - k * w) / np.linalg.norm(k * w) for p, w in zip(pulls, omegas))
    return ConformalFit(float(k), float(dev), bool(k > 0 and dev <= tol))


class Theorem12Outcome(str, enum.Enum):
    TOTALLY_GEODESIC_CONFIRMED = "TotallyGeodesicConfirmed"
    HYPOTHESIS_FAILS = "HypothesisFails"
    THEOREM_VIOLATION_SUSPECTED = "TheoremViolationSuspected"


@dataclass(frozen=True)
class Theorem12Verdict:
    verdict: Theorem12Outcome
    reason: str
    details: dict = field(default_factory=dict)


def theorem12_verdict(
    f: HoloEmbedding,
    chart: SpaceFormChart,
    source: SpaceFormChart,
    samples: Sequence,
    tol: float = 1e-6,
) -> Theorem12Verdict:
    if not samples:
        raise EmptySampleSet("no sample points")
    n, N = f.n, f.N
    fails = Theorem12Outcome.HYPOTHESIS_FAILS
    if not (2 <= n <= N <= 2 * n - 1):
        return Theorem12Verdict(fails, f"dimension window 2 <= n <= N <= 2n-1 fails for n={n}, N={N}")
    fit = conformal_factor_check(f, source, chart, samples, tol) if len(samples) >= 2 else None
    details = {}
    if fit is not None:
        details.update(conformal_k=fit.k, conformal_deviation=fit.deviation)
        if not fit.conformal:
            return Theorem12Verdict(fails, "map is not conformal with a constant factor", details)
    for z in samples:
        src = tensors.conformal_flat_test(source.curvature(z), source.metric(z), tol)
        x = f(z)
        tgt = tensors.conformal_flat_test(chart.curvature(x), chart.metric(x), tol)
        if not src.flat:
            return Theorem12Verdict(fails, "source curvature is not pseudo-conformally flat", details)
        if not tgt.flat:
            return Theorem12Verdict(fails, "target curvature is not pseudo-conformally flat", details)
    norms = [second_fundamental_form(f, chart, z).norm() for z in samples]
    details["max_second_fundamental_form"] = max(norms)
    if max(norms) <= tol:
        return Theorem12Verdict(Theorem12Outcome.TOTALLY_GEODESIC_CONFIRMED, "second fundamental form vanishes at all samples", details)
    return Theorem12Verdict(
        Theorem12Outcome.THEOREM_VIOLATION_SUSPECTED,
        "hypotheses hold but the second fundamental form is nonzero",
        details,
    )


# sphere maps -------------------------------------------------------------


def sample_hypersurface(q: HermitianDefiningFunction, h, ws: Sequence[complex], directions=None) -> list[np.ndarray]:
    """Points (z, w) with h(z, z̄) + q(w) = 0, one per w in ``ws``."""
    h = tensors.check_hermitian(h, name="h")
    n = len(h)
    out = []
    for j, w in enumerate(ws):
        u = np.ones(n, dtype=complex) if directions is None else np.asarray(directions[j], dtype=complex)
        pu = float(np.real(u @ h @ np.conj(u)))
        qv = q(w)
        if qv >= 0 or pu <= 0:
            raise NotInDomain(f"no point of M over w = {w!r} (q = {qv!r})")
        z = u * np.sqrt(-qv / pu)
        out.append(np.concatenate([z, [complex(w)]]))
    return out


def defining_residual(q: HermitianDefiningFunction, h, point) -> float:
    z, w = np.asarray(point[:-1]), point[-1]
    return abs(float(np.real(z @ np.asarray(h) @ np.conj(z))) + q(w))


def verify_map_into_sphere(q: HermitianDefiningFunction, h, F: HoloEmbedding, points: Sequence) -> float:
    """max over samples of | ‖F(z, w)‖² - 1 |."""
    if len(points) == 0:
        raise EmptySampleSet("no sample points on M")
    worst = 0.0
    for pt in points:
        if defining_residual(q, h, pt) > 1e-10:
            raise NotInDomain(f"sample {pt} is not on M")
        v = F(pt)
        worst = max(worst, abs(float(np.vdot(v, v).real) - 1.0))
    return worst
