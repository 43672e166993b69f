"""Webster metric h dw dw̄ on D₀ = {q < 0} and its curvature invariants.

For a hypersurface of revolution ``p(z, z̄) + q(w, w̄) = 0`` the metric
density is ``h = -(log q)_{ww̄}`` and K is its Gauss curvature,
``K = -(1/h) ∂∂̄ log h``.  Two independent routes compute K: pure jet
calculus, and the closed expression in q and its partials up to
bidegree (2, 2).
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import tensors
from .errors import DegenerateGradient, EmptyDomain, NotInDomain, NotPseudoconvex
from .jets import BidegreeJet, HermitianDefiningFunction, eval_jet

DOMAIN_FLOOR = 1e-10
GRADIENT_FLOOR = 1e-8
VERDICT_TOL = 1e-6


@dataclass(frozen=True)
class Floors:
    domain: float = DOMAIN_FLOOR
    gradient: float = GRADIENT_FLOOR


def _check_admissible(jet: BidegreeJet, floors: Floors) -> tuple[float, float]:
    q = jet.value.real
    if q >= -floors.domain:
        raise NotInDomain(f"q = {q!r} is not negative at w = {jet.basepoint!r}")
    qw = jet[1, 0]
    k = (qw * qw.conjugate() - q * jet[1, 1]).real
    if k <= 0:
        raise NotPseudoconvex(f"h = {k / q**2!r} <= 0 at w = {jet.basepoint!r}")
    return q, k


def metric_density(jet: BidegreeJet) -> BidegreeJet:
    """Jet of h = -(log(-q))_{ww̄}; loses one order in each slot."""
    return -((-jet).log().derive_w().derive_wbar())


def _k_jet_route(jet: BidegreeJet) -> float:
    if jet.order[0] < 3 or jet.order[1] < 3:
        raise ValueError(f"jet route needs order >= (3, 3), got {jet.order}")
    h = metric_density(jet)
    if h.value.real <= 0:
        raise NotPseudoconvex(f"h = {h.value.real!r} <= 0")
    lap = h.log().derive_w().derive_wbar()
    return (-lap.value / h.value).real


def _k_closed_form(jet: BidegreeJet) -> float:
    if jet.order[0] < 2 or jet.order[1] < 2:
        raise ValueError(f"closed form needs order >= (2, 2), got {jet.order}")
    q = jet.value.real
    qw = jet[1, 0]
    qww = jet[2, 0]
    qwb = jet[1, 1].real
    q3 = jet[2, 1]  # q_{ww w̄}
    q4 = jet[2, 2].real
    k = (abs(qw) ** 2 - q * qwb)
    bracket = (
        k * q4
        + q * abs(q3) ** 2
        - 2.0 * (q3 * qww.conjugate() * qw).real
        + qwb * abs(qww) ** 2
    )
    return -2.0 + q**3 / k**3 * bracket


def gauss_curvature(jet: BidegreeJet, method: str = "jet", floors: Floors = Floors()) -> float:
    """Gauss curvature of h dw dw̄ at the jet's base point.

    ``method`` is ``"jet"`` (generic jet calculus, order >= (3, 3)) or
    ``"closed"`` (closed expression, order >= (2, 2)).
    """
    _check_admissible(jet, floors)
    if method == "jet":
        return _k_jet_route(jet)
    if method == "closed":
        return _k_closed_form(jet)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class WebsterPointData:
    w: complex
    q: float
    q_w: complex
    q_ww: complex
    q_wwb: float
    q_wwwb: complex
    q_wwwbwb: float
    h: float
    k: float
    Q: complex
    A: complex
    B: float
    B_check: float
    K: float
    K_closed: float

    def sign_law_holds(self, band: float = 1e-10) -> bool:
        """B <= 0 iff K >= -2, ignoring points inside the dead band."""
        if abs(self.B) <= band or abs(self.K + 2.0) <= band:
            return True
        return (self.B <= 0) == (self.K + 2.0 >= 0)


def webster_invariants(jet: BidegreeJet, floors: Floors = Floors()) -> WebsterPointData:
    q, k = _check_admissible(jet, floors)
    qw = jet[1, 0]
    if abs(qw) < floors.gradient:
        raise DegenerateGradient(f"|q_w| = {abs(qw)!r} below {floors.gradient} at w = {jet.basepoint!r}")
    K = _k_jet_route(jet)
    K_closed = _k_closed_form(jet)

    d_w = jet.derive_w()
    d_wb = jet.derive_wbar()
    Qj = d_w.derive_wbar() / (d_w * d_wb)
    Q = Qj.value
    Q_w, Q_wb, Q_wwb = Qj[1, 0], Qj[0, 1], Qj[1, 1]
    qwb_conj = qw.conjugate()
    mod2 = abs(qw) ** 2
    A = -Q / (1.0 - Q * q)
    B = (
        Q_wwb / mod2
        + 2.0 * Q * (Q_w / qw + Q_wb / qwb_conj)
        + 3.0 * Q**3
        + q * abs(Q_w / qw + Q**2) ** 2 / (1.0 - Q * q)
    )
    B_check = (K + 2.0) * k**2 / (q**3 * mod2**2)
    return WebsterPointData(
        w=jet.basepoint,
        q=q,
        q_w=qw,
        q_ww=jet[2, 0],
        q_wwb=jet[1, 1].real,
        q_wwwb=jet[2, 1],
        q_wwwbwb=jet[2, 2].real,
        h=k / q**2,
        k=k,
        Q=Q,
        A=A,
        B=B.real,
        B_check=B_check,
        K=K,
        K_closed=K_closed,
    )


# domain scans -----------------------------------------------------------


class SkipReason(str, enum.Enum):
    Q_NONNEG = "q_nonneg"
    DQ_ZERO = "dq_zero"
    H_NONPOS = "h_nonpos"


@dataclass(frozen=True)
class Grid:
    center: complex
    radius: float
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("grid needs steps >= 1")
        if self.radius < 0:
            raise ValueError("grid radius must be non-negative")

    def points(self) -> list[complex]:
        """Square lattice, row-major: rows run over Im w, columns over Re w."""
        c = complex(self.center)
        if self.steps == 1:
            return [c]
        ticks = np.linspace(-self.radius, self.radius, self.steps)
        return [complex(c.real + x, c.imag + y) for y in ticks for x in ticks]


@dataclass(frozen=True)
class PointRecord:
    w: complex
    K: float | None
    data: WebsterPointData | None
    skip_reason: SkipReason | None


@dataclass(frozen=True)
class DomainScanReport:
    grid: Grid
    points: tuple[PointRecord, ...]
    K_min: float = field(init=False)
    K_max: float = field(init=False)

    def __post_init__(self):
        ks = [r.K for r in self.points if r.K is not None]
        object.__setattr__(self, "K_min", min(ks) if ks else float("nan"))
        object.__setattr__(self, "K_max", max(ks) if ks else float("nan"))

    @property
    def curvatures(self) -> list[float]:
        return [r.K for r in self.points if r.K is not None]

    def skip_counts(self) -> dict[str, int]:
        counts = {reason.value: 0 for reason in SkipReason}
        for r in self.points:
            if r.skip_reason is not None:
                counts[r.skip_reason.value] += 1
        return counts

    @property
    def computed(self) -> int:
        return sum(1 for r in self.points if r.data is not None)


def classify_point(q: HermitianDefiningFunction, w: complex, order=(3, 3), floors: Floors = Floors()) -> PointRecord:
    jet = eval_jet(q, w, order)
    try:
        data = webster_invariants(jet, floors)
        return PointRecord(w, data.K, data, None)
    except NotInDomain:
        return PointRecord(w, None, None, SkipReason.Q_NONNEG)
    except NotPseudoconvex:
        return PointRecord(w, None, None, SkipReason.H_NONPOS)
    except DegenerateGradient:
        # K is still defined where h > 0; only the gradient-dependent invariants are lost
        return PointRecord(w, _k_jet_route(jet), None, SkipReason.DQ_ZERO)


def scan_domain(
    q: HermitianDefiningFunction,
    grid: Grid,
    threads: int = 1,
    floors: Floors = Floors(),
) -> DomainScanReport:
    pts = grid.points()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda w: classify_point(q, w, floors=floors), pts))
    else:
        records = [classify_point(q, w, floors=floors) for w in pts]
    if all(r.skip_reason is SkipReason.Q_NONNEG for r in records):
        raise EmptyDomain("no grid point lies in D0 = {q < 0}")
    return DomainScanReport(grid, tuple(records))


# Chern-Moser field ------------------------------------------------------


def point_on_hypersurface(h, q_value: float, direction=None) -> np.ndarray:
    """A z with h(z, z̄) = -q(w); ``direction`` defaults to the first axis."""
    h = tensors.check_hermitian(h, name="h")
    u = np.zeros(len(h), dtype=complex)
    if direction is None:
        u[0] = 1.0
    else:
        u = np.asarray(direction, dtype=complex)
    pu = float(np.real(u @ h @ np.conj(u)))
    if pu <= 0 or q_value >= 0:
        raise NotInDomain("cannot place z on the hypersurface for this w")
    return u * np.sqrt(-q_value / pu)


def chern_moser_tensor(data: WebsterPointData, h, direction=None) -> tuple[tensors.Curvature4Tensor, np.ndarray]:
    """Trace-free part S of the pseudo-Hermitian curvature at (z, w) on M."""
    z = point_on_hypersurface(h, data.q, direction)
    p = tensors.gradient_vector(h, z)
    g = tensors.build_levi_metric(h, data.Q, p)
    R = tensors.pseudo_hermitian_curvature(data.A.real, data.B, g, p)
    return tensors.traceless_projection(R, g), g


# verdict ----------------------------------------------------------------


class Verdict(str, enum.Enum):
    SPHERICAL_RIGID = "SphericalRigid"
    NO_LOW_CODIM_EMBEDDING = "NoLowCodimEmbedding"
    INAPPLICABLE = "Inapplicable"


@dataclass(frozen=True)
class EmbeddabilityVerdict:
    verdict: Verdict
    reason: str


def embeddability_verdict(report: DomainScanReport, n: int, N: int, tol: float = VERDICT_TOL) -> EmbeddabilityVerdict:
    ks = report.curvatures
    if not ks:
        raise EmptyDomain("scan report has no computed curvature")
    if not (2 <= n <= N <= 2 * n - 2):
        return EmbeddabilityVerdict(Verdict.INAPPLICABLE, f"dimension window 2 <= n <= N <= 2n-2 fails for n={n}, N={N}")
    dev = [k + 2.0 for k in ks]
    if any(abs(d) == tol for d in dev):
        return EmbeddabilityVerdict(Verdict.INAPPLICABLE, "a sampled |K+2| sits exactly on the tolerance")
    if any(d < -tol for d in dev):
        return EmbeddabilityVerdict(Verdict.INAPPLICABLE, f"K < -2 - tol at a sampled point (K_min = {min(ks)!r})")
    if all(abs(d) < tol for d in dev):
        return EmbeddabilityVerdict(Verdict.SPHERICAL_RIGID, "|K+2| <= tol at every sampled point")
    return EmbeddabilityVerdict(
        Verdict.NO_LOW_CODIM_EMBEDDING,
        f"K >= -2 - tol everywhere and K > -2 + tol somewhere (K_max = {max(ks)!r})",
    )
