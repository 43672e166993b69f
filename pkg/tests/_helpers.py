"""Random generators shared by the test modules."""

import numpy as np

from crrigidity.errors import NumericDomainError
from crrigidity.jets import HermitianDefiningFunction, eval_jet
from crrigidity.webster import webster_invariants


def random_real_poly(rng, max_deg=3, scale=1.0, base=None):
    """Random real-valued polynomial sum c_ab w^a wbar^b with c_ba = conj(c_ab)."""
    coeffs = dict(base or {})
    for a in range(max_deg + 1):
        for b in range(a, max_deg + 1):
            if a == b:
                c = complex(rng.normal() * scale)
            else:
                c = complex(rng.normal(), rng.normal()) * scale
            coeffs[(a, b)] = coeffs.get((a, b), 0) + c
            if a != b:
                coeffs[(b, a)] = coeffs.get((b, a), 0) + c.conjugate()
    return HermitianDefiningFunction(coeffs)


def perturbed_sphere(rng, scale=0.1):
    return random_real_poly(rng, 3, scale, base={(1, 1): 1.0, (0, 0): -1.0})


def admissible_samples(rng, count, scale=0.1, radius=0.6):
    """(q, w, data) triples with q < 0, h > 0 and q_w != 0."""
    out = []
    while len(out) < count:
        q = perturbed_sphere(rng, scale)
        w = complex(*rng.uniform(-radius, radius, 2))
        try:
            data = webster_invariants(eval_jet(q, w, (3, 3)))
        except NumericDomainError:
            continue
        out.append((q, w, data))
    return out


def random_hpd(rng, n, cond=10.0):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = m @ m.conj().T + np.eye(n) * (np.trace(m @ m.conj().T).real / cond)
    return (h + h.conj().T) / 2


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2


def eps_family(eps):
    return HermitianDefiningFunction({(1, 1): 1.0, (2, 2): eps, (0, 0): -1.0})
