"""How many photons a trade-off code needs to spend on its quantum part.

For large ``lam * ns`` the quantum rate of the loss channel obeys

    Q(eta, lam ns) >= Q_max(eta) - 1 / (eta (1 - eta) lam ns ln 2),

so landing within ``eps`` of ``Q_max`` takes at most the fraction
``1 / (eta (1 - eta) eps ns ln 2)`` of the photon budget.
"""

import math

import numpy as np

from .channel import ChannelSpec, PowerBudget, quantum_capacity_limit
from .entropy import LN2, g_entropy
from .errors import DomainError


def _check_open_eta(eta):
    eta = ChannelSpec(eta).eta
    if not 0.5 < eta < 1.0:
        raise DomainError(f"rule of thumb needs 1/2 < eta < 1, got {eta}")
    return eta


def _correction(eta, photons):
    return 1.0 / (eta * (1.0 - eta) * photons * LN2)


def taylor_lower_bound(eta, ns, lam):
    """Lower bound on the quantum rate at ``lam * ns`` photons; may be negative."""
    eta = _check_open_eta(eta)
    ns = PowerBudget(ns).ns
    photons = float(lam) * ns
    if not photons > 0:
        raise DomainError(f"lam * ns must be positive, got {photons}")
    if math.isinf(photons):
        return quantum_capacity_limit(eta)
    return quantum_capacity_limit(eta) - _correction(eta, photons)


def lambda_star(eta, ns, eps):
    """Largest photon fraction worth dedicating to quantum data, capped at 1."""
    eta = _check_open_eta(eta)
    ns = PowerBudget(ns).ns
    eps = float(eps)
    if not (math.isfinite(eps) and eps > 0):
        raise DomainError(f"epsilon gap must be positive, got {eps!r}")
    if ns <= 0:
        raise DomainError("lambda_star needs a positive photon budget")
    return min(1.0, _correction(eta, eps * ns))


def coherent_rate(eta, photons):
    """Unclamped ``g(eta x) - g((1 - eta) x)`` for an array of photon numbers ``x``."""
    photons = np.asarray(photons, dtype=float)
    return g_entropy(eta * photons) - g_entropy((1.0 - eta) * photons)


def bound_slack(eta, photons):
    """``Q(eta, x) - taylor bound`` on a grid of photon numbers ``x``; nonnegative where the bound holds."""
    eta = _check_open_eta(eta)
    photons = np.asarray(photons, dtype=float)
    return coherent_rate(eta, photons) - (quantum_capacity_limit(eta) - _correction(eta, photons))


def validity_threshold(eta, photons):
    """Smallest grid photon number from which the Taylor bound holds at every larger grid point.

    Returns None if the bound fails at the largest grid point.
    """
    photons = np.sort(np.asarray(photons, dtype=float))
    ok = bound_slack(eta, photons) >= 0
    if not ok[-1]:
        return None
    bad = np.flatnonzero(~ok)
    return float(photons[0] if bad.size == 0 else photons[bad[-1] + 1])
