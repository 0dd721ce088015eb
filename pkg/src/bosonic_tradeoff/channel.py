"""Pure-loss bosonic channel and its single-task capacities.

The channel mixes the sender's mode ``a`` with a vacuum environment mode
``e`` on a beamsplitter of power transmissivity ``eta``; the receiver gets
``b = sqrt(eta) a + sqrt(1 - eta) e``. Everything here is parametric, the
operator-level simulation lives in :mod:`bosonic_tradeoff.fock`.
"""

import math
from dataclasses import dataclass

from .entropy import g_entropy
from .errors import DomainError


@dataclass(frozen=True)
class ChannelSpec:
    """Transmissivity of a pure-loss channel, ``0 < eta <= 1``.

    ``allow_zero`` admits the fully opaque channel, which only the
    public/private region accepts.
    """

    eta: float
    allow_zero: bool = False

    def __post_init__(self):
        eta = float(self.eta)
        lo_ok = eta >= 0 if self.allow_zero else eta > 0
        if not (math.isfinite(eta) and lo_ok and eta <= 1):
            raise DomainError(f"transmissivity must lie in {'[0, 1]' if self.allow_zero else '(0, 1]'}, got {self.eta!r}")
        object.__setattr__(self, "eta", eta)


@dataclass(frozen=True)
class PowerBudget:
    """Mean photon number per channel use at the transmitter."""

    ns: float

    def __post_init__(self):
        ns = float(self.ns)
        if not (math.isfinite(ns) and ns >= 0):
            raise DomainError(f"mean photon number must be finite and nonnegative, got {self.ns!r}")
        object.__setattr__(self, "ns", ns)


def _validate(eta, ns, allow_zero=False):
    return ChannelSpec(eta, allow_zero).eta, PowerBudget(ns).ns


def classical_capacity(eta, ns):
    """Unassisted classical capacity g(eta * ns) in bits per use."""
    eta, ns = _validate(eta, ns)
    return g_entropy(eta * ns)


def quantum_capacity(eta, ns):
    """Quantum capacity max(0, g(eta ns) - g((1-eta) ns)); zero whenever eta <= 1/2."""
    eta, ns = _validate(eta, ns)
    if eta <= 0.5:
        return 0.0
    return max(0.0, g_entropy(eta * ns) - g_entropy((1.0 - eta) * ns))


def quantum_capacity_limit(eta):
    """Infinite-photon quantum capacity log2(eta / (1 - eta)).

    Returns 0 for ``eta <= 1/2`` and ``math.inf`` for the noiseless channel;
    serializers write the latter as the string ``"unbounded"``.
    """
    eta = ChannelSpec(eta).eta
    if eta <= 0.5:
        return 0.0
    if eta == 1.0:
        return math.inf
    return math.log2(eta) - math.log2(1.0 - eta)


def ea_classical_capacity(eta, ns):
    """Entanglement-assisted classical capacity and the ebits it consumes.

    This is the full-allocation corner of the CQE region: rate
    ``g(ns) + g(eta ns) - g((1-eta) ns)`` at an entanglement cost ``g(ns)``.
    """
    eta, ns = _validate(eta, ns)
    cost = g_entropy(ns)
    rate = cost + g_entropy(eta * ns) - g_entropy((1.0 - eta) * ns)
    return rate, cost
