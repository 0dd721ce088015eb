"""Trade-off rates for finite-dimensional channels and user-supplied ensembles.

A channel is given by Kraus operators ``E_k`` (``d_out x d_in``). Its
complementary channel comes from the isometry ``V = sum_k E_k (x) |k>`` with
the environment dimension equal to the number of Kraus operators.

Instance files are JSON::

    {
      "d_in": 2, "d_out": 2,
      "kraus": [ [[re, im], ...], ... ],        # each d_out*d_in entries, row-major
      "ensemble": [
        {"weight": 0.5, "state": [[re, im], ...]},      # pure state, d_in entries
        {"weight": 0.5, "density": [[re, im], ...]}     # or d_in*d_in entries, row-major
      ]
    }
"""

import json
from dataclasses import dataclass

import numpy as np

from .entropy import PSD_TOL, von_neumann_entropy
from .errors import DomainError
from .regions import BoundTriple

COMPLETENESS_TOL = 1e-10
WEIGHT_TOL = 1e-12


class FDChannel:
    """Channel from a list of Kraus operators, checked for trace preservation."""

    def __init__(self, kraus):
        ops = [np.atleast_2d(np.asarray(k, dtype=complex)) for k in kraus]
        if not ops:
            raise DomainError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise DomainError("Kraus operators must all have the same shape")
        self.kraus = np.stack(ops)
        completeness = np.einsum("kji,kjl->il", self.kraus.conj(), self.kraus)
        err = np.abs(completeness - np.eye(shape[1])).max()
        if err > COMPLETENESS_TOL:
            raise DomainError(f"Kraus operators are not trace preserving (deviation {err:.3e})")

    @property
    def d_out(self):
        return self.kraus.shape[1]

    @property
    def d_in(self):
        return self.kraus.shape[2]

    @property
    def d_env(self):
        return self.kraus.shape[0]

    def _check_input(self, rho):
        rho = _as_density(rho)
        if rho.shape != (self.d_in, self.d_in):
            raise DomainError(f"input has shape {rho.shape}, channel expects {(self.d_in, self.d_in)}")
        return rho

    def apply(self, rho):
        rho = self._check_input(rho)
        return np.einsum("kij,jl,kml->im", self.kraus, rho, self.kraus.conj())

    def complementary(self, rho):
        return complementary_output(self, rho)

    def isometry(self):
        """Stinespring isometry with rows indexed by (output, environment)."""
        return np.transpose(self.kraus, (1, 0, 2)).reshape(self.d_out * self.d_env, self.d_in)


def _as_density(state):
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        return np.outer(state, state.conj())
    if state.ndim != 2 or state.shape[0] != state.shape[1]:
        raise DomainError(f"expected a state vector or square density matrix, got shape {state.shape}")
    return state


def _check_density(rho, tol=PSD_TOL):
    if abs(np.trace(rho) - 1) > tol:
        raise DomainError(f"density matrix has trace {np.trace(rho).real:.12g}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise DomainError("density matrix is not Hermitian")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -tol:
        raise DomainError("density matrix is not positive semidefinite")
    return rho


def complementary_output(ch, rho):
    """Environment state of ``V rho V^dagger``; entry ``(k, l)`` is ``Tr(E_l^dagger E_k rho)``."""
    rho = _check_density(ch._check_input(rho))
    return np.einsum("lji,kjm,mi->kl", ch.kraus.conj(), ch.kraus, rho)


@dataclass
class FDEnsemble:
    """Weighted ensemble of input states ``rho_x``.

    ``states`` may mix pure state vectors and density matrices; a mixed
    ``rho_x`` stands for any of its purifications, which the rates only see
    through ``H(rho_x)`` and the complementary output.
    """

    weights: np.ndarray
    states: list

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.ndim != 1 or len(self.weights) != len(self.states):
            raise DomainError("need one weight per state")
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1) > WEIGHT_TOL:
            raise DomainError(f"weights must be a probability vector, sum is {self.weights.sum():.15g}")
        densities = []
        for s in self.states:
            arr = np.asarray(s, dtype=complex)
            if arr.ndim == 1 and abs(np.vdot(arr, arr) - 1) > 1e-10:
                raise DomainError("pure states must be normalized")
            densities.append(_check_density(_as_density(arr)))
        self.densities = densities

    def average(self):
        return sum(w * r for w, r in zip(self.weights, self.densities))


@dataclass(frozen=True)
class RateFormulas:
    """Rates of the general trade-off protocol.

    ``bits`` and ``qubits`` are generated, ``ebits`` is the entanglement the
    protocol consumes (a nonnegative amount for a valid ensemble).
    """

    bits: float
    qubits: float
    ebits: float


def _entropies(ch, ens):
    h_avg_out = von_neumann_entropy(ch.apply(ens.average()))
    h_in = np.array([von_neumann_entropy(r) for r in ens.densities])
    h_out = np.array([von_neumann_entropy(ch.apply(r)) for r in ens.densities])
    h_env = np.array([von_neumann_entropy(complementary_output(ch, r)) for r in ens.densities])
    return h_avg_out, h_in, h_out, h_env


def hsieh_wilde_rates(ch, ens):
    """Bits and qubits generated, and ebits consumed, per channel use.

    The classical rate is the Holevo quantity ``H(N(rho)) - sum p H(N(rho_x))``;
    with it the protocol's point ``(bits, qubits, -ebits)`` sits on the
    corner where the ``C + 2Q`` and ``C + Q + E`` bounds are both tight.
    """
    h_avg_out, h_in, h_out, h_env = _entropies(ch, ens)
    p = ens.weights
    bits = h_avg_out - p @ h_out
    qubits = p @ (h_in + h_out - h_env) / 2
    ebits = p @ (h_in + h_env - h_out) / 2
    return RateFormulas(float(bits), float(qubits), float(ebits))


def cqe_region_bounds_fd(ch, ens):
    """Right-hand sides of the C + 2Q, Q + E and C + Q + E inequalities."""
    h_avg_out, h_in, h_out, h_env = _entropies(ch, ens)
    p = ens.weights
    b1 = h_avg_out + p @ (h_in - h_env)
    b2 = p @ (h_out - h_env)
    b3 = h_avg_out - p @ h_env
    return BoundTriple(float(b1), float(b2), float(b3))


def _pairs(arr):
    arr = np.asarray(arr, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in arr]


def _from_pairs(pairs, shape):
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DomainError("complex entries must be [re, im] pairs")
    z = arr[:, 0] + 1j * arr[:, 1]
    if z.size != int(np.prod(shape)):
        raise DomainError(f"expected {int(np.prod(shape))} entries, got {z.size}")
    return z.reshape(shape)


def instance_to_dict(ch, ens):
    entries = []
    for w, s in zip(ens.weights, ens.states):
        s = np.asarray(s)
        key = "state" if s.ndim == 1 else "density"
        entries.append({"weight": float(w), key: _pairs(s)})
    return {
        "d_in": ch.d_in,
        "d_out": ch.d_out,
        "kraus": [_pairs(k) for k in ch.kraus],
        "ensemble": entries,
    }


def instance_from_dict(doc):
    try:
        d_in, d_out = int(doc["d_in"]), int(doc["d_out"])
        kraus = [_from_pairs(k, (d_out, d_in)) for k in doc["kraus"]]
        weights, states = [], []
        for entry in doc["ensemble"]:
            weights.append(float(entry["weight"]))
            if "state" in entry:
                states.append(_from_pairs(entry["state"], (d_in,)))
            else:
                states.append(_from_pairs(entry["density"], (d_in, d_in)))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed instance document: {exc}") from exc
    return FDChannel(kraus), FDEnsemble(np.array(weights), states)


def load_instance(path):
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def dump_instance(ch, ens, path):
    with open(path, "w") as fh:
        json.dump(instance_to_dict(ch, ens), fh, indent=2)
