"""Trade-off regions of the pure-loss channel.

Two regions are parameterized by the photon-sharing fraction ``lam``:

* CQE: classical bits ``C``, qubits ``Q`` and ebits ``E`` per use,
  generated when positive and consumed when negative.
* RPS: public bits ``R``, private bits ``P`` and secret-key bits ``S``.

At each ``lam`` a region is the polytope cut out by three inequalities whose
right-hand sides are returned as a :class:`BoundTriple`. The 2-D slices
(``cq``, ``rp`` with the third rate set to zero, and ``ce`` with ``Q = 0``)
are traced into :class:`Frontier` objects, compared against time-sharing
and composed by Minkowski summation.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .channel import ChannelSpec, PowerBudget, ea_classical_capacity, quantum_capacity
from .entropy import g_entropy
from .errors import DomainError, IncompatibleFrontiersError, InfeasibleError

CQE = "CQE"
RPS = "RPS"

# slice name -> (region, rate labels, index of each label in the rate triple)
SLICES = {
    "cq": (CQE, ("C", "Q"), (0, 1)),
    "ce": (CQE, ("C", "E"), (0, 2)),
    "rp": (RPS, ("R", "P"), (0, 1)),
}

DEFAULT_GRID = 512
MEMBERSHIP_TOL = 1e-9
# slack on the b2 >= target feasibility test so that root-refined optima count
_FEAS_TOL = 1e-10


@dataclass(frozen=True)
class BoundTriple:
    """Right-hand sides of the three region inequalities at a fixed ``lam``."""

    b1: float
    b2: float
    b3: float
    region: str = CQE

    def as_tuple(self):
        return (self.b1, self.b2, self.b3)


@dataclass(frozen=True)
class RateTriple:
    """A rate point ``(C, Q, E)`` or ``(R, P, S)``; negative entries are consumed."""

    first: float
    second: float
    third: float
    region: str = CQE

    def as_tuple(self):
        return (self.first, self.second, self.third)

    def violation(self, bounds):
        """Largest amount by which this point exceeds one of ``bounds``' inequalities."""
        if bounds.region != self.region:
            raise IncompatibleFrontiersError(f"{self.region} point checked against {bounds.region} bounds")
        x, y, z = self.as_tuple()
        if self.region == CQE:
            lhs = (x + 2 * y, y + z, x + y + z)
        else:
            lhs = (x + y, y + z, x + y + z)
        return max(l - b for l, b in zip(lhs, bounds.as_tuple()))

    def satisfies(self, bounds, tol=MEMBERSHIP_TOL):
        return self.violation(bounds) <= tol


@dataclass
class Frontier:
    """Ordered 2-D rate points with their generating parameter and bounds.

    ``rates[:, 0]`` and ``rates[:, 1]`` are the two rates named by
    ``labels``, in the signed convention (both to be maximized). ``param``
    holds ``lam`` (or the time-sharing fraction ``t``), NaN where the point
    has no single generator. ``bounds`` holds the bound triple at ``param``.
    """

    region: str
    labels: tuple
    rates: np.ndarray
    param: np.ndarray
    bounds: np.ndarray
    param_name: str = "lambda"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rates = np.asarray(self.rates, dtype=float).reshape(-1, 2)
        k = len(self.rates)
        self.param = np.asarray(self.param, dtype=float).reshape(k)
        self.bounds = np.asarray(self.bounds, dtype=float).reshape(k, 3)
        self.labels = tuple(self.labels)

    def __len__(self):
        return len(self.rates)

    @property
    def first(self):
        return self.rates[:, 0]

    @property
    def second(self):
        return self.rates[:, 1]

    def is_pareto(self):
        """True when one coordinate never decreases and the other never increases."""
        if len(self) < 2:
            return True
        d0 = np.diff(self.first)
        d1 = np.diff(self.second)
        return bool((np.all(d0 >= 0) and np.all(d1 <= 0)) or (np.all(d0 <= 0) and np.all(d1 >= 0)))

    def triple(self, i):
        """Embed point ``i`` into the full rate triple (the missing rate is zero)."""
        slot = {("C", "Q"): (0, 1), ("R", "P"): (0, 1), ("C", "E"): (0, 2)}.get(self.labels, (0, 1))
        vals = [0.0, 0.0, 0.0]
        vals[slot[0]] = float(self.rates[i, 0])
        vals[slot[1]] = float(self.rates[i, 1])
        return RateTriple(*vals, region=self.region)

    def bound_triple(self, i):
        return BoundTriple(*map(float, self.bounds[i]), region=self.region)


def _region_bounds(region, eta, ns, lam):
    """Vectorized bound triples; ``lam`` may be a scalar or an array."""
    lam = np.asarray(lam, dtype=float)
    if np.any((lam < 0) | (lam > 1)) or not np.all(np.isfinite(lam)):
        raise DomainError(f"sharing parameter must lie in [0, 1], got {lam!r}")
    lam_ns = lam * ns
    g_env = g_entropy((1.0 - eta) * lam_ns)
    g_out = g_entropy(eta * ns)
    b2 = g_entropy(eta * lam_ns) - g_env
    b3 = g_out - g_env
    if region == CQE:
        b1 = g_entropy(lam_ns) + g_out - g_env
    elif region == RPS:
        b1 = np.full_like(b2, g_out) if np.ndim(b2) else g_out
    else:
        raise DomainError(f"unknown region {region!r}")
    return b1, b2, b3


def cqe_bounds(eta, ns, lam):
    """Bounds on ``C + 2Q``, ``Q + E`` and ``C + Q + E`` at sharing ``lam``."""
    eta = ChannelSpec(eta).eta
    ns = PowerBudget(ns).ns
    b1, b2, b3 = _region_bounds(CQE, eta, ns, float(lam))
    return BoundTriple(float(b1), float(b2), float(b3), CQE)


def rps_bounds(eta, ns, lam):
    """Bounds on ``R + P``, ``P + S`` and ``R + P + S`` at sharing ``lam``; ``eta = 0`` allowed."""
    eta = ChannelSpec(eta, allow_zero=True).eta
    ns = PowerBudget(ns).ns
    b1, b2, b3 = _region_bounds(RPS, eta, ns, float(lam))
    return BoundTriple(float(b1), float(b2), float(b3), RPS)


def lambda_grid(n=DEFAULT_GRID, decades=8):
    """``lam = 0`` followed by ``n`` log-spaced points in ``[10**-decades, 1]``.

    Optimal fractions at large photon numbers are small, which a uniform grid
    would under-resolve.
    """
    if n < 2:
        raise DomainError(f"grid needs at least 2 points, got {n}")
    return np.concatenate([[0.0], np.logspace(-decades, 0.0, n)])


def _resolve_slice(slice_):
    key = {"CQE": "cq", "RPS": "rp"}.get(slice_, slice_)
    if key not in SLICES:
        raise DomainError(f"unknown slice {slice_!r}; expected one of {sorted(SLICES)}")
    return key


def _validated(slice_, eta, ns):
    region = SLICES[slice_][0]
    return ChannelSpec(eta, allow_zero=region == RPS).eta, PowerBudget(ns).ns


def _slice_value(slice_, b1, b2, b3, target):
    """Best first rate at this bound triple given the second rate, or -inf if infeasible.

    ``target`` is Q (cq), P (rp) or the entanglement consumption -E (ce).
    """
    if slice_ == "cq":
        val = np.minimum(b1 - 2 * target, b3 - target)
        ok = b2 >= target - _FEAS_TOL
    elif slice_ == "rp":
        val = np.minimum(b1, b3) - target
        ok = b2 >= target - _FEAS_TOL
    else:
        val = np.minimum(b1, b3 + target)
        ok = b2 >= -target - _FEAS_TOL
    return np.where(ok, val, -np.inf)


def max_first_given_second(slice_, eta, ns, target, grid=DEFAULT_GRID):
    """Largest first rate on a slice when the second rate is pinned to ``target``.

    For ``cq`` this is the largest C at qubit rate Q = target (E = 0), for
    ``rp`` the largest R at P = target (S = 0), and for ``ce`` the largest C
    when ``target`` ebits are consumed (Q = 0). The maximum over ``lam`` is
    located on :func:`lambda_grid` and then refined in the neighbouring
    cells, by root finding on the feasibility edge ``b2(lam) = target`` when
    it is active and by bounded Brent search otherwise.

    Returns:
        (rate, lam) with ``lam`` accurate to about 1e-7.

    Raises:
        InfeasibleError: the target exceeds what any ``lam`` supports.
    """
    slice_ = _resolve_slice(slice_)
    eta, ns = _validated(slice_, eta, ns)
    region = SLICES[slice_][0]
    target = float(target)
    if not math.isfinite(target) or target < 0:
        raise DomainError(f"target rate must be finite and nonnegative, got {target!r}")

    lam = lambda_grid(grid)
    b1, b2, b3 = _region_bounds(region, eta, ns, lam)
    if slice_ != "ce" and target > max(b2.max(), 0.0) + _FEAS_TOL:
        raise InfeasibleError(f"target {target} exceeds the largest achievable {SLICES[slice_][1][1]} rate {max(b2.max(), 0.0)}")
    vals = _slice_value(slice_, b1, b2, b3, target)
    i = int(np.argmax(vals))
    if not np.isfinite(vals[i]):
        raise InfeasibleError(f"target {target} is not achievable for eta={eta}, ns={ns}")

    def value(l):
        l = min(max(l, 0.0), 1.0)
        return float(_slice_value(slice_, *_region_bounds(region, eta, ns, l), target))

    best_val, best_lam = float(vals[i]), float(lam[i])
    lo = lam[i - 1] if i > 0 else lam[i]
    hi = lam[i + 1] if i + 1 < len(lam) else lam[i]

    if i > 0 and not np.isfinite(vals[i - 1]) and slice_ != "ce":
        # Feasibility edge between lam[i-1] and lam[i]: land on it from the feasible side.
        edge = brentq(lambda l: _region_bounds(region, eta, ns, l)[1] - target, lo, lam[i], xtol=1e-15, rtol=1e-15)
        while not np.isfinite(value(edge)) and edge < lam[i]:
            edge = np.nextafter(edge, 2.0)
        lo = edge
        v = value(edge)
        if v > best_val:
            best_val, best_lam = v, float(edge)

    if hi > lo:
        penalty = 1e300
        res = minimize_scalar(
            lambda l: -value(l) if np.isfinite(value(l)) else penalty,
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-9},
        )
        v = value(res.x)
        if np.isfinite(v) and v > best_val:
            best_val, best_lam = v, float(res.x)
    return best_val, best_lam


def _pareto_mask(points):
    """Mask of points not dominated (>= in both coordinates, != somewhere) by another point."""
    k = len(points)
    order = np.lexsort((-points[:, 1], -points[:, 0]))
    keep = np.zeros(k, dtype=bool)
    best = -np.inf
    for idx in order:
        if points[idx, 1] > best:
            keep[idx] = True
            best = points[idx, 1]
    return keep


def _weak_pareto_mask(points):
    """Mask of points not strictly dominated in both coordinates, exact duplicates dropped."""
    k = len(points)
    order = np.lexsort((-points[:, 1], -points[:, 0]))
    keep = np.zeros(k, dtype=bool)
    best_above = -np.inf  # best second rate among strictly larger first rates
    j = 0
    seen = set()
    while j < k:
        first = points[order[j], 0]
        group_end = j
        while group_end < k and points[order[group_end], 0] == first:
            group_end += 1
        group_best = -np.inf
        for idx in order[j:group_end]:
            key = (points[idx, 0], points[idx, 1])
            if points[idx, 1] >= best_above and key not in seen:
                keep[idx] = True
                seen.add(key)
            group_best = max(group_best, points[idx, 1])
        best_above = max(best_above, group_best)
        j = group_end
    return keep


def _sweep(slice_, eta, ns, grid):
    region, labels, _ = SLICES[slice_]
    meta = {"slice": slice_, "eta": eta, "ns": ns, "grid": grid}
    if ns == 0:
        return Frontier(region, labels, [[0.0, 0.0]], [0.0], [[0.0, 0.0, 0.0]], meta=meta)
    lam = lambda_grid(grid)
    b1, b2, b3 = _region_bounds(region, eta, ns, lam)
    if slice_ == "ce":
        consumption = g_entropy(lam * ns)
        first = b1
        second = -consumption
        feasible = np.ones_like(lam, dtype=bool)
    else:
        second = b2
        first = _slice_value(slice_, b1, b2, b3, b2)
        # with the third rate pinned at zero only nonnegative second rates make sense
        feasible = b2 >= 0
    pts = np.column_stack([first, second])[feasible]
    keep = _pareto_mask(pts)
    idx = np.flatnonzero(feasible)[keep]
    return Frontier(
        region,
        labels,
        np.column_stack([first, second])[idx],
        lam[idx],
        np.column_stack([b1, b2, b3])[idx],
        meta=meta,
    )


def cq_frontier(eta, ns, grid=DEFAULT_GRID):
    """Classical-quantum frontier (C, Q) with no entanglement, ordered by increasing ``lam``.

    Each ``lam`` contributes ``Q = b2`` and the largest C compatible with it;
    dominated points (all of them except ``lam = 0`` when eta <= 1/2) are
    dropped.
    """
    eta, ns = _validated("cq", eta, ns)
    return _sweep("cq", eta, ns, grid)


def rp_frontier(eta, ns, grid=DEFAULT_GRID):
    """Public-private frontier (R, P) with no secret key, ordered by increasing ``lam``."""
    eta, ns = _validated("rp", eta, ns)
    return _sweep("rp", eta, ns, grid)


def ce_frontier(eta, ns, grid=DEFAULT_GRID):
    """Entanglement-assisted classical frontier (C, E) at Q = 0.

    E is signed, so the entanglement consumption ``g(lam ns)`` appears as
    ``-E``; use :func:`consumption` for the positive value.
    """
    eta, ns = _validated("ce", eta, ns)
    return _sweep("ce", eta, ns, grid)


def consumption(frontier):
    """Entanglement (or key) consumed at each point of a signed frontier."""
    return -frontier.second


def frontier(slice_, eta, ns, grid=DEFAULT_GRID):
    slice_ = _resolve_slice(slice_)
    return {"cq": cq_frontier, "rp": rp_frontier, "ce": ce_frontier}[slice_](eta, ns, grid)


def slice_corners(slice_, eta, ns):
    """Single-task corner points that time-sharing interpolates between.

    ``cq``/``rp``: unassisted classical capacity and quantum capacity.
    ``ce``: entanglement-assisted capacity (signed E) and unassisted capacity.
    """
    slice_ = _resolve_slice(slice_)
    eta, ns = _validated(slice_, eta, ns)
    c = g_entropy(eta * ns)
    if slice_ == "ce":
        rate, cost = ea_classical_capacity(eta, ns)
        return np.array([rate, -cost]), np.array([c, 0.0])
    q = quantum_capacity(eta, ns) if eta > 0 else 0.0
    return np.array([c, 0.0]), np.array([0.0, q])


def timeshare_frontier(corner_a, corner_b, grid=101, region=CQE, labels=("C", "Q")):
    """Straight line ``t * corner_a + (1 - t) * corner_b`` for ``t`` from 0 to 1.

    Each block of channel uses spends the full photon budget while active.
    """
    a = np.asarray(corner_a, dtype=float)[:2]
    b = np.asarray(corner_b, dtype=float)[:2]
    t = np.linspace(0.0, 1.0, grid)
    rates = t[:, None] * a + (1.0 - t)[:, None] * b
    nan = np.full((grid, 3), np.nan)
    return Frontier(region, labels, rates, t, nan, param_name="t", meta={"baseline": "timeshare"})


def timeshare_first_at(corner_a, corner_b, second):
    """First rate on the time-sharing line at a given second rate."""
    a = np.asarray(corner_a, dtype=float)[:2]
    b = np.asarray(corner_b, dtype=float)[:2]
    if a[1] == b[1]:
        raise DomainError("corners share the same second rate; time-sharing line is not a graph over it")
    t = (second - b[1]) / (a[1] - b[1])
    if t < -1e-12 or t > 1 + 1e-12:
        raise InfeasibleError(f"second rate {second} lies outside the time-sharing segment")
    t = min(max(t, 0.0), 1.0)
    return float(t * a[0] + (1.0 - t) * b[0])


def timeshare_realloc_frontier(slice_, eta, ns, grid=64):
    """Time-sharing that may also split the photon budget unevenly between blocks.

    Block a runs a fraction ``t`` of the time with ``s * ns / t`` photons and
    block b the rest with ``(1 - s) * ns / (1 - t)``, so the average stays
    ``ns``. The (t, s) grid is sampled and Pareto-pruned, giving a stricter
    baseline than :func:`timeshare_frontier`.
    """
    slice_ = _resolve_slice(slice_)
    eta, ns = _validated(slice_, eta, ns)
    region, labels, _ = SLICES[slice_]
    t = np.linspace(0.0, 1.0, grid)
    s = np.linspace(0.0, 1.0, grid)
    pts, ts = [], []
    for ti in t:
        for si in s:
            if (ti == 0 and si > 0) or (ti == 1 and si < 1):
                continue
            n_a = si * ns / ti if ti > 0 else 0.0
            n_b = (1 - si) * ns / (1 - ti) if ti < 1 else 0.0
            a, _ = slice_corners(slice_, eta, n_a)
            _, b = slice_corners(slice_, eta, n_b)
            pts.append(ti * a + (1 - ti) * b)
            ts.append(ti)
    pts = np.array(pts)
    keep = _pareto_mask(pts)
    pts, ts = pts[keep], np.array(ts)[keep]
    order = np.argsort(pts[:, 1], kind="stable")
    nan = np.full((len(order), 3), np.nan)
    return Frontier(region, labels, pts[order], ts[order], nan, param_name="t", meta={"baseline": "realloc"})


@dataclass(frozen=True)
class GainMetrics:
    """Per-coordinate comparison of a trade-off point with a baseline point.

    ``difference`` is ``tradeoff - baseline``. ``db_decrease`` is
    ``10 log10(baseline / tradeoff)``, positive when the trade-off point is
    lower, and None where either rate is not strictly positive.
    """

    difference: tuple
    db_decrease: tuple


def gain_metrics(tradeoff_point, baseline_point):
    tp = [float(x) for x in tradeoff_point]
    bp = [float(x) for x in baseline_point]
    if len(tp) != len(bp):
        raise DomainError("points must have the same number of coordinates")
    diff = tuple(a - b for a, b in zip(tp, bp))
    db = tuple(10.0 * math.log10(b / a) if a > 0 and b > 0 else None for a, b in zip(tp, bp))
    return GainMetrics(diff, db)


def minkowski_sum(a, b):
    """Minkowski sum of two sampled frontiers in the same rate plane.

    All pairwise sums are formed and the points strictly dominated in both
    coordinates are removed, so flat edges of the sum survive. The result is
    ordered by increasing second rate.
    """
    if a.region != b.region or a.labels != b.labels:
        raise IncompatibleFrontiersError(f"cannot add a {a.region}{a.labels} frontier to a {b.region}{b.labels} frontier")
    sums = (a.rates[:, None, :] + b.rates[None, :, :]).reshape(-1, 2)
    pts = sums[_weak_pareto_mask(sums)]
    order = np.lexsort((-pts[:, 0], pts[:, 1]))
    pts = pts[order]
    k = len(pts)
    return Frontier(
        a.region,
        a.labels,
        pts,
        np.full(k, np.nan),
        np.full((k, 3), np.nan),
        meta={"minkowski": True},
    )
