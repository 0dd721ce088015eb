import mpmath as mp
import numpy as np
import pytest


def g_mp(n, dps=50):
    """Thermal entropy from the unrearranged closed form in extended precision."""
    with mp.workdps(dps):
        n = mp.mpf(n)
        if n == 0:
            return 0.0
        return float((n + 1) * mp.log(n + 1, 2) - n * mp.log(n, 2))


def g_inverse_bisect(h, lo=0.0, hi=None, iters=200):
    """Plain bisection on the extended-precision closed form."""
    with mp.workdps(50):
        h = mp.mpf(h)
        lo = mp.mpf(lo)
        hi = mp.mpf(2) ** h if hi is None else mp.mpf(hi)

        def f(n):
            return -h if n == 0 else (n + 1) * mp.log(n + 1, 2) - n * mp.log(n, 2) - h

        for _ in range(iters):
            mid = (lo + hi) / 2
            if f(mid) < 0:
                lo = mid
            else:
                hi = mid
        return float((lo + hi) / 2)


def random_channel(rng, d_in, d_out, n_kraus):
    """Kraus operators sliced out of a Haar-ish random isometry."""
    z = rng.normal(size=(d_out * n_kraus, d_in)) + 1j * rng.normal(size=(d_out * n_kraus, d_in))
    v, _ = np.linalg.qr(z)
    return [v[k * d_out:(k + 1) * d_out] for k in range(n_kraus)]


def random_density(rng, d, rank=None):
    rank = rank or d
    z = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = z @ z.conj().T
    return rho / np.trace(rho)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE = pytest.StashKey()


@pytest.fixture
def verdict(request, capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
