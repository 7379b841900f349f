import numpy as np
import pytest

from ftrl_exploit import entropic, euclidean, tsallis


@pytest.fixture(params=["entropic", "euclidean", "tsallis05", "tsallis15"])
def kernel(request):
    return {
        "entropic": entropic(),
        "euclidean": euclidean(),
        "tsallis05": tsallis(0.5),
        "tsallis15": tsallis(1.5),
    }[request.param]


def adaptive_simpson(f, a, b, tol=1e-9, max_depth=40):
    """Plain adaptive Simpson quadrature; the test-suite oracle for the
    continuous-time integrals (kept independent of the potential identity)."""

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, depth):
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        flm = f(lmid)
        frm = f(rmid)
        left = simpson(lo, mid, flo, flm, fmid)
        right = simpson(mid, hi, fmid, frm, fhi)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, mid, flo, flm, fmid, left, depth + 1) + recurse(
            mid, hi, fmid, frm, fhi, right, depth + 1
        )

    mid = 0.5 * (a + b)
    fa, fm, fb = f(a), f(mid), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, 0)


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
