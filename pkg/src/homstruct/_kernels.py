"""Hot enumeration kernels, compiled with numba when available.

Two bulk operations dominate wall time: the per-mask regularity prefilter the
digraph search runs over 2^(n^2) adjacency bitmasks, and the exhaustive
decompose/recompose identity scan over all reduced fractions up to a
denominator bound. Both ship in two implementations with identical outputs:

* ``numpy``: vectorized reference path, always available;
* ``numba``: scalar jitted loops, used by default when numba imports.

Selection order: explicit ``backend=`` argument, then the HOMSTRUCT_KERNEL
environment variable, then numba-if-importable. ``benchmarks/bench_kernels.py``
compares the two.

Digraph masks put arrow i -> j at bit i*n + j. Stage codes per mask:

* 0: some two vertices of equal loop status differ in (out-degree, in-degree);
* 1: degrees regular per loop class, but reciprocated-edge or looped-neighbor
  counts are not;
* 2: all of the above statistics constant per loop class.

Each statistic is preserved by automorphisms and constant on the orbit of a
vertex, and one-point homogeneity forces same-loop-status vertices into one
orbit, so codes below 2 can never reject a homogeneous digraph.
"""

from __future__ import annotations

import os
from math import gcd

import numpy as np

from .errors import InputError

_ENV_FLAG = "HOMSTRUCT_KERNEL"
_BACKENDS = ("numba", "numpy")


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def available_backends() -> tuple[str, ...]:
    return _BACKENDS if _numba_available() else ("numpy",)


def resolve_backend(backend: str | None = None) -> str:
    choice = backend or os.environ.get(_ENV_FLAG, "").strip().lower() or None
    if choice is None:
        return "numba" if _numba_available() else "numpy"
    if choice not in _BACKENDS:
        raise InputError(f"unknown kernel backend {choice!r}; expected one of {_BACKENDS}")
    if choice == "numba" and not _numba_available():
        raise InputError("numba backend requested but numba is not importable")
    return choice


# ---------------------------------------------------------------------------
# numpy reference implementations


def _popcount_table(n: int) -> np.ndarray:
    return np.array([bin(x).count("1") for x in range(1 << n)], dtype=np.int64)


def _stage_codes_numpy(masks: np.ndarray, n: int) -> np.ndarray:
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    b = masks.shape[0]
    full = (1 << n) - 1
    pop = _popcount_table(n)
    rows = [(masks >> (i * n)) & full for i in range(n)]
    cols = []
    for i in range(n):
        c = np.zeros(b, dtype=np.int64)
        for j in range(n):
            c |= ((masks >> (j * n + i)) & 1) << j
        cols.append(c)
    loop = [(rows[i] >> i) & 1 for i in range(n)]
    loopmask = np.zeros(b, dtype=np.int64)
    for i in range(n):
        loopmask |= loop[i] << i
    out = [pop[rows[i]] for i in range(n)]
    inn = [pop[cols[i]] for i in range(n)]
    recip = [pop[rows[i] & cols[i]] for i in range(n)]
    outl = [pop[rows[i] & loopmask] for i in range(n)]
    innl = [pop[cols[i] & loopmask] for i in range(n)]
    bad1 = np.zeros(b, dtype=bool)
    bad2 = np.zeros(b, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            same = loop[i] == loop[j]
            bad1 |= same & ((out[i] != out[j]) | (inn[i] != inn[j]))
            bad2 |= same & (
                (recip[i] != recip[j]) | (outl[i] != outl[j]) | (innl[i] != innl[j])
            )
    codes = np.full(b, 2, dtype=np.uint8)
    codes[bad2] = 1
    codes[bad1] = 0
    return codes


def _roundtrip_numpy(max_den: int) -> tuple[int, int]:
    from .cyclic import factorize

    checked = 0
    failures = 0
    for d in range(1, max_den + 1):
        a = np.arange(d, dtype=np.int64)
        reduced = np.gcd(a, d) == 1
        total = np.zeros(d, dtype=np.int64)
        for p, e in factorize(d):
            q = p**e
            rest = d // q
            inv = pow(rest % q, -1, q)
            total += ((a * inv) % q) * rest
        bad = ((total - a) % d != 0) & reduced
        checked += int(reduced.sum())
        failures += int(bad.sum())
    return checked, failures


# ---------------------------------------------------------------------------
# numba implementations (built lazily so importing the package stays cheap)

_numba_cache: dict[str, object] = {}


def _numba_fns():
    if _numba_cache:
        return _numba_cache
    from numba import njit

    @njit(cache=True)
    def stage_codes(masks, n, out):
        for idx in range(masks.shape[0]):
            m = masks[idx]
            full = (np.int64(1) << n) - 1
            loopmask = np.int64(0)
            rows = np.empty(n, np.int64)
            cols = np.empty(n, np.int64)
            for i in range(n):
                rows[i] = (m >> (i * n)) & full
                if (rows[i] >> i) & 1:
                    loopmask |= np.int64(1) << i
            for i in range(n):
                c = np.int64(0)
                for j in range(n):
                    c |= ((m >> (j * n + i)) & 1) << j
                cols[i] = c
            stats = np.empty((n, 6), np.int64)
            for i in range(n):
                stats[i, 0] = (rows[i] >> i) & 1
                r = rows[i]
                c = np.int64(0)
                while r:
                    r &= r - 1
                    c += 1
                stats[i, 1] = c
                r = cols[i]
                c = np.int64(0)
                while r:
                    r &= r - 1
                    c += 1
                stats[i, 2] = c
                r = rows[i] & cols[i]
                c = np.int64(0)
                while r:
                    r &= r - 1
                    c += 1
                stats[i, 3] = c
                r = rows[i] & loopmask
                c = np.int64(0)
                while r:
                    r &= r - 1
                    c += 1
                stats[i, 4] = c
                r = cols[i] & loopmask
                c = np.int64(0)
                while r:
                    r &= r - 1
                    c += 1
                stats[i, 5] = c
            code = np.uint8(2)
            for i in range(n):
                for j in range(i + 1, n):
                    if stats[i, 0] == stats[j, 0]:
                        if stats[i, 1] != stats[j, 1] or stats[i, 2] != stats[j, 2]:
                            code = np.uint8(0)
                        elif code == 2 and (
                            stats[i, 3] != stats[j, 3]
                            or stats[i, 4] != stats[j, 4]
                            or stats[i, 5] != stats[j, 5]
                        ):
                            code = np.uint8(1)
            out[idx] = code

    @njit(cache=True)
    def roundtrip(max_den):
        checked = 0
        failures = 0
        for d in range(1, max_den + 1):
            ppows = np.empty(16, np.int64)
            invs = np.empty(16, np.int64)
            k = 0
            x = d
            p = 2
            while p * p <= x:
                if x % p == 0:
                    q = 1
                    while x % p == 0:
                        x //= p
                        q *= p
                    ppows[k] = q
                    k += 1
                p += 1 if p == 2 else 2
            if x > 1:
                ppows[k] = x
                k += 1
            for t in range(k):
                q = ppows[t]
                rest = (d // q) % q
                # extended euclid for rest^(-1) mod q
                r0, r1 = q, rest
                s0, s1 = 0, 1
                while r1:
                    qq = r0 // r1
                    r0, r1 = r1, r0 - qq * r1
                    s0, s1 = s1, s0 - qq * s1
                invs[t] = s0 % q
            for a in range(d):
                x0, x1 = a, d
                while x1:
                    x0, x1 = x1, x0 % x1
                if x0 != 1 and d > 1:
                    continue
                total = 0
                for t in range(k):
                    q = ppows[t]
                    rest = d // q
                    total += ((a * invs[t]) % q) * rest
                checked += 1
                if (total - a) % d != 0:
                    failures += 1
        return checked, failures

    _numba_cache["stage_codes"] = stage_codes
    _numba_cache["roundtrip"] = roundtrip
    return _numba_cache


# ---------------------------------------------------------------------------
# public dispatchers


def stage_codes(masks: np.ndarray, n: int, backend: str | None = None) -> np.ndarray:
    """Per-mask prefilter codes (0/1/2, see module docstring) for n-vertex digraphs."""
    if not (1 <= n <= 6):
        raise InputError(f"mask kernels support 1..6 vertices, got {n}")
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    if resolve_backend(backend) == "numba":
        out = np.empty(masks.shape[0], dtype=np.uint8)
        _numba_fns()["stage_codes"](masks, n, out)
        return out
    return _stage_codes_numpy(masks, n)


def roundtrip_scan(max_den: int, backend: str | None = None) -> tuple[int, int]:
    """Exhaustive prime-power decompose/recompose identity over all reduced
    fractions with denominator <= max_den; returns (checked, failures)."""
    if max_den < 1:
        raise InputError("max_den must be positive")
    if resolve_backend(backend) == "numba":
        checked, failures = _numba_fns()["roundtrip"](max_den)
        return int(checked), int(failures)
    return _roundtrip_numpy(max_den)
