"""Stern's diatomic sequence a(n) and Northshield's analogue b(n) over Z[√2].

Single terms are computed by digit descent in O(log n). Ranges are produced
by :func:`northshield_range` / :func:`stern_range`, which build the values on
``[lo, hi]`` from the values on ``[lo // k, hi // k + 1]`` so any sub-range can
be generated independently (and hence in parallel).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .quadfield import ONE, ROOT2, SILVER, SQRT2, ZERO, QuadInt, qi_conj, qi_pow, to_float

ALPHA = math.log(1.0 + SQRT2) / math.log(3.0)
"""Growth exponent log₃(√2+1) of Northshield's sequence."""

PHI = (1.0 + math.sqrt(5.0)) / 2.0
LOG2_PHI = math.log2(PHI)
STERN_CONSTANT = 3.0**LOG2_PHI / math.sqrt(5.0)
"""limsup a(n)/n^{log₂φ}."""

NORTHSHIELD_BRUTE_CAP = 9
"""Largest interval exponent n accepted by :func:`interval_max_bruteforce`."""
NORTHSHIELD_SCAN_CAP = 3**9
STERN_SCAN_CAP = 2**20


class CapExceeded(ValueError):
    """A brute-force request exceeds its configured cap."""

    def __init__(self, what: str, requested: int, cap: int) -> None:
        super().__init__(f"{what}: requested {requested} exceeds cap {cap} (raise the cap explicitly)")
        self.requested = requested
        self.cap = cap


@dataclass(frozen=True)
class SeqPoint:
    index: int
    value: QuadInt


@dataclass(frozen=True)
class IntervalMax:
    n: int
    max_value: QuadInt
    first_argmax: int

    def to_json(self) -> dict:
        return {"n": self.n, "max_value": self.max_value.to_json(), "first_argmax": self.first_argmax}


@dataclass
class RatioScan:
    lo: int
    hi: int
    exponent: float
    running_max: float
    argmax: int
    samples: list[tuple[int, float]] = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        d["samples"] = [list(s) for s in self.samples]
        return d

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "ratio"])
        for i, r in self.samples:
            writer.writerow([i, f"{r:.12g}"])
        return buf.getvalue()


def interval_max_csv(rows: list[IntervalMax]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "max_a", "max_b", "argmax"])
    for r in rows:
        writer.writerow([r.n, r.max_value.a, r.max_value.b, r.first_argmax])
    return buf.getvalue()


def interval_max_json(rows: list[IntervalMax]) -> str:
    return json.dumps([r.to_json() for r in rows])


# -- single terms -----------------------------------------------------------


def stern(n: int) -> int:
    """a(n) by binary descent on the pair (a(m), a(m+1))."""
    if n < 0:
        raise ValueError(f"stern index must be nonnegative, got {n}")
    x, y = 0, 1  # (a(0), a(1))
    for bit in bin(n)[2:]:
        if bit == "0":
            y = x + y
        else:
            x = x + y
    return x


def northshield(n: int) -> QuadInt:
    """b(n) by ternary descent on the pair (b(m), b(m+1))."""
    if n < 0:
        raise ValueError(f"northshield index must be nonnegative, got {n}")
    x, y = ZERO, ONE
    for digit in _ternary_msb(n):
        if digit == 0:
            x, y = x, ROOT2 * x + y
        elif digit == 1:
            x, y = ROOT2 * x + y, x + ROOT2 * y
        else:
            x, y = x + ROOT2 * y, y
    return x


def _ternary_msb(n: int) -> list[int]:
    out = []
    while n:
        n, r = divmod(n, 3)
        out.append(r)
    out.reverse()
    return out


# -- ranges -----------------------------------------------------------------

_RANGE_DIRECT = 64


def northshield_range(lo: int, hi: int) -> list[tuple[int, int]]:
    """Coefficient pairs ``(a, b)`` of b(m) for m in ``[lo, hi]``."""
    if hi < lo:
        return []
    if hi - lo < _RANGE_DIRECT or lo < 3:
        out = []
        for m in range(lo, hi + 1):
            v = northshield(m)
            out.append((v.a, v.b))
        return out
    base = lo // 3
    parent = northshield_range(base, hi // 3 + 1)
    out = []
    for m in range(lo, hi + 1):
        q, r = divmod(m, 3)
        pa, pb = parent[q - base]
        if r == 0:
            out.append((pa, pb))
            continue
        qa, qb = parent[q + 1 - base]
        if r == 1:
            # √2·b(q) + b(q+1)
            out.append((2 * pb + qa, pa + qb))
        else:
            # b(q) + √2·b(q+1)
            out.append((pa + 2 * qb, pb + qa))
    return out


def stern_range(lo: int, hi: int) -> list[int]:
    """a(m) for m in ``[lo, hi]``."""
    if hi < lo:
        return []
    if hi - lo < _RANGE_DIRECT or lo < 2:
        return [stern(m) for m in range(lo, hi + 1)]
    base = lo // 2
    parent = stern_range(base, hi // 2 + 1)
    out = []
    for m in range(lo, hi + 1):
        q, r = divmod(m, 2)
        if r == 0:
            out.append(parent[q - base])
        else:
            out.append(parent[q - base] + parent[q + 1 - base])
    return out


# -- interval maxima --------------------------------------------------------


def interval_max_bruteforce(n: int, cap: int = NORTHSHIELD_BRUTE_CAP) -> IntervalMax:
    """Exhaustive exact maximum of b over ``[3^(n-1), 3^n]``."""
    if n < 1:
        raise ValueError(f"interval exponent must be positive, got {n}")
    if n > cap:
        raise CapExceeded("interval_max_bruteforce exponent", n, cap)
    lo = 3 ** (n - 1)
    best, arg = None, lo
    for offset, (a, b) in enumerate(northshield_range(lo, 3**n)):
        v = QuadInt(a, b)
        if best is None or v > best:
            best, arg = v, lo + offset
    return IntervalMax(n, best, arg)


def interval_max_closed_form(n: int) -> IntervalMax:
    """``((√2+1)^n + (√2−1)^n)/2`` at ``(3^n+1)/2``."""
    if n < 1:
        raise ValueError(f"interval exponent must be positive, got {n}")
    p = qi_pow(SILVER, n)
    # (√2−1)^n = (−1)^n · conj((√2+1)^n)
    q = qi_conj(p) if n % 2 == 0 else -qi_conj(p)
    s = p + q
    assert s.a % 2 == 0 and s.b % 2 == 0
    return IntervalMax(n, QuadInt(s.a // 2, s.b // 2), (3**n + 1) // 2)


# -- ratio scans ------------------------------------------------------------


def _merge_scans(parts: list[RatioScan], lo: int, hi: int, exponent: float) -> RatioScan:
    best = parts[0]
    samples: list[tuple[int, float]] = []
    for p in parts:
        samples.extend(p.samples)
        # strict > keeps the earlier (smaller) index on ties
        if p.running_max > best.running_max:
            best = p
    return RatioScan(lo, hi, exponent, best.running_max, best.argmax, samples)


def _scan_chunk(kind: str, lo: int, hi: int, decimation: int, origin: int) -> RatioScan:
    idx = np.arange(lo, hi + 1, dtype=np.float64)
    if kind == "northshield":
        pairs = northshield_range(lo, hi)
        a = np.array([p[0] for p in pairs], dtype=np.float64)
        b = np.array([p[1] for p in pairs], dtype=np.float64)
        ratios = 2.0 * (a + b * SQRT2) / (2.0 * idx) ** ALPHA
        exponent = ALPHA
    else:
        vals = np.array(stern_range(lo, hi), dtype=np.float64)
        ratios = vals / idx**LOG2_PHI
        exponent = LOG2_PHI
    k = int(np.argmax(ratios))  # first occurrence on ties
    start = (-(lo - origin)) % decimation
    samples = [(lo + i, float(ratios[i])) for i in range(start, len(ratios), decimation)]
    return RatioScan(lo, hi, exponent, float(ratios[k]), lo + k, samples)


def _ratio_scan(kind: str, lo: int, hi: int, decimation: int, workers: int, chunk: int) -> RatioScan:
    if lo < 2 or hi < lo:
        raise ValueError(f"ratio scan needs 2 <= lo <= hi, got lo={lo}, hi={hi}")
    if decimation < 1:
        raise ValueError(f"decimation must be positive, got {decimation}")
    bounds = [(s, min(s + chunk - 1, hi)) for s in range(lo, hi + 1, chunk)]
    exponent = ALPHA if kind == "northshield" else LOG2_PHI
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_scan_chunk, kind, s, e, decimation, lo) for s, e in bounds]
            parts = [f.result() for f in futures]
    else:
        parts = [_scan_chunk(kind, s, e, decimation, lo) for s, e in bounds]
    return _merge_scans(parts, lo, hi, exponent)


def ratio_scan_northshield(
    lo: int, hi: int, decimation: int = 1, workers: int = 1, chunk: int = 1 << 18
) -> RatioScan:
    """Running maximum of ``2 b(m) / (2m)^α`` for m in ``[lo, hi]``, α = log₃(√2+1)."""
    return _ratio_scan("northshield", lo, hi, decimation, workers, chunk)


def ratio_scan_stern(
    lo: int, hi: int, decimation: int = 1, workers: int = 1, chunk: int = 1 << 18
) -> RatioScan:
    """Running maximum of ``a(m) / m^{log₂φ}`` for m in ``[lo, hi]``."""
    return _ratio_scan("stern", lo, hi, decimation, workers, chunk)


def witness_index(n: int) -> int:
    return (3 ** (n + 1) + 1) // 2


def witness_ratio(n: int) -> float:
    """``2 b(m_n) / (2 m_n)^α`` at ``m_n = (3^(n+1)+1)/2`` using the closed-form b."""
    if n < 1:
        raise ValueError(f"witness exponent must be positive, got {n}")
    im = interval_max_closed_form(n + 1)
    m = im.first_argmax
    # log form keeps (2m)^α finite for large n
    return math.exp(math.log(2.0 * to_float(im.max_value)) - ALPHA * math.log(2 * m))


def default_workers() -> int:
    return os.cpu_count() or 1
