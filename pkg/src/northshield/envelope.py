"""The piecewise-linear envelope h through (0, 0) and (3^n/2, (√2+1)^n/2), n ≥ 1.

``h`` is evaluated exactly in Q(√2) for rational arguments. The checks in this
module compare Northshield's sequence against ``h`` over finite ranges and
test the algebraic identities the maximal-order argument rests on. Only
:func:`H` and :func:`H_grid` use floating point, because they involve the
irrational exponent log₃(√2+1).
"""

from __future__ import annotations

import csv
import io
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_DOWN, Decimal
from fractions import Fraction
from functools import lru_cache

from .quadfield import ONE, ROOT2, SILVER, QuadInt, QuadRat, qi_pow, qr_cmp, to_float
from .sequences import ALPHA, interval_max_closed_form, northshield, northshield_range

Rat = Fraction | int


@dataclass(frozen=True)
class Breakpoint:
    n: int
    x: Fraction
    y: QuadRat


@dataclass(frozen=True)
class Segment:
    n: int
    slope: QuadRat
    intercept: QuadRat
    x_lo: Fraction
    x_hi: Fraction

    def __call__(self, x: Rat) -> QuadRat:
        return self.slope * Fraction(x) + self.intercept


@lru_cache(maxsize=None)
def breakpoint(n: int) -> Breakpoint:
    if n < 0:
        raise ValueError(f"breakpoint index must be nonnegative, got {n}")
    if n == 0:
        return Breakpoint(0, Fraction(0), QuadRat(0))
    return Breakpoint(n, Fraction(3**n, 2), QuadRat(qi_pow(SILVER, n), 2))


@lru_cache(maxsize=None)
def segment(n: int) -> Segment:
    """Chord from breakpoint ``n`` to ``n+1`` (segment 0 starts at the origin)."""
    p, q = breakpoint(n), breakpoint(n + 1)
    slope = (q.y - p.y) / (q.x - p.x)
    intercept = p.y - slope * p.x
    return Segment(n, slope, intercept, p.x, q.x)


def segment_closed_form(n: int) -> tuple[QuadRat, QuadRat]:
    """Slope ``(√2/2)((√2+1)/3)^n`` and intercept ``(√2+1)^n (2−√2)/4`` for n ≥ 1."""
    p = qi_pow(SILVER, n)
    slope = QuadRat(ROOT2 * p, 2 * 3**n)
    intercept = QuadRat(p * QuadInt(2, -1), 4)
    return slope, intercept


def segment_index(x: Rat) -> int:
    """Index of the segment containing ``x``; a breakpoint belongs to its left segment."""
    x = Fraction(x)
    if x < 0:
        raise ValueError(f"h is defined on [0, inf), got x={x}")
    two_x = 2 * x
    if two_x <= 3:
        return 0
    # smallest n >= 1 with 2x <= 3^(n+1)
    n, p = 1, 9
    while p < two_x:
        n += 1
        p *= 3
    return n


def segment_of(x: Rat) -> Segment:
    return segment(segment_index(x))


def h_exact(x: Rat) -> QuadRat:
    return segment_of(x)(x)


def floor_log3(m: int) -> int:
    """``⌊log₃ m⌋`` by integer comparison."""
    if m < 1:
        raise ValueError(f"log3 needs m >= 1, got {m}")
    k, p = 0, 3
    while p <= m:
        k += 1
        p *= 3
    return k


# -- Lemma: b(m) <= h(m) + c⌊log₃ m⌋ ------------------------------------------

COEFFICIENTS = {"silver": QuadRat(SILVER), "one": QuadRat(ONE)}


@dataclass
class LemmaReport:
    name: str
    lo: int
    hi: int
    checked: int
    violations: list[tuple[int, QuadRat, QuadRat]] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "pass" if not self.violations else "fail"

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self, limit: int = 100) -> dict:
        return {
            "name": self.name,
            "range": [self.lo, self.hi],
            "count": self.checked,
            "status": self.status,
            "violation_count": len(self.violations),
            "violations": [
                {"index": m, "lhs": lhs.to_json(), "rhs": rhs.to_json()} for m, lhs, rhs in self.violations[:limit]
            ],
        }

    def to_text(self, limit: int = 20) -> str:
        lines = [
            f"{self.name}: m in [{self.lo}, {self.hi}], {self.checked} checked, "
            f"{len(self.violations)} violations -> {self.status.upper()}"
        ]
        for m, lhs, rhs in self.violations[:limit]:
            lines.append(f"  m={m}: b(m) = {lhs} ({to_float(lhs):.6f}) > {rhs} ({to_float(rhs):.6f})")
        return "\n".join(lines)


def _lemma22_chunk(lo: int, hi: int, coefficient: str) -> list[tuple[int, QuadRat, QuadRat]]:
    c = COEFFICIENTS[coefficient]
    bad = []
    for offset, (a, b) in enumerate(northshield_range(lo, hi)):
        m = lo + offset
        lhs = QuadRat(QuadInt(a, b))
        rhs = h_exact(m) + c * floor_log3(m)
        if qr_cmp(lhs, rhs) > 0:
            bad.append((m, lhs, rhs))
    return bad


def lemma22_check(m_lo: int, m_hi: int, coefficient: str = "silver", workers: int = 1) -> LemmaReport:
    """Exact check of ``b(m) <= h(m) + c⌊log₃ m⌋`` for m in ``[m_lo, m_hi]``.

    ``coefficient`` is ``"silver"`` (c = √2+1) or ``"one"`` (c = 1).
    """
    if m_lo < 2:
        raise ValueError(f"the bound is stated for m >= 2 (it fails at m=1), got m_lo={m_lo}")
    if m_hi < m_lo:
        raise ValueError(f"empty range [{m_lo}, {m_hi}]")
    if coefficient not in COEFFICIENTS:
        raise ValueError(f"coefficient must be one of {sorted(COEFFICIENTS)}, got {coefficient!r}")
    chunk = 4096
    bounds = [(s, min(s + chunk - 1, m_hi)) for s in range(m_lo, m_hi + 1, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_lemma22_chunk, *zip(*bounds), [coefficient] * len(bounds)))
    else:
        parts = [_lemma22_chunk(s, e, coefficient) for s, e in bounds]
    violations = sorted((v for p in parts for v in p), key=lambda t: t[0])
    label = "b(m) <= h(m) + (√2+1)⌊log3 m⌋" if coefficient == "silver" else "b(m) <= h(m) + ⌊log3 m⌋"
    return LemmaReport(label, m_lo, m_hi, m_hi - m_lo + 1, violations)


# -- value of h at the interval-maximum location -----------------------------


@dataclass(frozen=True)
class HmnCheck:
    n: int
    h_value: QuadRat
    closed_form: QuadRat
    interval_max: QuadInt

    @property
    def identity_holds(self) -> bool:
        return self.h_value == self.closed_form

    @property
    def exceeds_max(self) -> bool:
        """closed form + (n+1) strictly above the interval maximum."""
        return qr_cmp(self.closed_form + (self.n + 1), QuadRat(self.interval_max)) > 0

    @property
    def passed(self) -> bool:
        return self.identity_holds and self.exceeds_max


def hmn_closed_form(n: int) -> QuadRat:
    """``(√2/(4·3^(n+1)) + 1/2)(√2+1)^(n+1)``."""
    c = QuadRat(ROOT2, 4 * 3 ** (n + 1)) + Fraction(1, 2)
    return c * QuadRat(qi_pow(SILVER, n + 1))


def hmn_identity_check(n: int) -> HmnCheck:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    m = Fraction(3 ** (n + 1) + 1, 2)
    return HmnCheck(n, h_exact(m), hmn_closed_form(n), interval_max_closed_form(n + 1).max_value)


# -- the gap h(3k+1) − (√2+1) h(k+1) -----------------------------------------


def gap_strip(n: int) -> range:
    """Values of k with 3k+1 in [3^n, (3^(n+1)−1)/2] and k+1 in [3^(n−1), (3^n+1)/2]."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    lo = max(-(-(3**n - 1) // 3), 3 ** (n - 1) - 1)
    hi = min(((3 ** (n + 1) - 1) // 2 - 1) // 3, (3**n + 1) // 2 - 1)
    return range(lo, hi + 1)


def gap_value(k: int) -> QuadRat:
    """``h(3k+1) − (√2+1)·h(k+1)`` exactly."""
    return h_exact(3 * k + 1) - QuadRat(SILVER) * h_exact(k + 1)


def gap_power_form(j: int) -> QuadRat:
    """``−√2((√2+1)/3)^j``."""
    return QuadRat(-ROOT2 * qi_pow(SILVER, j), 3**j)


@dataclass(frozen=True)
class GapCheck:
    n: int
    k: int
    value: QuadRat
    stated_form: QuadRat
    segment_outer: int
    segment_inner: int

    @property
    def matches_stated(self) -> bool:
        """Equal to −√2((√2+1)/3)^(n+1)."""
        return self.value == self.stated_form

    @property
    def matches_segment_form(self) -> bool:
        """Equal to −√2((√2+1)/3)^j with j the segment holding 3k+1."""
        return self.value == gap_power_form(self.segment_outer)

    @property
    def sign(self) -> int:
        return self.value.sign()

    @property
    def magnitude_below_one(self) -> bool:
        v = self.value
        return qr_cmp(v, QuadRat(1)) < 0 and qr_cmp(v, QuadRat(-1)) > 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "value": self.value.to_json(),
            "value_float": to_float(self.value),
            "stated_form_float": to_float(self.stated_form),
            "matches_stated": self.matches_stated,
            "segment_outer": self.segment_outer,
            "segment_inner": self.segment_inner,
            "matches_segment_form": self.matches_segment_form,
            "sign": self.sign,
            "magnitude_below_one": self.magnitude_below_one,
        }


def gap_identity_check(n: int, k: int) -> GapCheck:
    if k not in gap_strip(n):
        s = gap_strip(n)
        raise ValueError(f"k={k} outside the strip for n={n} (valid k: {s.start}..{s.stop - 1})")
    return GapCheck(
        n,
        k,
        gap_value(k),
        gap_power_form(n + 1),
        segment_index(3 * k + 1),
        segment_index(k + 1),
    )


def gap_sample(n: int, samples: int, rng: random.Random) -> list[int]:
    strip = gap_strip(n)
    if len(strip) <= samples:
        return list(strip)
    return sorted(rng.sample(strip, samples))


# -- comparison with the power law -----------------------------------------


def H(x: Rat) -> float:
    """``2·h(x) − (2x)^α`` in double precision."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError(f"H needs x > 0, got {x}")
    return 2.0 * to_float(h_exact(x)) - float(2 * x) ** ALPHA


def H_grid(lo: Rat, hi: Rat, points: int) -> list[tuple[Fraction, float]]:
    """H on ``points`` equally spaced rationals from ``lo`` to ``hi`` inclusive."""
    lo, hi = Fraction(lo), Fraction(hi)
    if points < 2:
        return [(lo, H(lo))]
    step = (hi - lo) / (points - 1)
    return [(lo + i * step, H(lo + i * step)) for i in range(points)]


def H_grid_csv(rows: list[tuple[Fraction, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "H"])
    for x, v in rows:
        writer.writerow([f"{float(x):.12g}", f"{v:.12g}"])
    return buf.getvalue()


def ratio_to_h_scan(n_lo: int, n_hi: int) -> list[tuple[int, float]]:
    """``b(m_n)/h(m_n)`` at ``m_n = (3^(n+1)+1)/2``, quotient formed exactly."""
    if n_lo < 1:
        raise ValueError(f"n_lo must be >= 1, got {n_lo}")
    out = []
    for n in range(n_lo, n_hi + 1):
        im = interval_max_closed_form(n + 1)
        out.append((im.first_argmax, to_float(QuadRat(im.max_value) / h_exact(im.first_argmax))))
    return out


# -- reference table --------------------------------------------------------------

TABLE1_B = ["1.414", "1", "2.828", "3", "1.414", "3", "2.828", "1"]
TABLE1_H = ["1.491", "3.060", "3.629", "4.198", "4.767", "5.336", "5.905", "7.474"]


def truncate3(v: float) -> Decimal:
    return Decimal(repr(v)).quantize(Decimal("0.001"), rounding=ROUND_DOWN)


@dataclass(frozen=True)
class Table1Row:
    m: int
    b: QuadInt
    table_b: Decimal
    table_h: Decimal
    h_plus_floor: float
    h_segment1_plus_floor: float
    holds_coefficient_one: bool
    holds_coefficient_silver: bool

    @property
    def b_matches(self) -> bool:
        return truncate3(to_float(QuadRat(self.b))) == self.table_b

    @property
    def h_matches(self) -> bool:
        return truncate3(self.h_plus_floor) == self.table_h

    @property
    def h_segment1_matches(self) -> bool:
        return truncate3(self.h_segment1_plus_floor) == self.table_h


def table1_report() -> list[Table1Row]:
    """Recompute the m = 2..9 table; values are truncated to three decimals."""
    seg1 = segment(1)
    rows = []
    for i, m in enumerate(range(2, 10)):
        b = northshield(m)
        f = floor_log3(m)
        h = h_exact(m)
        rows.append(
            Table1Row(
                m,
                b,
                Decimal(TABLE1_B[i]),
                Decimal(TABLE1_H[i]),
                to_float(h + f),
                to_float(seg1(m) + f),
                QuadRat(b) <= h + f,
                QuadRat(b) <= h + QuadRat(SILVER) * f,
            )
        )
    return rows


def table1_text(rows: list[Table1Row]) -> str:
    lines = ["m  b(m)       table_b  h(m)+floor  seg1+floor  table_h  b_ok  h_ok  seg1_ok  c=1  c=√2+1"]
    for r in rows:
        lines.append(
            f"{r.m}  {str(r.b):<9}  {r.table_b!s:<7}  {r.h_plus_floor:<10.4f}  {r.h_segment1_plus_floor:<10.4f}  "
            f"{r.table_h!s:<7}  {_yn(r.b_matches):<4}  {_yn(r.h_matches):<4}  {_yn(r.h_segment1_matches):<7}  "
            f"{_yn(r.holds_coefficient_one):<3}  {_yn(r.holds_coefficient_silver)}"
        )
    bad = [r.m for r in rows if not r.h_matches]
    if bad:
        lines.append(
            f"note: printed h-row entries for m={bad} do not match h(m)+floor(log3 m) for the envelope "
            "through (3^n/2, (√2+1)^n/2); they match the first segment extended past x_2 = 9/2."
        )
    lines.append("note: the log-term coefficient is shown both as 1 and as √2+1.")
    return "\n".join(lines)


def table1_json(rows: list[Table1Row]) -> str:
    return json.dumps(
        [
            {
                "m": r.m,
                "b": r.b.to_json(),
                "table_b": str(r.table_b),
                "table_h": str(r.table_h),
                "h_plus_floor": r.h_plus_floor,
                "h_segment1_plus_floor": r.h_segment1_plus_floor,
                "b_matches": r.b_matches,
                "h_matches": r.h_matches,
                "h_segment1_matches": r.h_segment1_matches,
                "holds_coefficient_one": r.holds_coefficient_one,
                "holds_coefficient_silver": r.holds_coefficient_silver,
            }
            for r in rows
        ]
    )


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"
