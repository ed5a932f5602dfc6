"""Joint spectral radius bounds for finite sets of matrices over Q(√2).

Lower bounds come from spectral radii of products, ``ρ(M_w)^{1/|w|}``; upper
bounds from the ∞-norm (max absolute row sum), ``max_{|w|=n} ‖M_w‖^{1/n}``,
which is valid for every n because the norm is submultiplicative.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linrep import LinRep, QMatrix, builtin_northshield_rep, builtin_stern_rep
from .quadfield import qi_sign, to_float

DEFAULT_BUDGET = 2**20
TIE_TOL = 1e-12


class BudgetExceeded(ValueError):
    def __init__(self, what: str, requested: int, budget: int) -> None:
        super().__init__(f"{what}: {requested} products exceeds budget {budget}")
        self.requested = requested
        self.budget = budget


@dataclass
class MatrixSet:
    matrices: list[QMatrix]
    shadows: list[np.ndarray] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.matrices:
            raise ValueError("matrix set must be nonempty")
        d = self.matrices[0].dim
        if any(m.dim != d for m in self.matrices):
            raise ValueError("all matrices must share one dimension")
        self.shadows = [np.array(m.to_float(), dtype=np.float64) for m in self.matrices]

    @classmethod
    def from_rep(cls, rep: LinRep) -> MatrixSet:
        return cls(list(rep.matrices))

    @property
    def dim(self) -> int:
        return self.matrices[0].dim

    @property
    def k(self) -> int:
        return len(self.matrices)


def stern_set() -> MatrixSet:
    return MatrixSet.from_rep(builtin_stern_rep())


def northshield_set() -> MatrixSet:
    return MatrixSet.from_rep(builtin_northshield_rep())


@dataclass
class JsrBounds:
    lower: float
    upper: float
    lower_witness: list[int]
    lower_len: int
    upper_len: int

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_witness": self.lower_witness,
            "lower_len": self.lower_len,
            "upper_len": self.upper_len,
        }


def word_product(mset: MatrixSet, word: Sequence[int]) -> QMatrix:
    """Exact ``M_{w0} M_{w1} ··· M_{w_last}``; the empty word gives the identity."""
    out = QMatrix.identity(mset.dim)
    for digit in word:
        if not 0 <= digit < mset.k:
            raise ValueError(f"digit {digit} out of range for a set of {mset.k} matrices")
        out = out @ mset.matrices[digit]
    return out


def float_word_product(mset: MatrixSet, word: Sequence[int]) -> np.ndarray:
    out = np.eye(mset.dim)
    for digit in word:
        out = out @ mset.shadows[digit]
    return out


def spectral_radius(m: QMatrix) -> float:
    """Largest eigenvalue modulus.

    For 2x2 matrices the discriminant sign is decided exactly from the trace
    and determinant; larger matrices fall back to ``numpy.linalg.eigvals``.
    """
    if m.dim == 1:
        return abs(to_float(m[0, 0]))
    if m.dim == 2:
        t, det = m.trace(), m.det2()
        disc = t * t - 4 * det
        if qi_sign(disc.num) >= 0:
            return (abs(to_float(t)) + math.sqrt(to_float(disc))) / 2.0
        return math.sqrt(abs(to_float(det)))
    return float(np.max(np.abs(np.linalg.eigvals(np.array(m.to_float())))))


def _spectral_radius_float(a: np.ndarray) -> float:
    if a.shape == (2, 2):
        t = a[0, 0] + a[1, 1]
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        disc = t * t - 4.0 * det
        if disc >= 0:
            return (abs(t) + math.sqrt(disc)) / 2.0
        return math.sqrt(abs(det))
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def inf_norm(a: np.ndarray) -> float:
    return float(np.max(np.sum(np.abs(a), axis=1)))


def _check_budget(k: int, length: int, budget: int, what: str) -> None:
    count = k**length
    if count > budget:
        raise BudgetExceeded(what, count, budget)


def jsr_lower_bound(mset: MatrixSet, max_len: int, budget: int = DEFAULT_BUDGET) -> tuple[float, list[int]]:
    """``max ρ(M_w)^{1/|w|}`` over nonempty words with ``|w| <= max_len``.

    Ties within 1e-12 go to the lexicographically least word. Candidates are
    screened in floating point and the winner's radius is recomputed exactly
    where the closed form allows.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be positive, got {max_len}")
    _check_budget(mset.k, max_len, budget, "jsr_lower_bound")
    best_val, best_word = -1.0, []
    for length in range(1, max_len + 1):
        for word in itertools.product(range(mset.k), repeat=length):
            r = _spectral_radius_float(float_word_product(mset, word)) ** (1.0 / length)
            w = list(word)
            if r > best_val + TIE_TOL:
                best_val, best_word = r, w
            elif abs(r - best_val) <= TIE_TOL and w < best_word:
                best_word = w
    if mset.dim <= 2:
        best_val = spectral_radius(word_product(mset, best_word)) ** (1.0 / len(best_word))
    return best_val, best_word


def _max_norm_subtree(
    shadows: list[np.ndarray], prefix: tuple[int, ...], length: int, prune: bool, floor: float
) -> float:
    """Max ∞-norm over words of ``length`` that start with ``prefix`` (depth-first)."""
    d = shadows[0].shape[0]
    start = np.eye(d)
    for digit in prefix:
        start = start @ shadows[digit]
    norms = [inf_norm(s) for s in shadows]
    max_norm = max(norms)
    best = floor
    stack = [(start, len(prefix))]
    while stack:
        p, depth = stack.pop()
        if depth == length:
            v = inf_norm(p)
            if v > best:
                best = v
            continue
        if prune and inf_norm(p) * max_norm ** (length - depth) <= best:
            continue
        for s in shadows:
            stack.append((p @ s, depth + 1))
    return best


def jsr_upper_bound(
    mset: MatrixSet,
    length: int,
    budget: int = DEFAULT_BUDGET,
    prune: bool = True,
    workers: int = 1,
) -> float:
    """``max_{|w| = length} ‖M_w‖_∞^{1/length}``.

    With ``prune`` a branch is dropped once ``‖prefix‖·(max_i ‖M_i‖)^{remaining}``
    cannot beat the best leaf found so far; by submultiplicativity this never
    discards the maximizing word.
    """
    if length < 1:
        raise ValueError(f"length must be positive, got {length}")
    _check_budget(mset.k, length, budget, "jsr_upper_bound")
    if workers > 1 and length > 1:
        depth = 1
        while mset.k**depth < workers and depth < length:
            depth += 1
        prefixes = list(itertools.product(range(mset.k), repeat=depth))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_max_norm_subtree, mset.shadows, p, length, prune, 0.0) for p in prefixes]
            best = max(f.result() for f in futures)
    else:
        best = _max_norm_subtree(mset.shadows, (), length, prune, 0.0)
    return best ** (1.0 / length)


def jsr_bounds(mset: MatrixSet, lower_len: int, upper_len: int, **kw) -> JsrBounds:
    budget = kw.pop("budget", DEFAULT_BUDGET)
    lower, witness = jsr_lower_bound(mset, lower_len, budget=budget)
    upper = jsr_upper_bound(mset, upper_len, budget=budget, **kw)
    return JsrBounds(lower, upper, witness, lower_len, upper_len)


def convergence_table(mset: MatrixSet, lengths: Sequence[int], **kw) -> list[tuple[int, float]]:
    return [(n, jsr_upper_bound(mset, n, **kw)) for n in lengths]


def convergence_csv(rows: list[tuple[int, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["len", "upper"])
    for n, u in rows:
        writer.writerow([n, f"{u:.12g}"])
    return buf.getvalue()


@dataclass(frozen=True)
class FinitenessReport:
    word: list[int]
    product_radius: float
    normalized: float
    lower: float
    upper: float
    tolerance: float

    @property
    def gap(self) -> float:
        return self.upper - self.normalized

    @property
    def certified(self) -> bool:
        """Normalized radius meets the upper bound within tolerance."""
        return abs(self.gap) <= self.tolerance

    def to_text(self) -> str:
        verdict = "matches upper bound" if self.certified else "no certification"
        return (
            f"word {self.word}: rho(product)^(1/{len(self.word)}) = {self.normalized:.12g}; "
            f"bounds [{self.lower:.12g}, {self.upper:.12g}]; gap {self.gap:.3g} -> {verdict}"
        )


def finiteness_check(mset: MatrixSet, word: Sequence[int], bounds: JsrBounds, tol: float = 1e-9) -> FinitenessReport:
    """Compare ``ρ(M_word)^{1/|word|}`` with ``bounds.upper``. A report, not a proof."""
    if not word:
        raise ValueError("finiteness candidate word must be nonempty")
    rho = spectral_radius(word_product(mset, word))
    return FinitenessReport(list(word), rho, rho ** (1.0 / len(word)), bounds.lower, bounds.upper, tol)
