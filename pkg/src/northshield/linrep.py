"""Base-k linear representations ``f(n) = w · M_{i0} M_{i1} ··· M_{is} · v`` over Q(√2).

Digits ``i0 … is`` are the base-k digits of n, least significant first, and
the product is taken left to right in that order. For ``n = 0`` the product is
empty and ``f(0) = w · v``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import lcm
from typing import Callable, Sequence

from .quadfield import QuadInt, QuadRat, _is_int
from .sequences import northshield, stern


class RepError(ValueError):
    """Base class for representation-document errors."""


class MalformedRepError(RepError):
    pass


class RepDimensionError(RepError):
    pass


class RepBaseError(RepError):
    pass


class RepEntryError(RepError):
    pass


Vector = tuple[QuadRat, ...]


@dataclass(frozen=True)
class QMatrix:
    rows: tuple[Vector, ...]

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> QMatrix:
        return cls(tuple(tuple(QuadRat.coerce(e) for e in row) for row in rows))

    @classmethod
    def identity(cls, d: int) -> QMatrix:
        return cls.of([[1 if i == j else 0 for j in range(d)] for i in range(d)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __matmul__(self, other: QMatrix) -> QMatrix:
        d = self.dim
        cols = list(zip(*other.rows))
        return QMatrix(
            tuple(tuple(_dot(self.rows[i], cols[j]) for j in range(d)) for i in range(d))
        )

    def __getitem__(self, ij: tuple[int, int]) -> QuadRat:
        i, j = ij
        return self.rows[i][j]

    def trace(self) -> QuadRat:
        return sum((self.rows[i][i] for i in range(self.dim)), QuadRat(0))

    def det2(self) -> QuadRat:
        if self.dim != 2:
            raise ValueError("det2 needs a 2x2 matrix")
        (p, q), (r, s) = self.rows
        return p * s - q * r

    def to_float(self) -> list[list[float]]:
        return [[float(e) for e in row] for row in self.rows]

    def to_json(self) -> list:
        return [[e.to_json() for e in row] for row in self.rows]


def _dot(u: Sequence[QuadRat], v: Sequence[QuadRat]) -> QuadRat:
    # accumulate over a common denominator, reduce once
    den = 1
    for x, y in zip(u, v):
        den = lcm(den, x.den * y.den)
    a = b = 0
    for x, y in zip(u, v):
        p = x.num * y.num
        scale = den // (x.den * y.den)
        a += p.a * scale
        b += p.b * scale
    return QuadRat(QuadInt(a, b), den)


@dataclass(frozen=True)
class LinRep:
    base: int
    w: Vector
    matrices: tuple[QMatrix, ...]
    v: Vector

    def __post_init__(self) -> None:
        if self.base < 2:
            raise RepBaseError(f"base: must be >= 2, got {self.base}")
        if len(self.matrices) != self.base:
            raise RepDimensionError(f"matrices: base {self.base} needs {self.base} matrices, got {len(self.matrices)}")
        d = len(self.w)
        if len(self.v) != d:
            raise RepDimensionError(f"v: length {len(self.v)} does not match w length {d}")
        for i, m in enumerate(self.matrices):
            if m.dim != d or any(len(r) != d for r in m.rows):
                raise RepDimensionError(f"matrices[{i}]: expected {d}x{d}")

    @property
    def dim(self) -> int:
        return len(self.w)

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "dim": self.dim,
            "w": [e.to_json() for e in self.w],
            "v": [e.to_json() for e in self.v],
            "matrices": [m.to_json() for m in self.matrices],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def digits_lsb_first(n: int, k: int) -> list[int]:
    if k < 2:
        raise ValueError(f"base must be >= 2, got {k}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    out = []
    while n:
        n, r = divmod(n, k)
        out.append(r)
    return out


def lr_eval_word(rep: LinRep, word: Sequence[int]) -> QuadRat:
    """``w · M_{word[0]} ··· M_{word[-1]} · v`` for an arbitrary digit word."""
    # fold the row vector through the product: O(len · d²)
    row: Sequence[QuadRat] = rep.w
    for digit in word:
        if not 0 <= digit < rep.base:
            raise ValueError(f"digit {digit} out of range for base {rep.base}")
        cols = list(zip(*rep.matrices[digit].rows))
        row = [_dot(row, c) for c in cols]
    return _dot(row, rep.v)


def lr_eval(rep: LinRep, n: int) -> QuadRat:
    return lr_eval_word(rep, digits_lsb_first(n, rep.base))


_R2 = QuadRat(QuadInt(0, 1))


def builtin_northshield_rep() -> LinRep:
    return LinRep(
        base=3,
        w=(QuadRat(1), QuadRat(0)),
        matrices=(
            QMatrix.of([[1, 0], [_R2, 1]]),
            QMatrix.of([[_R2, 1], [1, _R2]]),
            QMatrix.of([[1, _R2], [0, 1]]),
        ),
        v=(QuadRat(0), QuadRat(1)),
    )


def builtin_stern_rep() -> LinRep:
    # The matrices are A0 = [[1,1],[0,1]], A1 = [[1,0],[1,1]]. Under the
    # LSB-first product, w = v = [1 0] gives 2 at n = 2; the selectors that
    # reproduce a(n) pick entry (1, 0).
    return LinRep(
        base=2,
        w=(QuadRat(0), QuadRat(1)),
        matrices=(QMatrix.of([[1, 1], [0, 1]]), QMatrix.of([[1, 0], [1, 1]])),
        v=(QuadRat(1), QuadRat(0)),
    )


@dataclass(frozen=True)
class Mismatch:
    n: int
    got: QuadRat
    expected: QuadRat


def verify_rep(rep: LinRep, oracle: Callable[[int], object], limit: int) -> Mismatch | None:
    """Compare ``lr_eval(rep, n)`` to ``oracle(n)`` for ``n < limit``.

    Returns ``None`` on agreement, otherwise the first mismatch.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    for n in range(limit):
        got = lr_eval(rep, n)
        expected = QuadRat.coerce(oracle(n))
        if got != expected:
            return Mismatch(n, got, expected)
    return None


ORACLES: dict[str, Callable[[int], object]] = {"northshield": northshield, "stern": stern}


def self_verify(terms: int = 1000) -> None:
    """Check both built-in representations against their recurrences."""
    for name, rep in (("northshield", builtin_northshield_rep()), ("stern", builtin_stern_rep())):
        bad = verify_rep(rep, ORACLES[name], terms)
        if bad is not None:
            raise AssertionError(f"builtin {name} representation disagrees at n={bad.n}: {bad.got} != {bad.expected}")


def _entry(obj, field: str) -> QuadRat:
    try:
        return QuadRat.from_json(obj, field)
    except (TypeError, ValueError) as exc:
        raise RepEntryError(str(exc)) from None


def _vector(obj, field: str, d: int) -> Vector:
    if not isinstance(obj, list):
        raise MalformedRepError(f"{field}: expected a list")
    if len(obj) != d:
        raise RepDimensionError(f"{field}: expected {d} entries, got {len(obj)}")
    return tuple(_entry(e, f"{field}[{i}]") for i, e in enumerate(obj))


def load_rep(document: str) -> LinRep:
    """Parse and validate a JSON representation document."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedRepError(f"document: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise MalformedRepError("document: expected a JSON object")
    missing = [k for k in ("base", "dim", "w", "v", "matrices") if k not in doc]
    if missing:
        raise MalformedRepError(f"{missing[0]}: required field missing")
    k, d = doc["base"], doc["dim"]
    if not _is_int(k):
        raise RepEntryError(f"base: expected an integer, got {k!r}")
    if not _is_int(d):
        raise RepEntryError(f"dim: expected an integer, got {d!r}")
    if k < 2:
        raise RepBaseError(f"base: must be >= 2, got {k}")
    if d < 1:
        raise RepDimensionError(f"dim: must be >= 1, got {d}")
    mats = doc["matrices"]
    if not isinstance(mats, list):
        raise MalformedRepError("matrices: expected a list")
    if len(mats) != k:
        raise RepDimensionError(f"matrices: base {k} needs {k} matrices, got {len(mats)}")
    matrices = []
    for i, m in enumerate(mats):
        if not isinstance(m, list) or len(m) != d:
            raise RepDimensionError(f"matrices[{i}]: expected {d} rows")
        matrices.append(QMatrix(tuple(_vector(row, f"matrices[{i}][{r}]", d) for r, row in enumerate(m))))
    return LinRep(k, _vector(doc["w"], "w", d), tuple(matrices), _vector(doc["v"], "v", d))
