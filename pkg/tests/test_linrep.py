import json
import random
from pathlib import Path

import pytest

from northshield.linrep import (
    LinRep,
    MalformedRepError,
    QMatrix,
    RepBaseError,
    RepDimensionError,
    RepEntryError,
    builtin_northshield_rep,
    builtin_stern_rep,
    digits_lsb_first,
    load_rep,
    lr_eval,
    lr_eval_word,
    verify_rep,
)
from northshield.quadfield import QuadInt, QuadRat
from northshield.sequences import northshield, stern

FIXTURES = Path(__file__).parent / "fixtures"
R2 = QuadRat(QuadInt(0, 1))


def digits_oracle(n, k):
    out = []
    while n > 0:
        out.append(n % k)
        n //= k
    return out


def test_digits():
    assert digits_lsb_first(5, 3) == [2, 1]
    assert digits_lsb_first(0, 3) == []
    assert digits_lsb_first(122, 3) == [2, 1, 1, 1, 1]
    for n in range(500):
        for k in (2, 3, 7):
            d = digits_lsb_first(n, k)
            assert d == digits_oracle(n, k)
            assert sum(x * k**i for i, x in enumerate(d)) == n
            assert not d or d[-1] != 0


def test_northshield_rep_examples():
    rep = builtin_northshield_rep()
    assert lr_eval(rep, 5) == QuadRat(3)
    # B2·B1 carries b(5) = 3 in row 0, column 1
    b1, b2 = rep.matrices[1], rep.matrices[2]
    assert (b2 @ b1)[0, 1] == QuadRat(3)
    assert lr_eval(rep, 2) == R2
    assert all(lr_eval(rep, 3**k) == QuadRat(1) for k in range(10))
    assert lr_eval(rep, 0) == QuadRat(0)


def test_northshield_rep_sweep():
    rep = builtin_northshield_rep()
    assert verify_rep(rep, northshield, 3**7) is None


def test_stern_rep_examples_and_sweep():
    rep = builtin_stern_rep()
    assert lr_eval(rep, 3) == QuadRat(2)
    assert lr_eval(rep, 5) == QuadRat(stern(5)) == QuadRat(3)
    assert all(lr_eval(rep, 2**k) == QuadRat(1) for k in range(12))
    assert verify_rep(rep, stern, 2**12) is None


def test_stern_rep_as_printed_fails():
    rep = builtin_stern_rep()
    printed = LinRep(2, (QuadRat(1), QuadRat(0)), rep.matrices, (QuadRat(1), QuadRat(0)))
    bad = verify_rep(printed, stern, 100)
    # the empty word already gives w·v = 1, and n=2 evaluates to 2
    assert bad is not None and bad.n == 0
    assert bad.got == QuadRat(1) and bad.expected == QuadRat(0)
    assert lr_eval(printed, 2) == QuadRat(2) != QuadRat(stern(2))


def test_stern_rep_transposed_matrices_with_printed_selectors():
    rep = builtin_stern_rep()
    transposed = tuple(QMatrix(tuple(zip(*m.rows))) for m in rep.matrices)
    alt = LinRep(2, (QuadRat(1), QuadRat(0)), transposed, (QuadRat(0), QuadRat(1)))
    assert verify_rep(alt, stern, 2**10) is None


def test_verify_rep_swapped_matrices():
    rep = builtin_northshield_rep()
    m0, m1, m2 = rep.matrices
    swapped = LinRep(3, rep.w, (m0, m2, m1), rep.v)
    bad = verify_rep(swapped, northshield, 100)
    assert bad.n == 1
    assert bad.got == R2 and bad.expected == QuadRat(1)


def test_verify_rep_self_comparison():
    rep = builtin_stern_rep()
    assert verify_rep(rep, lambda n: lr_eval(rep, n), 300) is None
    with pytest.raises(ValueError):
        verify_rep(rep, stern, 0)


def test_appending_a_digit_adds_one_factor():
    rng = random.Random(7)
    for rep in (builtin_northshield_rep(), builtin_stern_rep()):
        k = rep.base
        for _ in range(50):
            n = rng.randint(1, 10**6)
            d = rng.randrange(k)
            word = digits_lsb_first(n, k)
            # n·k + d has digits [d] + digits(n)
            prod = rep.matrices[d]
            for digit in word:
                prod = prod @ rep.matrices[digit]
            row = [sum((rep.w[i] * prod[i, j] for i in range(rep.dim)), QuadRat(0)) for j in range(rep.dim)]
            direct = sum((row[j] * rep.v[j] for j in range(rep.dim)), QuadRat(0))
            assert lr_eval(rep, n * k + d) == direct == lr_eval_word(rep, [d] + word)


def test_high_zero_digits_do_not_change_builtin_values():
    # M0·v = v for both builtins, so padding a word with high zeros is harmless
    for rep in (builtin_northshield_rep(), builtin_stern_rep()):
        for n in range(1, 200):
            word = digits_lsb_first(n, rep.base)
            assert lr_eval_word(rep, word + [0, 0]) == lr_eval(rep, n)
    with pytest.raises(ValueError):
        lr_eval_word(builtin_northshield_rep(), [3])


def test_load_fixture_equals_builtin():
    rep = load_rep((FIXTURES / "northshield.json").read_text())
    assert rep == builtin_northshield_rep()


def test_roundtrip():
    for rep in (builtin_northshield_rep(), builtin_stern_rep()):
        text = rep.dumps()
        assert load_rep(text) == rep
        assert load_rep(text).dumps() == text
    odd = LinRep(
        2,
        (QuadRat(QuadInt(1, -3), 7), QuadRat(QuadInt(0, 5), 2)),
        (QMatrix.of([[QuadRat(1, 3), 2], [R2, 0]]), QMatrix.of([[0, 1], [1, 0]])),
        (QuadRat(1), QuadRat(QuadInt(-2, 1), 9)),
    )
    assert load_rep(odd.dumps()) == odd


def test_constant_representation():
    rep = load_rep((FIXTURES / "constant.json").read_text())
    assert all(lr_eval(rep, n) == QuadRat(1) for n in range(50))


def test_load_errors_are_distinct():
    with pytest.raises(RepDimensionError, match="matrices"):
        load_rep((FIXTURES / "bad_base.json").read_text())
    with pytest.raises(MalformedRepError, match="document"):
        load_rep("{not json")
    with pytest.raises(RepBaseError, match="base"):
        load_rep(json.dumps({"base": 1, "dim": 1, "w": [1], "v": [1], "matrices": [[[1]]]}))
    with pytest.raises(RepEntryError, match=r"matrices\[0\]\[0\]\[0\]"):
        load_rep(json.dumps({"base": 2, "dim": 1, "w": [1], "v": [1], "matrices": [[[1.5]], [[1]]]}))
    with pytest.raises(RepEntryError, match="base"):
        load_rep(json.dumps({"base": "3", "dim": 1, "w": [1], "v": [1], "matrices": [[[1]]] * 3}))
    with pytest.raises(RepDimensionError, match="^v"):
        load_rep(json.dumps({"base": 2, "dim": 2, "w": [1, 0], "v": [1], "matrices": [[[1, 0], [0, 1]]] * 2}))
    with pytest.raises(RepDimensionError, match=r"matrices\[1\]"):
        load_rep(json.dumps({"base": 2, "dim": 1, "w": [1], "v": [1], "matrices": [[[1]], [[1], [1]]]}))
    with pytest.raises(MalformedRepError, match="^w"):
        load_rep(json.dumps({"base": 2, "dim": 1, "v": [1], "matrices": [[[1]], [[1]]]}))
    with pytest.raises(RepEntryError, match="den"):
        load_rep(json.dumps({"base": 2, "dim": 1, "w": [{"num": [1], "den": 0}], "v": [1], "matrices": [[[1]]] * 2}))
