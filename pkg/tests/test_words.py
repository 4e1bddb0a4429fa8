"""
tests/test_words.py

Symbolic words over {1, 2}: density classification, splitting, propagation times,
exact set sizes against exhaustive enumeration, and the growth bound on X.
"""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from pydantic import ValidationError

from src.words.counting import (
    check_count_bound,
    count_sets,
    enumerate_counts,
    log_count_X,
    stirling_exponent,
)
from src.words.words import (
    Word,
    WordParams,
    all_words,
    classify_long,
    classify_short,
    concatenate,
    density,
    minus_digit,
    plus_digit,
    propagation_times,
    split_word,
)


def test_word_parsing():
    w = Word.parse("12 21")
    assert w.digits == (1, 2, 2, 1)
    assert str(w) == "1221"
    with pytest.raises(ValueError):
        Word.parse("123")
    with pytest.raises(ValueError):
        Word(())


def test_density_is_exact():
    assert density(Word.parse("1121")) == Fraction(3, 4)


def test_short_classification_ties_go_to_Z():
    assert classify_short(Word.parse("12"), 0.5) == "Z"
    assert classify_short(Word.parse("22"), 0.5) == "Z_complement"
    # 0.3 is read as 3/10, not as the nearest double.
    assert classify_short(Word.parse("1222222222"), 0.3) == "Z_complement"
    assert classify_short(Word.parse("1112222222"), 0.3) == "Z"


def test_long_classification():
    low = Word.parse("2222")
    high = Word.parse("1122")
    assert classify_long(concatenate(low, low, low, low), 0.25, 4) == "X"
    assert classify_long(concatenate(low, high, low, low), 0.25, 4) == "Y"
    with pytest.raises(ValueError):
        classify_long(low, 0.25, 4)


def test_split_and_digit_indexing():
    w_plus, w_minus = split_word(Word.parse("121122"), 3)
    assert str(w_plus) == "121" and str(w_minus) == "122"
    # w+_1 is the digit next to the split point
    assert plus_digit(w_plus, 1) == 1
    assert plus_digit(w_plus, 3) == 1
    assert minus_digit(w_minus, 0) == 1
    with pytest.raises(ValueError):
        plus_digit(w_plus, 0)
    with pytest.raises(ValueError):
        split_word(Word.parse("121"))


def test_blocks_and_enumeration():
    assert [str(b) for b in Word.parse("112212").blocks(2)] == ["11", "22", "12"]
    words = list(all_words(3))
    assert len(words) == 8
    assert str(words[0]) == "111" and str(words[-1]) == "222"


def test_propagation_times():
    # (1 - 0.1)/6 * 60 = 9 exactly
    assert propagation_times(math.exp(-60), 0.1) == (9, 18)
    assert propagation_times(math.exp(-61), 0.1) == (10, 20)
    with pytest.raises(ValueError):
        propagation_times(2.0, 0.1)


def test_word_params():
    params = WordParams(h=math.exp(-60), eps0=0.1, alpha=0.05)
    assert (params.N0, params.N1) == (9, 18)
    with pytest.raises(ValidationError):
        WordParams(h=math.exp(-60), eps0=0.1, alpha=0.05, N0=8)


@pytest.mark.parametrize("n0", [1, 2, 3, 4])
@pytest.mark.parametrize("alpha", [0.05, 0.25, 0.5, 0.75])
def test_closed_form_matches_enumeration(n0, alpha):
    closed = count_sets(n0, alpha)
    assert closed == enumerate_counts(n0, alpha)
    assert closed.size_X + closed.size_Y == 2 ** (4 * n0)
    assert closed.size_Z + closed.size_Zc == 2 ** n0


def test_small_alpha_keeps_only_the_all_twos_word():
    # With alpha N0 <= 1 only the word without any 1 has density below alpha.
    counts = count_sets(20, 0.05)
    assert counts.size_Zc == 1
    assert counts.size_X == 1


def test_threshold_one_excludes_only_all_ones():
    counts = count_sets(6, 1)
    assert counts.size_Zc == 2 ** 6 - 1


def test_entropy_bound():
    for n0 in (10, 20, 40):
        assert math.log(count_sets(n0, 0.3).size_Zc) <= n0 * stirling_exponent(0.3) + 1e-12
    assert log_count_X(5, 0.5) == pytest.approx(4 * math.log(count_sets(5, 0.5).size_Zc))
    assert stirling_exponent(0.7) == pytest.approx(math.log(2))


def test_count_bound_holds_for_small_alpha():
    hs = [math.exp(-x) for x in range(60, 241, 10)]
    report = check_count_bound(0.2, 0.05, 0.1, hs)
    assert report.bounded
    c = [r.C_empirical for r in report.rows]
    assert all(b <= a for a, b in zip(c, c[1:]))
    assert math.isfinite(report.constant)


def test_count_bound_fails_when_X_grows_too_fast():
    hs = [math.exp(-x) for x in range(60, 241, 20)]
    report = check_count_bound(0.2, 1.0, 0.1, hs)
    assert not report.bounded
    assert report.constant == math.inf


def test_count_bound_grid_validation():
    with pytest.raises(ValueError):
        check_count_bound(0.2, 0.05, 0.1, [1e-5, 1e-3])
    with pytest.raises(ValueError):
        check_count_bound(0.0, 0.05, 0.1, [1e-3, 1e-5])


def test_count_bound_on_a_short_grid():
    # The first jump of #X (k = 1 allowed once 0.05 N0 > 1) lands on the last grid point.
    hs = [math.exp(-x) for x in (60, 80, 100, 120, 140)]
    report = check_count_bound(0.2, 0.05, 0.1, hs)
    assert [r.N0 for r in report.rows] == [9, 12, 15, 18, 21]
    assert [r.size_X for r in report.rows] == [1, 1, 1, 1, 22 ** 4]
    assert report.bounded
    assert report.constant == pytest.approx(22 ** 4 * math.exp(-14.0))
    assert all(r.C_empirical == pytest.approx(report.constant) for r in report.rows)


def test_count_bound_tail_uses_per_h_values():
    hs = [math.exp(-x) for x in range(60, 241, 20)]
    report = check_count_bound(0.2, 0.9, 0.1, hs)
    # C_h keeps growing at small h, while the suffix sup is nonincreasing by construction.
    assert report.rows[-1].C_h > report.rows[-2].C_h
    assert not report.tail_nonincreasing
    assert not report.bounded
