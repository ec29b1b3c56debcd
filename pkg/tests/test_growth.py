import math
from itertools import product

import pytest

from freestar import growth
from freestar.growth import (DOUBLED_PEAK_ALLOWED, REV, REV_FAMILY, STAR, STAR_FAMILY, STRICT_PEAK,
                             AvoidFamily, GuardError, RunProfile)
from freestar.rewriting import RewritingSystem
from freestar.words import binary_words, star_bits, words_of_length

RHOADES_100 = 694890363.7809662


# -- oracles ----------------------------------------------------------------


def has_pattern(w, twist):
    n = len(w)
    for m in range(1, n // 3 + 1):
        for p in range(n - 3 * m + 1):
            u = w[p:p + m]
            if w[p + m:p + 2 * m] == twist(u) and w[p + 2 * m:p + 3 * m] == u:
                return True
    return False


def brute_sphere(n, twist):
    return sum(1 for w in binary_words(n) if not has_pattern(w, twist))


def compositions(n):
    for cuts in product((0, 1), repeat=n - 1):
        parts, run = [], 1
        for c in cuts:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield parts


def is_unimodal(parts, doubled):
    top = max(parts)
    i = parts.index(top)
    j = i + 1 if doubled and i + 1 < len(parts) and parts[i + 1] == top else i
    head, tail = parts[:i + 1], parts[j:]
    if parts[i:j + 1].count(top) != j - i + 1 or top in parts[:i] + parts[j + 1:]:
        return False
    return all(a < b for a, b in zip(head, head[1:])) and all(a > b for a, b in zip(tail, tail[1:]))


def brute_unimodal(n, doubled):
    return sum(1 for c in compositions(n) if is_unimodal(c, doubled))


# -- families ---------------------------------------------------------------


def test_family_validation():
    with pytest.raises(ValueError):
        AvoidFamily("BOGUS")
    fam = AvoidFamily.of({"00"})
    assert fam.is_forbidden("00") and not fam.avoids("0100") and fam.avoids("0101")


def test_forbidden_factor_examples():
    assert growth.forbidden_factors_upto(STAR, 3) == {"010", "101"}
    assert growth.forbidden_factors_upto(REV, 3) == {"000", "111"}
    assert growth.forbidden_factors_upto(STAR, 2) == set()
    assert growth.minimal_forbidden_factors(REV, 3) == {"000", "111"}


def test_minimal_forbidden_factors_rev():
    assert growth.minimal_forbidden_factors(REV, 9) == {
        "000", "111", "011001", "100110", "010010010", "101101101"}


def test_minimal_forbidden_factors_star():
    assert growth.minimal_forbidden_factors(STAR, 6) == {"010", "101", "001100", "110011"}


@pytest.mark.parametrize("fam, twist", [(STAR, star_bits), (REV, lambda u: u[::-1])])
def test_minimality_property(fam, twist):
    L = 12
    minimal = growth.minimal_forbidden_factors(fam, L)
    for f in minimal:
        assert has_pattern(f, twist)
        assert not any(has_pattern(f[i:j], twist)
                       for i in range(len(f)) for j in range(i + 1, len(f) + 1) if j - i < len(f))
    # every forbidden word contains a minimal one
    for f in growth.forbidden_factors_upto(fam, L):
        assert any(m in f for m in minimal)


# -- counting ---------------------------------------------------------------


@pytest.mark.parametrize("n, expected", [(0, 1), (3, 6), (4, 10)])
def test_sphere_count_examples(n, expected):
    assert growth.sphere_count_enumerate(STAR, n) == expected
    assert growth.sphere_count_dp(n) == expected


@pytest.mark.parametrize("n", range(15))
def test_enumeration_matches_brute_force(n):
    assert growth.sphere_count_enumerate(STAR, n) == brute_sphere(n, star_bits)
    assert growth.sphere_count_enumerate(REV, n) == brute_sphere(n, lambda u: u[::-1])


def test_dp_matches_enumeration():
    dp = growth.sphere_counts_dp(22)
    assert dp == [growth.sphere_count_enumerate(STAR, n) for n in range(23)]
    assert dp[:13] == [1, 2, 4, 6, 10, 16, 24, 34, 50, 72, 100, 138, 188]


def test_sphere_counts_are_irreducible_word_counts():
    r1 = RewritingSystem.r1()
    for n in range(11):
        assert growth.sphere_count_dp(n) == len(r1.irreducible_words(n))


def test_level_enumeration_agrees():
    assert growth.sphere_counts_enumerate(REV_FAMILY, 30) == growth.sphere_counts_dp(30)


def test_guards():
    with pytest.raises(GuardError):
        growth.sphere_count_enumerate(STAR, growth.ENUMERATION_GUARD + 1)
    with pytest.raises(GuardError):
        growth.sandwich_report(growth.LEVEL_ENUMERATION_GUARD + 1)
    with pytest.raises(GuardError):
        growth.rank2_sphere_counts(growth.R2_GUARD + 1)


def test_ball_counts():
    assert growth.ball_counts([1, 2, 4, 6]) == [1, 3, 7, 13]


@pytest.mark.parametrize("n", range(1, 19))
def test_unimodal_counts_brute_force(n):
    assert growth.strongly_unimodal_count(n, STRICT_PEAK) == brute_unimodal(n, False)
    assert growth.strongly_unimodal_count(n, DOUBLED_PEAK_ALLOWED) == brute_unimodal(n, True)


@pytest.mark.parametrize("n, expected", [(1, 1), (3, 3), (4, 4)])
def test_unimodal_examples(n, expected):
    assert growth.strongly_unimodal_count(n) == expected


def test_unimodal_rejects_bad_input():
    with pytest.raises(ValueError):
        growth.strongly_unimodal_count(0)
    with pytest.raises(ValueError):
        growth.strongly_unimodal_count(3, "SOMETHING")


def test_sphere_is_twice_doubled_peak_count():
    s = growth.sphere_counts_dp(200)
    assert all(s[n] == 2 * growth.strongly_unimodal_count(n, DOUBLED_PEAK_ALLOWED)
               for n in range(1, 201))


def test_run_profiles():
    assert RunProfile.of("aaAAa") == RunProfile("a", (2, 2, 1))
    assert RunProfile.of("aaAAa").decompositions() == [((), (2, 2), (1,))]
    assert RunProfile.of("aAa").decompositions() == []
    # irreducible exactly when some decomposition exists
    r1 = RewritingSystem.r1()
    for n in range(1, 11):
        for w in words_of_length(n):
            assert bool(RunProfile.of(w).decompositions()) == r1.is_irreducible(w)


def test_rhoades_main_term():
    r = math.sqrt(23)
    expected = math.sqrt(3) * 23 ** -0.75 * math.exp(math.pi * r / 6) * (1 + (math.pi ** 2 - 9) / (4 * math.pi * r))
    assert growth.rhoades_main_term(1) == pytest.approx(expected, rel=1e-12)
    assert growth.rhoades_main_term(100) == pytest.approx(RHOADES_100, rel=1e-12)
    vals = [growth.rhoades_main_term(n) for n in range(1, 10_001)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_intermediate_growth_signal():
    s = growth.sphere_counts_dp(900)
    dens = [growth.log2_density(s[n], n) for n in (100, 200, 400, 900)]
    assert all(a > b for a, b in zip(dens, dens[1:]))
    assert dens[-1] < 0.2
    assert s[900] > 900 ** 8


def test_phi_bijection():
    assert all(growth.phi_bijection_check(n) for n in range(17))


def test_sandwich_report_rows():
    rows = growth.sandwich_report(20)
    assert [tuple(r) for r in rows] == [growth.SANDWICH_FIELDS] * 21
    assert rows[0]["sphere"] == rows[0]["ball"] == 1
    r3 = rows[3]
    assert (r3["sphere"], r3["u_strict"]) == (6, 3)
    assert r3["sandwich_exact_strict"]
    assert all(r["star_equals_rev"] for r in rows)


# -- rank 2 -----------------------------------------------------------------


def test_rank2_counts_against_brute_force():
    rs2 = RewritingSystem.rstar(2)
    counts = growth.rank2_sphere_counts(6)
    for n in range(6):
        assert counts[n] == sum(1 for w in words_of_length(n, 2) if rs2.is_irreducible(w))
    assert counts[:4] == [1, 4, 16, 60]


def test_rank2_free_group_bound():
    rows = growth.growth_estimate_r2(12)
    assert all(r["ball"] >= 2 * 3 ** r["n"] - 1 for r in rows)
    assert all(r["enumeration_agrees"] in (None, True) for r in rows)
    assert rows[12]["enumerated"] is None
