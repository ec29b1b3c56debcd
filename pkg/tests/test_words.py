import pytest
from hypothesis import given, strategies as st

from freestar.words import (OMEGA, OMEGA_INV, DimensionError, Letter, MaskWord, alphabet,
                            binary_words, from_bits, from_letters, letters, nimsum, omega_prefix,
                            parse_word, phi_mask, runs, star, star_bits, swap_case, to_bits,
                            word_rank, words_of_length)

rank2_words = st.text(alphabet="aAbB", max_size=20)
bits = st.text(alphabet="01", max_size=24)


def test_alphabet_order():
    assert alphabet(1) == "aA"
    assert alphabet(2) == "aAbB"
    with pytest.raises(ValueError):
        alphabet(0)


def test_letter_roundtrip():
    for c in alphabet(3):
        assert Letter.parse(c).char() == c
    assert Letter.parse("B") == Letter(1, True)
    assert Letter(0).star() == Letter(0, True)
    assert from_letters(letters("abBA")) == "abBA"
    with pytest.raises(ValueError):
        Letter.parse("0")


def test_parse_word():
    assert parse_word("1") == ""
    assert parse_word("aAb") == "aAb"
    with pytest.raises(ValueError):
        parse_word("ab", rank=1)
    assert word_rank("aAbB") == 2
    assert word_rank("") == 1


@pytest.mark.parametrize("w, expected", [("011", "001"), ("", ""), ("0", "1")])
def test_star_bits_examples(w, expected):
    assert star_bits(w) == expected


def test_star_matches_binary_view():
    for n in range(9):
        for w in words_of_length(n):
            assert to_bits(star(w)) == star_bits(to_bits(w))
            assert from_bits(to_bits(w)) == w


@pytest.mark.parametrize("n", range(13))
def test_star_involution_exhaustive(n):
    assert all(star(star(w)) == w for w in words_of_length(n))


@given(rank2_words, rank2_words)
def test_star_anti_homomorphism(u, v):
    assert star(u + v) == star(v) + star(u)
    assert star(star(u)) == u
    assert swap_case(swap_case(u)) == u


@pytest.mark.parametrize("u, v, expected", [
    ("010", "010", "000"),
    ("011110011", "010101010", "001011001"),
    ("001100", "010101", "011001"),
])
def test_nimsum_examples(u, v, expected):
    assert nimsum(u, v) == expected


def test_nimsum_length_mismatch():
    with pytest.raises(DimensionError):
        nimsum("01", "011")


def test_omega_prefix():
    assert omega_prefix(0) == ""
    assert omega_prefix(3) == "010"
    assert omega_prefix(3, 1) == "101"
    assert OMEGA_INV.prefix(4) == "1010"
    assert OMEGA.shifted(1) == OMEGA_INV
    with pytest.raises(ValueError):
        MaskWord("012")


@pytest.mark.parametrize("v, expected", [("011110011", "001011001"), ("", ""), ("010", "000")])
def test_phi_examples(v, expected):
    assert phi_mask(OMEGA, v) == expected


@given(bits)
def test_phi_is_length_preserving_involution(v):
    w = phi_mask(OMEGA, v)
    assert len(w) == len(v)
    assert phi_mask(OMEGA, w) == v


@pytest.mark.parametrize("n", range(15))
def test_phi_splitting_law_exhaustive(n):
    # Phi(uv) = Phi(u) Phi(v) for even |u|, Phi(u) Phi_inv(v) for odd |u|
    for w in binary_words(n):
        for k in range(n + 1):
            u, v = w[:k], w[k:]
            tail = OMEGA if k % 2 == 0 else OMEGA_INV
            assert phi_mask(OMEGA, w) == phi_mask(OMEGA, u) + phi_mask(tail, v)


@pytest.mark.parametrize("n", range(1, 30))
def test_phi_of_all_ones(n):
    expected = omega_prefix(n)[::-1] if n % 2 == 0 else omega_prefix(n, 1)
    assert phi_mask(OMEGA, "1" * n) == expected


@pytest.mark.parametrize("m", range(1, 8))
def test_phi_maps_rev_patterns_to_star_patterns(m):
    for u in binary_words(m):
        v = phi_mask(OMEGA, u)
        assert phi_mask(OMEGA, u + u[::-1] + u) == v + star_bits(v) + v


def test_runs():
    assert runs("aaAa") == [("a", 2), ("A", 1), ("a", 1)]
    assert runs("") == []


def test_words_of_length_counts():
    assert len(list(words_of_length(3, 2))) == 64
    assert list(binary_words(2)) == ["00", "01", "10", "11"]
