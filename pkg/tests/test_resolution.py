import pytest

from freestar.resolution import (X, KobayashiResolution, ModuleElement, ResolutionError, Truncation,
                                 boundary_1, cell_dual, cell_str, closed_form_boundary, edge_pairs,
                                 homotopy_i1, identify, named_cells, theta_image_I, theta_image_II,
                                 theta_image_III, type_I, type_II, type_III)
from freestar.rewriting import RewritingSystem

R1 = RewritingSystem.r1()
B = ModuleElement.basis


def bounded(N, D=4):
    return KobayashiResolution(RewritingSystem.r1_bounded(N), Truncation(N, D))


# -- module elements --------------------------------------------------------


def test_module_element_arithmetic():
    x = B(("a",), "A") + B(("A",), "") - B(("a",), "A")
    assert x == B(("A",))
    assert not (x - x)
    assert (x.scaled(3) + x.scaled(-3)) == ModuleElement()
    assert x.dimension() == 1
    with pytest.raises(ResolutionError):
        (B(("a",)) + B(("a", "Aa"))).dimension()


def test_module_element_rendering():
    s = str(B(("a", "Aa"), "A") - B(("A", "aA")).scaled(2))
    assert s == "-2*(A|aA)∘1 + (a|Aa)∘A"
    assert str(ModuleElement()) == "0"
    assert cell_str(X(1)) == "(a|Aa)"


def test_act_reduces_translates():
    x = B(("a",), "aA").act("a", R1)
    assert x == B(("a",), "a")


def test_truncation_admits():
    t = Truncation(2)
    assert t.admits(X(2)) and not t.admits(X(3))
    assert not Truncation(1).admits(type_III(1, 1, 2))
    with pytest.raises(ValueError):
        Truncation(0)


# -- low dimensions ---------------------------------------------------------


def test_edge_pairs_examples():
    e3 = edge_pairs(R1, 3)
    assert ("a", "Aa") in e3 and ("A", "aA") in e3
    assert ("a", "a") not in e3
    assert ("Aa", "A") in edge_pairs(R1, 4)


def test_cells_low_dimensions():
    assert bounded(2).cells(0) == [()]
    assert set(bounded(2).cells(1)) == {("a",), ("A",)}
    assert set(bounded(2).cells(2)) == {X(1), X(2), X(1, True), X(2, True)}
    assert set(bounded(1).cells(3)) == {type_I(1), type_I(1, True)}


def test_cell_counts():
    assert [len(bounded(5).cells(n)) for n in range(5)] == [1, 2, 10, 110, 1342]
    assert len(bounded(3, 5).cells(5)) == 706
    assert bounded(3).cells(5) == []


def test_boundary_1():
    assert boundary_1("a") == B((), "a") - B(())
    assert boundary_1("A") == B((), "A") - B(())
    assert boundary_1("a").augment() == {}


def test_homotopy_i1():
    assert homotopy_i1("aA", R1) == B(("a",), "A") + B(("A",))
    assert homotopy_i1("", R1) == ModuleElement()
    assert homotopy_i1("Aa", R1) == B(("A",), "a") + B(("a",))
    with pytest.raises(ValueError):
        homotopy_i1("aAa", R1)


def test_boundary_examples():
    res = bounded(3)
    assert res.boundary(X(1)) == B(("a",), "Aa") + B(("A",), "a")
    assert res.boundary(type_I(1)) == B(X(1), "A") - B(X(1, True))
    assert res.boundary_of(res.boundary(X(1))) == ModuleElement()


def test_homotopy_examples():
    res = bounded(3)
    assert res.homotopy(B(("a",), "a")) == ModuleElement()
    assert res.homotopy(B(("a",), "Aa")) == B(X(1))
    assert res.homotopy(B(("A",), "aA")) == B(X(1, True))


def test_tensored_boundary_columns():
    res = bounded(4)
    for i in range(1, 5):
        assert res.tensored_boundary(X(i)) == {("a",): i, ("A",): i}
    assert res.tensored_boundary(type_I(1)) == {X(1): 1, X(1, True): -1}


# -- closed forms -------------------------------------------------------------


def test_closed_form_examples():
    assert closed_form_boundary(X(2), R1) == (B(("a",), "AAaa") + B(("a",), "aAAaa")
                                              + B(("A",), "aa") + B(("A",), "Aaa"))
    assert closed_form_boundary(type_II(2, 1), R1) == B(X(2), "Aa") - B(X(2))
    assert closed_form_boundary(theta_image_I(1), R1) == (B(type_I(1), "aA")
                                                         + B(type_I(1, True), "A"))
    with pytest.raises(ValueError):
        closed_form_boundary(("a", "aa"), R1)


def test_identify_roundtrip():
    assert identify(X(3, True)) == ("X", (3,), True)
    assert identify(type_II(3, 2)) == ("II", (3, 2), False)
    assert identify(theta_image_III(2, 1, 3, True)) == ("III4", (2, 1, 3), True)
    assert identify(("a", "aa")) is None
    with pytest.raises(ValueError):
        type_II(1, 1)
    with pytest.raises(ValueError):
        type_III(1, 1, 3)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_closed_forms_match_recursion(dim):
    res = KobayashiResolution(R1, Truncation(5))
    cells = list(named_cells(5, dim))
    assert cells
    for cell in cells:
        assert closed_form_boundary(cell, R1) == res.boundary(cell), cell_str(cell)


def test_named_cell_counts():
    assert sum(len(list(named_cells(5, d))) for d in (2, 3, 4)) == 230


def test_named_cells_lie_in_bounded_resolution():
    res = bounded(3)
    for dim in (2, 3, 4):
        assert set(named_cells(3, dim)) <= set(res.cells(dim))


# -- resolution identities ------------------------------------------------------


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_boundary_squares_to_zero(N):
    res = bounded(N)
    for n in range(2, 5):
        for cell in res.cells(n):
            assert not res.boundary_of(res.boundary(cell)), cell_str(cell)


@pytest.mark.parametrize("n", [1, 2])
def test_contracting_homotopy(n):
    res = bounded(5)
    sys = res.system
    for cell in res.cells(n):
        for m in range(10 - sum(map(len, cell)) + 1):
            for x in sys.irreducible_words(m):
                b = B(cell, x)
                assert res.boundary_of(res.homotopy(b)) + res.homotopy(res.boundary_of(b)) == b


def test_contracting_homotopy_dimension_zero():
    res = bounded(3)
    for m in range(7):
        for x in res.system.irreducible_words(m):
            b = B((), x)
            # d1 i0 + (augmentation splitting) = id: i0 lands in P1 and d1 i0(x) = x - 1
            assert res.boundary_of(res.homotopy(b)) == b - B(())


@pytest.mark.parametrize("n", [2, 3, 4])
def test_star_duality(n):
    res = bounded(4)
    for cell in res.cells(n):
        assert res.boundary(cell_dual(cell)) == res.boundary(cell).dual()


def test_type_images_have_expected_shape():
    assert theta_image_I(1) == ("a", "Aa", "A", "aA")
    assert theta_image_II(2, 1) == ("a", "aAAaa", "Aa", "A")
    assert cell_dual(X(1)) == ("A", "aA")
