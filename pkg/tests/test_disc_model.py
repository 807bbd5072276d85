import math

import pytest
from hypothesis import given, strategies as st

from mallestat.disc_model import (
    Bracket, FieldData, LocalTable, RamProfile, Tame, Wild, d_Pi, disc_bound, disc_compositum,
    disc_Y, tame_compositum_exponent,
)
from mallestat.errors import InvalidInput, MissingTableEntry
from mallestat.malle import ind_coprime_formula, regular_cycle_type
from mallestat.permgroup import cycle_type_counts


def field(degree, text):
    ram = RamProfile.parse(text)
    return FieldData(degree, ram.disc_abs(), ram)


K23 = field(3, "23:T:2.1")
L7 = field(3, "7:T:3")


def test_disc_bound_two_paths():
    v = disc_bound(23, 49, 3, 3)
    assert v == 1431435383
    assert v == math.prod([23] * 3 + [49] * 3)
    assert disc_bound(1, 49, 3, 3) == 49 ** 3


def test_disjoint_ramification_is_exact():
    br = disc_compositum(K23, L7)
    assert br == Bracket(23 ** 3 * 7 ** 6, 23 ** 3 * 7 ** 6) and br.exact


def test_shared_tame_prime():
    K = field(3, "7:T:2.1")
    assert disc_compositum(K, L7) == (7 ** 7, 7 ** 7)
    Kt = field(3, "7:T:3")
    assert disc_compositum(Kt, L7) == (7 ** 6, 7 ** 6)


def test_wild_shared_prime_is_bracketed():
    K = field(3, "3:W:4:P3")
    L9 = field(3, "3:W:4:C3")
    br = disc_compositum(K, L9)
    assert br.lower == 3 ** 12 and br.upper == 3 ** 24 and not br.exact


def test_table_mode(tmp_path):
    K = field(3, "3:W:4:P3")
    L9 = field(3, "3:W:4:C3")
    path = tmp_path / "t.csv"
    path.write_text("p,codeK,codeL,exponent\n3,P3,C3,20\n")
    tab = LocalTable.from_csv(path)
    assert disc_compositum(K, L9, "table", tab) == (3 ** 20, 3 ** 20)
    with pytest.raises(MissingTableEntry, match="P2P1"):
        disc_compositum(field(3, "3:W:3:P2P1"), L9, "table", tab)
    with pytest.raises(InvalidInput):
        disc_compositum(K, L9, "table")


def test_disc_Y_examples():
    K = field(3, "7:T:2.1")
    assert disc_Y(K, L7, 0) == (7 ** 9, 7 ** 9)
    assert disc_Y(K, L7, 5) == (7 ** 9, 7 ** 9)
    assert disc_Y(K, L7, 11) == (7 ** 7, 7 ** 7)
    assert disc_Y(K23, L7, 1000) == disc_compositum(K23, L7)
    with pytest.raises(InvalidInput):
        disc_Y(K, L7, -1)


def test_d_pi():
    assert d_Pi({}, 3, 3) == 1
    assert d_Pi({7: (Tame((2, 1)), Tame((3,)))}, 3, 3) == 7 ** 2
    assert d_Pi({7: (Tame((3,)), Tame((3,)))}, 3, 3) == 7 ** 6
    with pytest.raises(InvalidInput, match="bracketed"):
        d_Pi({3: (Wild(4, "P3"), Wild(4, "C3"))}, 3, 3)


def test_ram_profile_roundtrip_and_errors():
    text = "2:W:3:P2P1;5:T:2.1;7:T:3"
    assert RamProfile.parse(text).serialize() == text
    for bad in ("7:X:3", "7:T", "7:T:3;7:T:3", "x:T:3", "3:W:0:P3"):
        with pytest.raises(InvalidInput):
            RamProfile.parse(bad)


def test_tame_formula_consistency():
    # gcd form vs closed form wherever cycle lengths are coprime to the element order
    for n in range(2, 6):
        for ct in cycle_type_counts(n):
            for order in range(2, 51):
                for e in [d for d in range(2, order + 1) if order % d == 0]:
                    if any(math.gcd(c, e) != 1 for c in ct):
                        continue
                    rct = regular_cycle_type(order, e)
                    assert tame_compositum_exponent(Tame(ct), Tame(rct)) == ind_coprime_formula(ct, rct)


tame_data = st.sampled_from([None, Tame((2, 1)), Tame((3,))])


@given(tame_data, st.floats(0, 30))
def test_disc_Y_sandwich(dk, Y):
    ramK = RamProfile({7: dk} if dk else {})
    ramK[23] = Tame((2, 1))
    ramL = RamProfile({7: Tame((3,))})
    K, L = FieldData(3, 0, ramK), FieldData(3, 49, ramL)
    exact = disc_compositum(K, L)
    br = disc_Y(K, L, Y)
    bound = disc_bound(ramK.disc_abs(), 49, 3, 3)
    assert exact.lower <= br.lower <= br.upper <= bound
