from __future__ import annotations

from hypothesis import given, strategies as st

from rado.naturals import INT_BITS, BigNat, NatCodec, bit, bits_of, from_bits, succ


def test_small_numbers_stay_ints():
    assert from_bits({0, 1, 3}) == 11
    assert isinstance(from_bits({INT_BITS - 1}), int)


def test_large_numbers_become_bignat():
    n = from_bits({INT_BITS})
    assert isinstance(n, BigNat)
    assert bit(n, INT_BITS) and not bit(n, 0)


@given(st.sets(st.integers(0, 200), max_size=12))
def test_bits_roundtrip(bs):
    assert bits_of(from_bits(bs)) == frozenset(bs)


def test_ordering_mixes_ints_and_bignats():
    a = from_bits({INT_BITS})
    b = from_bits({INT_BITS, 0})
    c = from_bits({INT_BITS + 1})
    assert 5 < a < b < c
    assert sorted([c, 7, b, a]) == [7, a, b, c]
    assert max(3, a) == a


@given(st.sets(st.integers(0, 60), max_size=8), st.sets(st.integers(0, 60), max_size=8))
def test_bignat_order_matches_int_order(x, y):
    # lift both numbers by the same huge bit; order must follow the ints
    top = INT_BITS + 5
    bx, by = from_bits(x | {top}), from_bits(y | {top})
    ix, iy = from_bits(x), from_bits(y)
    assert (bx < by) == (ix < iy)
    assert (bx == by) == (ix == iy)


def test_succ():
    assert succ(0) == 1
    big = from_bits({INT_BITS})
    assert bits_of(succ(big)) == {INT_BITS, 0}
    assert succ((1 << INT_BITS) - 1) == big


def test_codec_roundtrip_shares_entries():
    big = from_bits({INT_BITS})
    bigger = from_bits({big, 3})
    codec = NatCodec()
    enc = [codec.encode(x) for x in (4, big, bigger, big)]
    assert enc[0] == 4 and enc[1] == enc[3]
    decode = NatCodec.decoder(codec.table())
    assert [decode(e) for e in enc] == [4, big, bigger, big]
    assert codec.wrap({"a": 1})["naturals"] == codec.table()
    assert "naturals" not in NatCodec().wrap({"a": 1})
