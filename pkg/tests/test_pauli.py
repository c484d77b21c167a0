import itertools

import numpy as np
import pytest

from stabsample import pauli
from stabsample.pauli import PauliChain, chain_key, compose, count_paulis

import oracles


def all_chains(n):
    for symbols in itertools.product("IXYZ", repeat=n):
        yield PauliChain.from_string("".join(symbols))


def test_compose_self_inverse():
    c = PauliChain.from_string("XZYIX")
    assert compose(c, c).is_identity()


def test_compose_identity_element():
    c = PauliChain.from_string("XZYIX")
    assert compose(c, PauliChain.identity(5)) == c


def test_compose_x_z_gives_y():
    x = PauliChain.from_sites(1, {0: "X"})
    z = PauliChain.from_sites(1, {0: "Z"})
    y = compose(x, z)
    assert y.x[0] == 1 and y.z[0] == 1
    assert y.to_string() == "Y"


def test_compose_size_mismatch():
    with pytest.raises(ValueError, match="size mismatch"):
        compose(PauliChain.identity(3), PauliChain.identity(4))


def test_compose_matches_symbol_table_exhaustively():
    for n in (1, 2, 3):
        chains = [c.to_string() for c in all_chains(n)]
        for a, b in itertools.product(chains, repeat=2):
            got = compose(PauliChain.from_string(a), PauliChain.from_string(b))
            assert got.to_string() == oracles.compose_strings(a, b)


def test_compose_group_laws_random():
    rng = np.random.default_rng(5)
    for _ in range(50):
        a, b, c = (
            PauliChain(rng.integers(0, 2, 12, dtype=np.uint8),
                       rng.integers(0, 2, 12, dtype=np.uint8))
            for _ in range(3)
        )
        assert compose(a, b) == compose(b, a)
        assert compose(compose(a, b), c) == compose(a, compose(b, c))
        assert compose(a, a).is_identity()


def test_count_paulis_identity():
    assert count_paulis(PauliChain.identity(6)) == (0, 0, 0)


def test_count_paulis_direct():
    c = PauliChain.from_sites(5, {0: "X", 1: "Y", 2: "Y", 3: "Z"})
    assert count_paulis(c) == (1, 2, 1)


def test_count_paulis_self_product_vanishes():
    rng = np.random.default_rng(2)
    c = PauliChain(rng.integers(0, 2, 9, dtype=np.uint8),
                   rng.integers(0, 2, 9, dtype=np.uint8))
    assert count_paulis(compose(c, c)) == (0, 0, 0)


def test_count_paulis_vs_oracle_exhaustive():
    for n in (1, 2, 3):
        for c in all_chains(n):
            nx, ny, nz = oracles.counts_string(c.to_string())
            assert count_paulis(c) == (nx, ny, nz)


def test_chain_key_deterministic():
    c = PauliChain.from_string("XZIYXZ")
    assert chain_key(c) == chain_key(c.copy())


def test_chain_key_one_bit_flip_exhaustive_n4():
    keys = {}
    for c in all_chains(4):
        keys[c.to_string()] = chain_key(c)
    assert len(set(keys.values())) == len(keys)  # all 4^4 distinct
    # flipping a single bitplane bit always changes the key
    for s, k in keys.items():
        c = PauliChain.from_string(s)
        for q in range(4):
            for plane in ("x", "z"):
                c2 = c.copy()
                getattr(c2, plane)[q] ^= 1
                assert chain_key(c2) != k


def test_chain_key_serialization_round_trip():
    c = PauliChain.from_string("YIZXXZIY")
    again = PauliChain.from_string(c.to_string())
    assert chain_key(again) == chain_key(c)


@pytest.mark.parametrize("n", [1, 2, 4, 6, 8])
def test_chain_key_no_collisions_small_n(n):
    seen = set()
    for c in all_chains(n):
        seen.add(chain_key(c))
    assert len(seen) == 4**n


def test_chain_key_depends_on_length():
    a = PauliChain.from_string("XZ")
    b = PauliChain.from_string("XZI")
    assert chain_key(a) != chain_key(b)


def test_chain_key_xor_shift_matches_compose():
    # the key's XOR structure: key(a o b) = key(a) ^ delta(b), per lane
    a = PauliChain.from_string("XZIYXZIY")
    b = PauliChain.from_string("IZYXIIZX")
    ka = pauli.chain_key_lanes(a)
    kd = pauli.key_delta_lanes(b)
    kab = pauli.chain_key_lanes(compose(a, b))
    assert kab == (ka[0] ^ kd[0], ka[1] ^ kd[1])


def test_pack_unpack_round_trip():
    rng = np.random.default_rng(9)
    for n in (1, 63, 64, 65, 130):
        bits = rng.integers(0, 2, n, dtype=np.uint8)
        assert np.array_equal(pauli.unpack_bits(pauli.pack_bits(bits), n), bits)


def test_string_parse_errors():
    with pytest.raises(ValueError):
        PauliChain.from_string("XQZ")
