import json
from importlib import resources

import numpy as np
import pytest
from sympy import factorint

from sumrank.gf import (
    DigitField,
    FieldTower,
    is_irreducible,
    lex_least_irreducible,
    load_tower,
    registry,
)


def test_registry_entries_are_irreducible():
    reg = registry()
    for key, coeffs in reg["towers"].items():
        h, t = (int(x) for x in key.split(","))
        df = DigitField(h)
        assert coeffs[-1] == 1 and len(coeffs) == t + 1
        assert is_irreducible(df, coeffs), key


def test_registry_entries_are_lex_least():
    # cross-check the frozen data against the generating rule (small degrees)
    reg = registry()
    for key, coeffs in reg["towers"].items():
        h, t = (int(x) for x in key.split(","))
        if h**t > 1 << 13:
            continue
        assert coeffs == lex_least_irreducible(h, t), key


def test_f4_hand_examples(t4):
    z = t4.z()
    assert (z * z).coeffs == (1, 1)  # z^2 = z + 1 mod z^2+z+1
    assert t4.frob(z, "h", 1) == z * z
    gamma = t4.primitive_element()
    assert gamma == z
    assert t4.pow(gamma, 3) == t4.one
    assert [e.coeffs[0] for e in t4.expand(z, "h")] == [0, 1]


def test_field_axioms_random_triples(t16, rng):
    for _ in range(10_000):
        a, b, c = (t16.random_element(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
    x = t16.random_element(rng)
    assert x + t16.zero == x
    while x.is_zero():
        x = t16.random_element(rng)
    assert x * t16.inv(x) == t16.one


def test_axioms_spot_check_large_towers(rng):
    for T in (load_tower(2, 8, 4), load_tower(3, 4, 2), FieldTower(4, 2, 2)):
        for _ in range(50):
            a, b, c = (T.random_element(rng) for _ in range(3))
            assert a * (b + c) == a * b + a * c
            assert (a * b) * c == a * (b * c)
            if not a.is_zero():
                assert a * T.inv(a) == T.one


def test_inverse_of_zero_raises(t16):
    with pytest.raises(ZeroDivisionError):
        t16.inv(t16.zero)


def test_frobenius_is_automorphism(t16, rng):
    for _ in range(200):
        x, y = t16.random_element(rng), t16.random_element(rng)
        assert t16.frob(x + y, "q", 1) == t16.frob(x, "q", 1) + t16.frob(y, "q", 1)
        assert t16.frob(x * y, "h", 1) == t16.frob(x, "h", 1) * t16.frob(y, "h", 1)
    x = t16.random_element(rng)
    assert t16.frob(x, "h", 0) == x
    assert t16.frob(x, "h", t16.t) == x
    assert t16.frob(x, "q", t16.m) == x
    # inverse automorphism
    assert t16.frob(t16.frob(x, "h", -1), "h", 1) == x


def test_h_frobenius_iterated_n_times_is_q_frobenius(t256, rng):
    for _ in range(100):
        x = t256.random_element(rng)
        y = x
        for _ in range(t256.n):
            y = t256.frob(y, "h", 1)
        assert y == t256.frob(x, "q", 1)


def test_fixed_set_of_q_frobenius_is_subfield(t16):
    fixed = {x.coeffs for x in t16.elements() if t16.frob(x, "q", 1) == x}
    subfield = {x.coeffs for x in t16.elements() if t16.is_in_subfield(x)}
    assert fixed == subfield
    assert len(fixed) == t16.q == 4


def test_is_in_subfield_examples(t256):
    assert t256.is_in_subfield(t256.zero)
    assert t256.is_in_subfield(t256.one)
    gamma = t256.primitive_element()
    order = t256.h**t256.t - 1
    norm_image = t256.pow(gamma, order // (t256.q - 1))
    assert t256.is_in_subfield(norm_image)
    assert t256.pow(norm_image, t256.q - 1) == t256.one


def test_primitive_element_order(t256):
    gamma = t256.primitive_element()
    order = t256.h**t256.t - 1
    assert t256.pow(gamma, order) == t256.one
    for p in factorint(order):
        assert t256.pow(gamma, order // p) != t256.one


def test_subfield_generator_and_elements(t256):
    g = t256.subfield_generator()
    assert t256.is_in_subfield(g)
    assert t256.pow(g, t256.q - 1) == t256.one
    els = list(t256.subfield_elements())
    assert len(set(e.coeffs for e in els)) == t256.q
    assert all(t256.is_in_subfield(e) for e in els)


@pytest.mark.parametrize("base", ["h", "q"])
def test_expand_is_linear_and_invertible(t256, rng, base):
    zero_coords = t256.expand(t256.zero, base)
    assert all(c.is_zero() for c in zero_coords)
    scalars = (
        [t256.scalar(d) for d in range(t256.h)]
        if base == "h"
        else list(t256.subfield_elements())
    )
    for _ in range(100):
        x, y = t256.random_element(rng), t256.random_element(rng)
        a = scalars[rng.integers(0, len(scalars))]
        b = scalars[rng.integers(0, len(scalars))]
        lhs = t256.expand(a * x + b * y, base)
        rhs_x = t256.expand(x, base)
        rhs_y = t256.expand(y, base)
        assert lhs == [a * cx + b * cy for cx, cy in zip(rhs_x, rhs_y)]
        assert t256.recombine(t256.expand(x, base), base) == x


def test_expand_q_coordinates_live_in_subfield(t16, rng):
    for _ in range(50):
        x = t16.random_element(rng)
        assert all(t16.is_in_subfield(c) for c in t16.expand(x, "q"))


def test_hex_roundtrip(t256, rng):
    for _ in range(50):
        x = t256.random_element(rng)
        assert t256.from_hex(x.to_hex()) == x
    with pytest.raises(ValueError):
        t256.from_hex("00")


def test_digit_field_prime_power_tables():
    df = DigitField(9)
    for a in range(9):
        for b in range(9):
            for c in range(9):
                assert df.mul(a, df.add(b, c)) == df.add(df.mul(a, b), df.mul(a, c))
    for a in range(1, 9):
        assert df.mul(a, df.inv(a)) == 1


def test_prime_power_base_tower():
    T = FieldTower(4, 2, 2)
    assert T.q == 16 and T.h == 4
    x = T.from_digits((2, 3, 1, 0))
    assert T.frob(x, "h", T.t) == x
    assert T.is_in_subfield(T.pow(x, 0))


def test_tower_rejects_bad_modulus():
    with pytest.raises(ValueError):
        FieldTower(2, 2, 2, modulus=[1, 0, 0, 0, 1])  # x^4+1 = (x+1)^4
    with pytest.raises(ValueError):
        load_tower(2, 7, 3)  # no registry entry for t=21


def test_registry_file_is_valid_json():
    data = resources.files("sumrank").joinpath("registry.json").read_text()
    doc = json.loads(data)
    assert "towers" in doc and "base_fields" in doc
