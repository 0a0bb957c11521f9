import random

import pytest

from enkit.eqio import parse_polynomial
from enkit.errors import FamilyTooLarge, UnusedVariable, ZeroPolynomial
from enkit.poly import Polynomial
from enkit.reductions import (FamilyDescriptor, build_compact_n,
                              build_compact_z, build_full_n, build_full_z,
                              build_halved_z, build_master_z, b_polynomial,
                              card_nonneg, card_symmetric, enumerate_t,
                              master_arity, parse_certificate,
                              serialize_certificate, split_signs)
from enkit.system import Add, Mul, One, add_eq, validate


def P(text, arity=None):
    return parse_polynomial(text, arity)


# --------------------------------------------------------------------------
# family counting and enumeration

def test_card_examples():
    assert card_symmetric(2, (1,)) == 25
    assert card_symmetric(0, (3, 3)) == 1
    assert card_nonneg(4, (1, 1)) == 625


def test_enumerate_constants():
    got = enumerate_t(FamilyDescriptor(1, -1, 1, (0,)))
    assert got == [Polynomial.constant(1, -1), Polynomial.zero(1),
                   Polynomial.constant(1, 1)]


def test_enumerate_linear_family():
    got = enumerate_t(FamilyDescriptor(1, -2, 2, (1,)))
    assert len(got) == 25
    assert P("2*x1") in got
    assert P("-2", 1) in got
    assert len({poly.key() for poly in got}) == 25


def test_enumerate_refuses_oversized():
    desc = FamilyDescriptor(2, -5, 5, (9, 9))
    with pytest.raises(FamilyTooLarge):
        enumerate_t(desc, cap=10**6)


def test_enumeration_matches_card():
    for desc in [FamilyDescriptor(1, -1, 1, (2,)),
                 FamilyDescriptor(2, 0, 3, (1, 1)),
                 FamilyDescriptor(2, -2, 2, (1, 1))]:
        assert len(enumerate_t(desc)) == desc.cardinality()


# --------------------------------------------------------------------------
# full-family construction

def test_full_z_difference():
    d = P("x1 - x2")
    system, cert = build_full_z(d)
    assert system.n == 625
    assert cert.mode == "full_Z"
    assert cert.defs[cert.anchor_q] == d.scaled(2)
    assert add_eq(cert.anchor_q, cert.anchor_q, cert.anchor_q) in set(
        system.equations)
    assert validate(system) == []
    # tau is injective and hits the whole family minus the variables
    assert len(cert.defs) == 623
    keys = {poly.key() for poly in cert.defs.values()}
    assert len(keys) == 623


def _assert_identities(system, cert, rng, points, equations):
    for _ in range(points):
        point = tuple(rng.randint(-7, 7) for _ in range(cert.p))
        values = {i + 1: v for i, v in enumerate(point)}
        values.update(
            {s: poly.eval_at(point) for s, poly in cert.defs.items()})
        for eq in equations:
            if isinstance(eq, One):
                assert values[eq.i] == 1
            elif isinstance(eq, Add):
                assert values[eq.i] + values[eq.j] == values[eq.k]
            else:
                assert values[eq.i] * values[eq.j] == values[eq.k]


def test_full_family_identity_soundness():
    rng = random.Random(7)
    # Every equation of the halved family for x1 - x2 (81 members) is a
    # polynomial identity under the naming, at 100 random points.
    d = P("x1 - x2")
    system, cert = build_halved_z(d)
    anchor = add_eq(cert.anchor_q, cert.anchor_q, cert.anchor_q)
    equations = [eq for eq in system.equations if eq != anchor]
    _assert_identities(system, cert, rng, 100, equations)
    # The 625-member family is checked on a sample of its equations.
    system, cert = build_full_z(d)
    anchor = add_eq(cert.anchor_q, cert.anchor_q, cert.anchor_q)
    equations = [eq for eq in system.equations if eq != anchor]
    _assert_identities(system, cert, rng, 20, rng.sample(equations, 500))


def test_full_z_rejects_degenerate():
    with pytest.raises(ZeroPolynomial):
        build_full_z(Polynomial.zero(2))
    with pytest.raises(UnusedVariable):
        build_full_z(P("x1 - 1", arity=2))
    with pytest.raises(FamilyTooLarge):
        build_full_z(P("5*x1^9*x2^9 - 1"))


def test_halved_variants():
    system, cert = build_halved_z(P("x1"))
    assert cert.anchor_q == 1
    assert system.n == 9
    assert Add(1, 1, 1) in set(system.equations)

    system, cert = build_halved_z(P("x1 - x2"))
    assert system.n == 81
    assert cert.defs[cert.anchor_q] == P("x1 - x2")

    system, cert = build_halved_z(P("3*x1"))
    assert system.n == 49


def test_full_n_recipe():
    d = P("x1 - x2")
    system, cert = build_full_n(d)
    assert system.n == 625
    assert cert.defs[cert.anchor_zero].is_zero()
    assert cert.defs[cert.anchor_a] == P("4*x1 + 2*x2")
    assert cert.defs[cert.anchor_b] == P("3*x1 + 3*x2")
    eqs = set(system.equations)
    assert Add(3, 3, 3) in eqs          # the zero node's self-equation
    assert Add(3, 4, 5) in eqs          # the anchored A = B equality
    assert validate(system) == []


def test_b_polynomial_recipe():
    assert b_polynomial(P("x1*x2 - 1")) == P("3*x1*x2 + 3")
    d = P("x1*x2 - 1")
    a = d + b_polynomial(d)
    assert a == P("4*x1*x2 + 2")
    assert b_polynomial(P("-x1")) == P("3*x1")
    assert P("-x1") + b_polynomial(P("-x1")) == P("2*x1")


# --------------------------------------------------------------------------
# compact chains

def test_compact_z_difference():
    system, cert = build_compact_z(P("x1 - x2"))
    assert system.n == 3
    assert set(system.equations) == {Add(2, 3, 1), Add(3, 3, 3)}
    assert cert.anchor_q == 3
    assert cert.defs[3] == P("x1 - x2")


def test_compact_z_square_difference():
    system, cert = build_compact_z(P("x1*x1 - x2"))
    assert system.n == 4
    assert cert.defs[cert.anchor_q] == P("x1^2 - x2")
    assert Mul(1, 1, 3) in set(system.equations)


def test_compact_z_constant_chain():
    # 2*x1 + 3: nodes for 1, 2, 2*x1, 3, 2*x1 + 3
    system, cert = build_compact_z(P("2*x1 + 3"))
    assert system.n == 6
    built = {poly.key() for poly in cert.defs.values()}
    for text in ("1", "2", "2*x1", "3", "2*x1 + 3"):
        assert P(text, arity=1).key() in built
    assert cert.defs[cert.anchor_q] == P("2*x1 + 3")


def test_compact_z_single_variable():
    system, cert = build_compact_z(P("x1"))
    assert system.n == 1
    assert cert.anchor_q == 1
    assert set(system.equations) == {Add(1, 1, 1)}
    assert cert.defs == {}


def test_compact_z_leading_negative_term():
    system, cert = build_compact_z(P("-x1 + x2"))
    assert cert.defs[cert.anchor_q] == P("-x1 + x2")
    zero_nodes = [s for s, poly in cert.defs.items() if poly.is_zero()]
    assert len(zero_nodes) == 1


def test_compact_certificates_injective():
    for text in ("x1 - x2", "2*x1 + 3", "x1^2*x2 - 4*x1 + x2^2 - 7"):
        for build in (build_compact_z, build_compact_n):
            _, cert = build(P(text))
            keys = {poly.key() for poly in cert.defs.values()}
            assert len(keys) == len(cert.defs)


def test_compact_n_difference():
    system, cert = build_compact_n(P("x1 - x2"))
    assert system.n == 3
    assert set(system.equations) == {Add(3, 3, 3), Add(2, 3, 1)}
    assert cert.anchor_zero == 3
    assert cert.anchor_a == 1   # positive side is x1 itself
    assert cert.anchor_b == 2


def test_compact_n_split():
    pos, neg = split_signs(P("x1^2 - 2*x2 + 3"))
    assert pos == P("x1^2 + 3", arity=2)
    assert neg == P("2*x2", arity=2)
    system, cert = build_compact_n(P("x1^2 - 2*x2 + 3"))
    assert cert.defs[cert.anchor_a] == pos
    assert cert.defs[cert.anchor_b] == neg


def test_compact_n_one_sided():
    # All-negative polynomial: the positive side is the zero node itself.
    system, cert = build_compact_n(P("-x1 - 1"))
    assert cert.anchor_a == cert.anchor_zero
    system, cert = build_compact_n(P("x1 + 1"))
    assert cert.anchor_b == cert.anchor_zero


def test_compact_rejects_zero():
    with pytest.raises(ZeroPolynomial):
        build_compact_n(Polynomial.zero(1))


def test_compact_chain_linear_growth():
    # n stays linear-ish in the input size, nothing like the families.
    d = P("7*x1^2*x2 - 5*x1*x2^2 + 3*x2 - 11")
    system, _ = build_compact_z(d)
    assert system.n < 40


@pytest.mark.parametrize("text,builder,domain,radius", [
    ("x1 + x2", build_halved_z, "Z", 2),
    ("x1*x2 - 1", build_halved_z, "Z", 2),
    ("x1^2 - 2", build_halved_z, "Z", 3),
    ("2*x1", build_full_z, "Z", 3),
    ("x1 - 1", build_full_z, "Z", 3),
    ("x1*x2 - 1", build_full_n, "N", 2),
    ("-x1", build_full_n, "N", 3),
    ("x1^2 - 2", build_full_n, "N", 3),
])
def test_full_family_equivalence_battery(text, builder, domain, radius):
    from enkit.oracle import Box, check_equivalence
    d = P(text)
    system, cert = builder(d)
    box = (Box.cube(d.arity, radius) if domain == "Z"
           else Box.cube_nonneg(d.arity, radius))
    report = check_equivalence(d, system, cert, box, domain)
    assert report.passed, report.failures


# --------------------------------------------------------------------------
# certificates on disk

@pytest.mark.parametrize("build,source", [
    (build_compact_z, "x1 - x2"),
    (build_compact_n, "x1^2 - 2*x2 + 3"),
    (build_halved_z, "x1 - x2"),
    (build_full_n, "x1 - x2"),
])
def test_certificate_roundtrip(build, source):
    _, cert = build(P(source))
    text = serialize_certificate(cert)
    back = parse_certificate(text)
    assert back == cert
    assert serialize_certificate(back) == text


# --------------------------------------------------------------------------
# the master polynomial

def test_master_shape():
    w = P("x1 - x2")
    master = build_master_z(w)
    assert master.arity == 10 == master_arity(2)
    # witness: x1 = x2 = 5 with 5 = 2^2 + 1^2
    assert master.eval_at((5, 5, 2, 1, 0, 0, 2, 1, 0, 0)) == 0
    # -1 is not a sum of four squares
    for quad in ((0, 0, 0, 0), (1, 0, 0, 0), (2, 1, 1, 3)):
        assert master.eval_at((-1, -1) + quad + quad) > 0


def test_master_nonnegative_everywhere():
    master = build_master_z(P("x1 - x2"))
    rng = random.Random(11)
    for _ in range(200):
        point = tuple(rng.randint(-5, 5) for _ in range(10))
        assert master.eval_at(point) >= 0


def test_master_existential_blocks():
    w = P("x1 + x3 - x2", arity=3)
    master = build_master_z(w)
    assert master.arity == 3 + 8 + 4
    # x1=2, x2=3, x3=1; quads: 2=1+1, 3=1+1+1, 1=1
    point = (2, 3, 1, 1, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0, 0)
    assert master.eval_at(point) == 0


def test_master_needs_two_variables():
    with pytest.raises(ValueError):
        build_master_z(P("x1"))
