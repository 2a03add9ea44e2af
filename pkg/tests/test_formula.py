import random

import pytest

from polyplane.formula import (And, Bottom, Box, Diamond, Iff, Implies, Not,
                               Or, ParseError, Var, ast_size, closure, negate,
                               parse, pretty, subformulas, substitute,
                               variables)

from helpers import all_formulas, random_formula

p, q, r = Var("p"), Var("q"), Var("r")


def test_parse_single_token():
    assert parse("p") == p
    assert parse("F") == Bottom()
    assert parse("T") == Not(Bottom())


def test_parse_axiom_one():
    got = parse("p -> [](~p -> [](p -> []p))")
    want = Implies(p, Box(Implies(Not(p), Box(Implies(p, Box(p))))))
    assert got == want


def test_precedence_table():
    assert parse("<>p & ~q | r") == Or(And(Diamond(p), Not(q)), r)
    assert parse("p -> q -> r") == Implies(p, Implies(q, r))
    assert parse("p <-> q <-> r") == Iff(p, Iff(q, r))
    assert parse("p & q & r") == And(And(p, q), r)
    assert parse("p | q & r") == Or(p, And(q, r))
    assert parse("~[]<>p") == Not(Box(Diamond(p)))


def test_roundtrip_exhaustive_small():
    for f in all_formulas(4):
        assert parse(pretty(f)) == f


def test_roundtrip_random():
    rng = random.Random(42)
    for _ in range(300):
        f = random_formula(rng, rng.randint(1, 14))
        assert parse(pretty(f)) == f


def test_parse_error_position_and_expectation():
    with pytest.raises(ParseError) as ei:
        parse("p &\n& q")
    assert ei.value.line == 2 and ei.value.col == 1
    assert any("identifier" in e for e in ei.value.expected)
    with pytest.raises(ParseError):
        parse("p q")
    with pytest.raises(ParseError):
        parse("(p -> q")
    with pytest.raises(ParseError):
        parse("")


def test_var_name_rules():
    assert Var("p_1").name == "p_1"
    with pytest.raises(ValueError):
        Var("T")
    with pytest.raises(ValueError):
        Var("1p")
    with pytest.raises(ValueError):
        Var("")


def test_closure_atom():
    assert closure(p) == frozenset({p, Not(p)})


def test_closure_diamond():
    assert closure(Diamond(p)) == frozenset(
        {Diamond(p), Not(Diamond(p)), p, Not(p)})


def test_closure_axiom_one_membership():
    # hand enumeration: 8 subformulas; single negation adds one partner per
    # non-negated member, and ~p's partner p is already there, so 14 total
    ax = parse("p -> [](~p -> [](p -> []p))")
    inner = parse("[](p -> []p)")
    mid = parse("~p -> [](p -> []p)")
    positives = [p, Box(p), Implies(p, Box(p)), inner, mid, Box(mid), ax]
    want = set(positives) | {Not(f) for f in positives}
    assert closure(ax) == frozenset(want)
    assert len(closure(ax)) == 14


def test_closure_properties():
    rng = random.Random(7)
    for _ in range(100):
        f = random_formula(rng, rng.randint(1, 10))
        cl = closure(f)
        assert len(cl) <= 2 * len(subformulas(f))
        for g in cl:
            assert negate(g) in cl
            for child in subformulas(g):
                assert child in cl or Not(child) in cl or (
                    isinstance(child, Not) and child.sub in cl)


def test_substitute():
    assert substitute(Or(p, q), {"p": Bottom()}) == Or(Bottom(), q)
    assert substitute(Diamond(p), {"p": Diamond(p)}) == Diamond(Diamond(p))
    ax = parse("p -> [](~p -> [](p -> []p))")
    assert variables(substitute(ax, {"p": q})) == {"q"}
    assert substitute(ax, {}) == ax


def test_ast_size_and_variables():
    assert ast_size(parse("p & q -> <>r")) == 6
    assert variables(parse("p & q -> <>r")) == {"p", "q", "r"}
    assert variables(Bottom()) == frozenset()
