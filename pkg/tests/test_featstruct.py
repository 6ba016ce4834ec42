import random

import pytest

from revling import featstruct as F


def rt(text):
    """read + canonical write"""
    return F.write_fs(F.read_fs(text))


# ---------------------------------------------------------------------------
# Reading and writing


def test_read_single_attribute():
    node = F.read_fs("[num=sg]")
    assert F.atom_value(F.get_path(node, ["num"])) == "sg"


def test_read_reentrant():
    node = F.read_fs("[agr=?X, subj=[agr=?X]]")
    assert F.get_path(node, ["agr"]) is F.get_path(node, ["subj", "agr"])


def test_read_disjunctive_values():
    node = F.read_fs("[muet={y,fut_cond_e}]")
    assert F.get_path(node, ["muet"]).values == {"y", "fut_cond_e"}


def test_empty_brackets_are_top():
    assert F.read_fs("[]").kind == F.TOP


def test_roundtrip_modulo_renaming():
    for text in [
        "[num=sg]",
        "[agr=?A, subj=[agr=?A]]",
        "[muet={y,fut_cond_e}, spelling_type=double]",
        "[a=[b=[c={x,y}]], d=?V, e=?V]",
        "?Lone",
    ]:
        node = F.read_fs(text)
        again = F.read_fs(F.write_fs(node))
        assert F.equal_mod_renaming(node, again)
        assert F.write_fs(node) == F.write_fs(again)


def test_syntax_error_has_position():
    with pytest.raises(F.FSSyntaxError) as exc:
        F.read_fs("[num=sg, gen]")
    assert exc.value.pos > 0


def test_duplicate_attribute_rejected():
    with pytest.raises(F.FSSyntaxError):
        F.read_fs("[num=sg, num=pl]")


def test_cyclic_structure_rejected():
    with pytest.raises(F.FSSyntaxError):
        F.read_fs("?X=[a=?X]")


def test_shared_env_across_reads():
    env = {}
    a = F.read_fs("[agr=?A]", env)
    b = F.read_fs("[subj=[agr=?A]]", env)
    assert F.get_path(a, ["agr"]) is F.get_path(b, ["subj", "agr"])


# ---------------------------------------------------------------------------
# Unification


def test_unify_disjoint_attributes():
    out = F.unify(F.read_fs("[num=sg]"), F.read_fs("[gen=fem]"))
    assert F.write_fs(out) == rt("[num=sg, gen=fem]")


def test_unify_clash_fails():
    assert F.unify(F.read_fs("[num=sg]"), F.read_fs("[num=pl]")) is None


def test_unify_value_sets_intersect():
    out = F.unify(F.read_fs("[muet={y,fut_cond_e}]"), F.read_fs("[muet={y,n}]"))
    assert F.write_fs(out) == rt("[muet=y]")


def test_unify_empty_intersection_fails():
    assert F.unify(F.read_fs("[muet={y}]"), F.read_fs("[muet={n}]")) is None


def test_unify_atomic_vs_complex_fails():
    assert F.unify(F.read_fs("[f=x]"), F.read_fs("[f=[g=y]]")) is None


def test_unify_reentrancy_propagates():
    out = F.unify(F.read_fs("[agr=?X, subj=[agr=?X]]"),
                  F.read_fs("[agr=[num=sg]]"))
    assert F.atom_value(F.get_path(out, ["subj", "agr", "num"])) == "sg"


def test_unify_does_not_mutate_inputs():
    a = F.read_fs("[agr=?X, subj=[agr=?X]]")
    b = F.read_fs("[agr=[num=sg]]")
    before_a, before_b = F.write_fs(a), F.write_fs(b)
    F.unify(a, b)
    assert F.write_fs(a) == before_a
    assert F.write_fs(b) == before_b


def test_unify_with_top_is_identity():
    a = F.read_fs("[num=sg, agr=[gen=fem]]")
    assert F.equal_mod_renaming(F.unify(a, F.top()), a)


def test_unify_knot_fails_not_hangs():
    a = F.read_fs("[x=?A, y=?A]")
    b = F.read_fs("[x=[f=?B], y=?B]")
    assert F.unify(a, b) is None


# ---------------------------------------------------------------------------
# Subsumption / equality


def test_subsumes_top_everything():
    assert F.subsumes(F.read_fs("[]"), F.read_fs("[num=sg]"))
    assert not F.subsumes(F.read_fs("[num=sg]"), F.read_fs("[]"))


def test_subsumes_value_sets():
    assert F.subsumes(F.read_fs("[muet={y,n}]"), F.read_fs("[muet={y}]"))
    assert not F.subsumes(F.read_fs("[muet={y}]"), F.read_fs("[muet={y,n}]"))


def test_subsumes_reentrancy():
    shared = F.read_fs("[x=?A, y=?A]")
    split = F.read_fs("[x=[p=q], y=[p=q]]")
    assert F.subsumes(split, split)
    assert not F.subsumes(shared, split)
    merged = F.read_fs("[x=?A=[p=q], y=?A]")
    assert F.subsumes(shared, merged)


def test_equal_mod_renaming():
    assert F.equal_mod_renaming(F.read_fs("[agr=?P, s=?P]"),
                                F.read_fs("[agr=?Q, s=?Q]"))
    assert not F.equal_mod_renaming(F.read_fs("[num=sg]"), F.read_fs("[num=pl]"))
    x = F.read_fs("[a=b]")
    assert F.equal_mod_renaming(x, x)


# ---------------------------------------------------------------------------
# Randomized law checks.  random_fs and check_laws are imported by the
# acceptance suite, which runs them 1000 times.

ATTRS = ["f", "g", "h", "agr", "num"]
VALS = ["a", "b", "c", "d"]


def random_fs(rng, depth=4):
    """Small random structure: depth <= 4, <= 6 attributes per node,
    occasional reentrancy via a shared pool."""
    pool = []

    def build(d):
        roll = rng.random()
        if pool and roll < 0.10:
            return rng.choice(pool)
        if d == 0 or roll < 0.35:
            node = F.atom(rng.sample(VALS, rng.randint(1, 3)))
        elif roll < 0.45:
            node = F.top()
        else:
            attrs = {}
            for name in rng.sample(ATTRS, rng.randint(1, min(6, len(ATTRS)))):
                attrs[name] = build(d - 1)
            node = F.fs(attrs)
        pool.append(node)
        return node

    return build(depth)


def check_laws(rng):
    """One round of the unification laws; raises AssertionError on any
    violation."""
    a = random_fs(rng)
    b = random_fs(rng)
    c = random_fs(rng)

    ab = F.unify(a, b)
    ba = F.unify(b, a)
    # commutativity
    if ab is None or ba is None:
        assert ab is None and ba is None
    else:
        assert F.equal_mod_renaming(ab, ba)
    # idempotence and unit
    aa = F.unify(a, a)
    assert aa is not None and F.equal_mod_renaming(aa, a)
    at = F.unify(a, F.top())
    assert at is not None and F.equal_mod_renaming(at, a)
    # result is subsumed by both inputs
    if ab is not None:
        assert F.subsumes(a, ab)
        assert F.subsumes(b, ab)
    # associativity up to renaming
    left = F.unify(ab, c) if ab is not None else None
    bc = F.unify(b, c)
    right = F.unify(a, bc) if bc is not None else None
    if left is None or right is None:
        assert left is None and right is None
    else:
        assert F.equal_mod_renaming(left, right)
    # subsumption is reflexive
    assert F.subsumes(a, a)


def test_unification_laws_random():
    rng = random.Random(20240817)
    for _ in range(200):
        check_laws(rng)
