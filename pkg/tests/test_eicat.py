"""Category structure: axioms, the EI property, order, and serialization."""

import pytest

from eimod import FiniteEICategory
from eimod.instances import arrow_category, discrete_category


def test_fixtures_validate(fi2, fiz2_2, vi2_2, z2cat, arrow, nonmono, discrete3):
    for cat in (fi2, fiz2_2, vi2_2, z2cat, arrow, nonmono, discrete3):
        assert cat.validate() == []


def test_identity_and_composition(arrow):
    assert arrow.identity_of("0") == "e0"
    assert arrow.compose("e1", "a") == "a"
    with pytest.raises(ValueError):
        arrow.compose("a", "e1")  # wrong way around


def test_hom_sets_in_id_order(fi2):
    assert fi2.hom("1", "2") == sorted(fi2.hom("1", "2"))
    assert fi2.hom("2", "1") == []
    assert len(fi2.aut("2")) == 2


def test_endomorphisms_are_invertible(fi2, fiz2_2, vi2_2):
    # every endo composes to the identity with some other endo
    for cat in (fi2, fiz2_2, vi2_2):
        for i in cat.objects:
            e = cat.identity_of(i)
            for g in cat.aut(i):
                assert any(cat.compose(g, h) == e for h in cat.aut(i))


def test_order_antisymmetry(fi3, nonmono):
    for cat in (fi3, nonmono):
        for i in cat.objects:
            for j in cat.objects:
                if i != j and cat.leq(i, j):
                    assert not cat.leq(j, i)


def test_monomorphisms(fi2, nonmono):
    assert all(fi2.is_monomorphism(m) for m in fi2.morphisms)
    assert not nonmono.is_monomorphism("f")
    assert nonmono.is_monomorphism("u")


def test_maximal_objects_and_closure(fi3, discrete3):
    assert fi3.maximal_objects() == ["3"]
    assert fi3.downward_closure(["2"]) == ["0", "1", "2"]
    assert fi3.maximal_objects(["0", "1"]) == ["1"]
    assert discrete3.maximal_objects() == ["0", "1", "2"]
    assert discrete3.downward_closure(["1"]) == ["1"]


def test_right_closed_subcategory(fi3):
    sub = fi3.right_closed_subcategory(["2"])
    assert sub.objects == ["0", "1", "2"]
    assert sub.validate() == []
    # morphism ids survive, so hom sets agree with the ambient category
    assert sub.hom("1", "2") == fi3.hom("1", "2")
    with pytest.raises(ValueError):
        fi3.right_closed_subcategory(["7"])


def test_generating_morphisms_cover_composition(fi2):
    gens = set(fi2.generating_morphisms())
    ids = {fi2.identity_of(i) for i in fi2.objects}
    # every morphism is an identity, a generator, or a planned composite
    produced = ids | gens
    for c, a, b in fi2.composition_plan():
        assert a in produced and b in produced
        assert fi2.compose(a, b) == c
        produced.add(c)
    assert produced == set(fi2.morphisms)


def test_serialization_roundtrip(fi2, z2cat):
    for cat in (fi2, z2cat):
        again = FiniteEICategory.from_dict(cat.to_dict())
        assert again.to_dict() == cat.to_dict()
        assert again.validate() == []


def test_validate_catches_broken_associativity():
    # corrupt the arrow category by redirecting a composite
    d = arrow_category().to_dict()
    d["compose"] = [
        [g, f, ("e1" if (g, f) == ("e1", "a") else gf)] for g, f, gf in d["compose"]
    ]
    cat = FiniteEICategory.from_dict(d)
    assert cat.validate() != []


def test_validate_catches_non_ei():
    # a non-identity idempotent endo breaks invertibility
    morphs = {"e": ("0", "0"), "p": ("0", "0")}
    compose = {("e", "e"): "e", ("e", "p"): "p", ("p", "e"): "p", ("p", "p"): "p"}
    cat = FiniteEICategory(["0"], morphs, {"0": "e"}, compose)
    assert any("invertible" in p or "endo" in p for p in cat.validate())


def test_unknown_object_raises(fi2):
    with pytest.raises(ValueError):
        fi2.hom("0", "9")
    with pytest.raises(ValueError):
        fi2.downward_closure(["9"])


def test_discrete_category(discrete3):
    assert discrete3.validate() == []
    assert discrete_category(1).maximal_objects() == ["0"]
    for i in discrete3.objects:
        for j in discrete3.objects:
            if i != j:
                assert discrete3.hom(i, j) == []
