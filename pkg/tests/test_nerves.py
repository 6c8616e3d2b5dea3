import random

import pytest

from thetacat.groups import (
    Cocycle2,
    FiniteGroup,
    builtin_group,
    cocycle_tools,
    cohomologous,
    cyclic,
    klein_four,
    normalized_2coboundaries,
    normalized_2cocycles,
    symmetric_3,
)
from thetacat.nerves import (
    H2_WINDOW,
    NerveB1,
    NerveB2EM,
    NerveB2Strict,
    cocycle_to_map,
    homotopy_classes,
    map_to_cocycle,
    nerve_b1,
    nerve_b2_em,
    nerve_b2_strict,
    nerve_from_spec,
)
from thetacat.presheaves import check_functoriality, nat_presheaves
from thetacat.subshapes import WindowSpec
from thetacat.theta import POINT, constant_class, enumerate_hom, shape


# ---------------------------------------------------------------------------
# groups


def test_builtin_groups_validate():
    for name in ("Z2", "Z3", "Z4", "V4", "S3"):
        g = builtin_group(name)
        assert g.mul(g.identity, 1) == 1
        assert g.mul(1, g.inverse[1]) == g.identity
    assert not symmetric_3().abelian
    assert klein_four().abelian
    with pytest.raises(ValueError):
        builtin_group("Q8")


def test_group_json_roundtrip():
    g = klein_four()
    back = FiniteGroup.from_json(g.to_json())
    assert back.table == g.table and back.elements == g.elements


def test_group_table_validation():
    with pytest.raises(ValueError):
        FiniteGroup("bad", ("e", "x"), ((0, 1), (1, 1)))  # no inverse for x
    with pytest.raises(ValueError):
        FiniteGroup("bad", ("e", "x"), ((0, 1), (1, 2)))  # out of range


# ---------------------------------------------------------------------------
# the one-object groupoid nerve


def test_b1_level_sizes():
    b1 = nerve_b1(cyclic(2))
    assert b1.size(shape(2, 1)) == 4
    assert b1.size(POINT) == 1
    assert b1.size(shape(3)) == 8


def test_b1_constant_class_acts_as_identity_string():
    b1 = nerve_b1(cyclic(2))
    const = constant_class(shape(1), shape(1), 1)
    e = b1.group.identity
    for x in b1.elements(shape(1)):
        assert b1.apply(const, x) == (e,)


def test_b1_face_actions_multiply():
    g = cyclic(3)
    b1 = nerve_b1(g)
    from thetacat.theta import face_class, face_descriptor

    # the inner face of the triangle composes the two arrows
    inner = face_class(face_descriptor(shape(2), 1, 1))
    for x, y in b1.elements(shape(2)):
        assert b1.apply(inner, (x, y)) == (g.mul(x, y),)


def test_b1_functoriality():
    for g in (cyclic(2), symmetric_3()):
        assert check_functoriality(nerve_b1(g), WindowSpec(2, 2)).ok


def test_nerve_actions_independent_of_representative():
    # a class only records components up to its degree; the grid nerve
    # reads two components, so a degree-1 class is evaluated through a
    # chosen constant extension.  Any other constant extension must
    # give the same function.
    from thetacat.delta import constant_map
    from thetacat.theta import MorphismClass

    rng = random.Random(5)
    shapes = WindowSpec(2, 2).shapes()
    nerves = [
        nerve_b1(symmetric_3()),
        nerve_b2_strict(cyclic(4)),
        nerve_b2_em(cyclic(3)),
    ]
    for _ in range(500):
        a = rng.choice(shapes)
        b = rng.choice(shapes)
        f = rng.choice(enumerate_hom(a, b))
        depth = 2
        if f.degree > depth:
            continue
        comps = list(f.components)
        for k in range(f.degree + 1, depth + 1):
            comps.append(
                constant_map(a.entry(k), b.entry(k), rng.randint(0, b.entry(k)))
            )
        fake = MorphismClass(a, b, tuple(comps))
        for x_nerve in nerves:
            for x in x_nerve.elements(b):
                assert x_nerve.apply(f, x) == x_nerve.apply(fake, x)


# ---------------------------------------------------------------------------
# the strict 2-nerve


def test_b2_needs_abelian():
    with pytest.raises(ValueError):
        nerve_b2_strict(symmetric_3())
    with pytest.raises(ValueError):
        nerve_b2_em(symmetric_3())


def test_b2_level_sizes():
    b2 = nerve_b2_strict(cyclic(2))
    assert b2.size(shape(2, 1)) == 4
    for n in range(1, 4):
        assert b2.size(shape(n)) == 1
    assert b2.size(shape(2, 2)) == 16


def test_b2_functoriality():
    assert check_functoriality(nerve_b2_strict(cyclic(2)), WindowSpec(2, 2)).ok
    assert check_functoriality(nerve_b2_strict(cyclic(3)), WindowSpec(1, 3)).ok


def test_b2_column_sums():
    a_ = cyclic(4)
    b2 = nerve_b2_strict(a_)
    from thetacat.theta import face_class, face_descriptor

    # composing the two columns of t[2,1] adds the grids
    inner = face_class(face_descriptor(shape(2, 1), 1, 1))
    for x in b2.elements(shape(2, 1)):
        assert b2.apply(inner, x) == (a_.mul(x[0], x[1]),)


# ---------------------------------------------------------------------------
# the cocycle realization


def test_em_level_sizes():
    em = nerve_b2_em(cyclic(2))
    assert em.size(shape(2)) == 2  # one free value: the coefficient group
    assert em.size(shape(3)) == 8
    assert em.size(shape(1)) == 1
    assert em.size(POINT) == 1
    assert em.size(shape(2, 3)) == em.size(shape(2))  # depends on b1 only


def test_em_levels_are_cocycles():
    em = nerve_b2_em(cyclic(3))
    for n in (2, 3):
        for table in em.elements(shape(n)):
            assert em._is_simplicial_cocycle(n, table)


def test_em_functoriality():
    assert check_functoriality(nerve_b2_em(cyclic(2)), WindowSpec(2, 2)).ok
    assert check_functoriality(nerve_b2_em(cyclic(3)), WindowSpec(1, 3)).ok


def test_nerve_from_spec():
    assert nerve_from_spec("B1:Z2").name == "B1(Z2)"
    assert nerve_from_spec("B2strict:Z4").name == "B2(Z4)"
    assert nerve_from_spec("B2em:Z3").name == "B2em(Z3)"
    with pytest.raises(ValueError):
        nerve_from_spec("B3:Z2")


# ---------------------------------------------------------------------------
# brute-force cohomology


def test_cocycle_counts_frozen():
    # classical values, rebuilt by exhaustive enumeration
    z2, z3 = cyclic(2), cyclic(3)
    data = cocycle_tools(z2, z2)
    assert (len(data.z2), len(data.b2), data.classes) == (2, 1, 2)
    data = cocycle_tools(z3, z3)
    assert (len(data.z2), len(data.b2), data.classes) == (9, 3, 3)
    data = cocycle_tools(z2, z3)
    assert (len(data.z2), len(data.b2), data.classes) == (3, 3, 1)


def test_cocycle_validate():
    z2 = cyclic(2)
    for c in normalized_2cocycles(z2, z2):
        c.validate()
    bad = Cocycle2(z2, z2, (0, 1, 0, 0))
    with pytest.raises(ValueError):
        bad.validate()


def test_coboundaries_are_cocycles():
    z4 = cyclic(4)
    z2 = cyclic(2)
    z2set = {c.table for c in normalized_2cocycles(z4, z2)}
    for t in normalized_2coboundaries(z4, z2):
        assert t in z2set


def test_cohomologous_partition():
    z3 = cyclic(3)
    data = cocycle_tools(z3, z3)
    buckets = []
    for c in data.z2:
        for bucket in buckets:
            if cohomologous(c, bucket[0], data.b2):
                bucket.append(c)
                break
        else:
            buckets.append([c])
    assert len(buckets) == data.classes == 3


# ---------------------------------------------------------------------------
# maps vs cocycles


@pytest.mark.parametrize(
    "gname,aname,count",
    [("Z2", "Z2", 2), ("Z3", "Z3", 9), ("Z2", "Z3", 3)],
)
def test_maps_equal_cocycles(gname, aname, count):
    g_, a_ = builtin_group(gname), builtin_group(aname)
    maps = nat_presheaves(NerveB1(g_), NerveB2EM(a_), H2_WINDOW)
    z2 = normalized_2cocycles(g_, a_)
    assert len(maps) == len(z2) == count
    # the two round trips are exact
    for m in maps:
        assert cocycle_to_map(map_to_cocycle(m)) == m
    for c in z2:
        built = cocycle_to_map(c)
        assert map_to_cocycle(built) == c


def test_trivial_cocycle_gives_constant_map():
    z2 = cyclic(2)
    trivial = Cocycle2(z2, z2, (0,) * 4)
    m = cocycle_to_map(trivial)
    em = m.target
    for b in H2_WINDOW.shapes():
        zero_idx = em.index_of(b, tuple([z2.identity] * len(em.elements(b)[0])))
        assert all(v == zero_idx for v in m.components[b])


def test_cocycle_maps_are_natural_beyond_window():
    # the formula evaluates at any shape; check squares into larger shapes
    rng = random.Random(11)
    z3 = cyclic(3)
    for c in normalized_2cocycles(z3, z3):
        m = cocycle_to_map(c, WindowSpec(2, 3))
        src, tgt = m.source, m.target
        for _ in range(10):
            b_out = rng.choice([shape(1, 1, 1), shape(3, 2, 1), shape(2, 2)])
            b_in = rng.choice(H2_WINDOW.shapes())
            f = rng.choice(enumerate_hom(b_out, b_in))
            for x in src.elements(b_in):
                big = cocycle_to_map(c, WindowSpec(3, 3))
                lhs = big.value(b_out, src.apply(f, x))
                rhs = tgt.apply(f, big.value(b_in, x))
                assert lhs == rhs


def test_map_to_cocycle_requires_em_target():
    z2 = cyclic(2)
    maps = nat_presheaves(NerveB1(z2), NerveB2EM(z2), H2_WINDOW)
    c = map_to_cocycle(maps[0])
    c.validate()


# ---------------------------------------------------------------------------
# homotopy classes


@pytest.mark.parametrize(
    "gname,aname,nmaps,nclasses",
    [("Z2", "Z2", 2, 2), ("Z2", "Z3", 3, 1), ("Z3", "Z3", 9, 3)],
)
def test_homotopy_classes(gname, aname, nmaps, nclasses):
    rep = homotopy_classes(builtin_group(gname), builtin_group(aname))
    assert rep.num_maps == nmaps
    assert rep.num_classes == nclasses
    assert rep.h2_classes == nclasses
    assert rep.agree
    assert rep.counterexample is None
    assert rep.relation_was_reflexive
    assert rep.relation_was_symmetric
    assert rep.relation_was_transitive


def test_homotopy_window_precondition():
    with pytest.raises(ValueError):
        homotopy_classes(cyclic(2), cyclic(2), window=WindowSpec(1, 2))


def test_counterexample_artifact_structure():
    # force a disagreement by lying about the cocycle class count
    import thetacat.nerves as nerves_mod

    z2 = cyclic(2)
    real = nerves_mod.homotopy_classes(z2, z2)
    assert real.counterexample is None

    from thetacat import groups as groups_mod

    original = groups_mod.cocycle_tools

    def fake_tools(g_, a_, budget=10**7):
        data = original(g_, a_, budget)
        return data._replace(classes=data.classes + 1)

    import unittest.mock as mock

    # homotopy_classes resolves cocycle_tools from the groups module
    with mock.patch.object(groups_mod, "cocycle_tools", fake_tools):
        rep = nerves_mod.homotopy_classes(z2, z2)
    assert not rep.agree
    art = rep.counterexample
    assert art is not None
    assert set(art) >= {
        "maps",
        "homotopy_pairs",
        "homotopy_transcript",
        "num_classes",
        "h2_classes",
        "cocycles",
        "coboundaries",
    }
    assert art["num_classes"] == 2 and art["h2_classes"] == 3
