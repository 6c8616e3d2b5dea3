import itertools

import pytest

from conftest import (
    classical_boundary,
    classical_cells,
    classical_horn,
    classical_spine,
    shapes_with,
)
from thetacat.errors import WindowInsufficientError
from thetacat.subshapes import (
    DEFAULT_WINDOW,
    SubOfRepresentable,
    WindowSpec,
    boundary,
    face_image,
    face_intersection_cells,
    face_membership,
    full_sub,
    horn,
    nondegenerate_cells,
    pullback_along,
    spine,
    sub_algebra,
    sub_intersect,
    sub_union,
    union_of_faces,
    window_for,
)
from thetacat.theta import (
    POINT,
    Shape,
    compose_classes,
    constant_class,
    enumerate_hom,
    epi_classes_between,
    face_class,
    face_descriptor,
    faces_of,
    identity_class,
    is_mono_cell,
    outer_faces,
    shape,
)


def test_window_shapes_ordering():
    w = WindowSpec(2, 2)
    ss = w.shapes()
    assert ss[0] == POINT
    assert list(ss) == sorted(ss, key=lambda s: (s.dim, s.entries))
    assert len(ss) == 1 + 2 + 4
    assert len(WindowSpec(3, 3).shapes()) == 40


def test_window_insufficiency_raises():
    with pytest.raises(WindowInsufficientError):
        boundary(shape(2, 2), WindowSpec(1, 2))
    with pytest.raises(WindowInsufficientError):
        spine(shape(3), WindowSpec(1, 2))


def test_face_membership_examples():
    a = shape(2)
    ident = identity_class(a)
    assert not face_membership(ident, face_descriptor(a, 1, 1))
    vertex1 = constant_class(POINT, a, 1)
    assert face_membership(vertex1, face_descriptor(a, 1, 0))
    # a dropped-coordinate face tests the constant value of the cell
    cell = face_class(face_descriptor(shape(2, 1), 2, 0))  # constant at 1
    assert not face_membership(cell, face_descriptor(shape(2, 1), 2, 1))
    assert face_membership(cell, face_descriptor(shape(2, 1), 2, 0))


def test_boundary_of_interval():
    w = window_for(shape(1))
    bd = boundary(shape(1), w)
    assert len(bd.level(POINT)) == 2
    assert identity_class(shape(1)) not in bd.level(shape(1))


def test_boundary_of_point_is_empty():
    w = window_for(POINT)
    bd = boundary(POINT, w)
    assert all(not cells for cells in bd.levels.values())


def test_boundary_t11_level_interval():
    a = shape(1, 1)
    w = window_for(a)
    bd = boundary(a, w)
    level = bd.level(shape(1))
    # both dropped-coordinate face cells and both vertices-as-edges
    assert len(level) == 4
    face_cells = {face_class(fd) for fd in faces_of(a)}
    assert face_cells <= bd.level(shape(1))


def test_horn_equals_spine_on_triangle():
    a = shape(2)
    w = window_for(a)
    assert sub_algebra("equal", horn(a, 1, 1, w), spine(a, w))


def test_horn_missing_face_tagging():
    h = horn(shape(2, 1), 2, 0, window_for(shape(2, 1)))
    assert not h.inner
    h = horn(shape(2, 1), 1, 1, window_for(shape(2, 1)))
    assert h.inner
    assert not any(fd.inner for fd in faces_of(shape(1, 1)))


def test_horn_invalid_face_raises():
    with pytest.raises(ValueError):
        horn(shape(1, 1), 1, 0, window_for(shape(1, 1)))


def test_spine_of_all_ones_is_full():
    for d in range(4):
        a = Shape((1,) * d)
        w = window_for(a)
        assert sub_algebra("equal", spine(a, w), full_sub(a, w))


def test_spine_point_full():
    w = window_for(POINT)
    assert sub_algebra("equal", spine(POINT, w), full_sub(POINT, w))


def test_horn_union_face_is_boundary():
    for a in shapes_with(3, 3, min_dim=1):
        w = window_for(a)
        bd = boundary(a, w)
        for fd in faces_of(a):
            h = horn(a, fd.k, fd.m, w)
            assert sub_algebra("equal", sub_union(h, face_image(fd, w)), bd)


def test_spine_in_outer_union():
    for a in shapes_with(3, 3, min_dim=1):
        if all(x == 1 for x in a.entries):
            continue
        w = window_for(a)
        assert sub_algebra("subset", spine(a, w), union_of_faces(a, outer_faces(a), w))


def test_sub_algebra_idempotence_and_intersection():
    a = shape(2)
    w = window_for(a)
    bd = boundary(a, w)
    assert sub_algebra("equal", sub_union(bd, bd), bd)
    # vertex 1 is the intersection of the two faces through it
    f0 = face_image(face_descriptor(a, 1, 0), w)
    f2 = face_image(face_descriptor(a, 1, 2), w)
    both = sub_intersect(f0, f2)
    vertex = constant_class(POINT, a, 1)
    assert both.level(POINT) == frozenset(
        {vertex}
    ) and all(
        all(s.degree == 1 and s.components[0].values[0] == 1 for s in both.level(b))
        for b in w.shapes()
    )


def test_sub_algebra_base_mismatch():
    w = window_for(shape(2))
    with pytest.raises(ValueError):
        sub_algebra("union", boundary(shape(2), w), full_sub(shape(1), w))


def test_precomposition_closure():
    for a in [shape(2), shape(2, 1), shape(1, 1)]:
        w = window_for(a)
        boundary(a, w).check_closure()
        spine(a, w).check_closure()
        for fd in faces_of(a):
            horn(a, fd.k, fd.m, w).check_closure()


def test_classical_agreement_dim_one():
    # levels of the one-coordinate constructions against an independent
    # classical simplicial computation, under class <-> monotone map
    def as_map(cls):
        if cls.degree == 1:
            return cls.components[0]
        return cls.components[0]

    for n in range(1, 4):
        a = shape(n)
        w = window_for(a)
        for m in range(0, w.max_dim + 1):
            b = POINT if m == 0 else shape(m)
            level_maps = sorted(as_map(s).values for s in boundary(a, w).level(b))
            assert level_maps == sorted(f.values for f in classical_boundary(n, m))
            level_maps = sorted(as_map(s).values for s in spine(a, w).level(b))
            assert level_maps == sorted(f.values for f in classical_spine(n, m))
            for k in range(n + 1):
                level_maps = sorted(
                    as_map(s).values for s in horn(a, 1, k, w).level(b)
                )
                assert level_maps == sorted(
                    f.values for f in classical_horn(n, k, m)
                )
            full_maps = sorted(as_map(s).values for s in full_sub(a, w).level(b))
            assert full_maps == sorted(f.values for f in classical_cells(n, m))


def test_pullback_examples():
    a = shape(2)
    w = window_for(a)
    ident = identity_class(a)
    assert sub_algebra("equal", pullback_along(full_sub(a, w), ident), full_sub(a, w))
    assert sub_algebra("equal", pullback_along(boundary(a, w), ident), boundary(a, w))
    # the horn pulled back along its own missing face is the boundary
    fc = face_class(face_descriptor(a, 1, 1))
    pb = pullback_along(horn(a, 1, 1, w), fc)
    bd = boundary(shape(1), WindowSpec(w.max_dim, w.max_entry))
    assert pb.levels == bd.levels
    # pullback of anything full along any class is full
    for c in enumerate_hom(shape(1), a):
        assert sub_algebra(
            "equal",
            pullback_along(full_sub(a, w), c),
            full_sub(shape(1), w),
        )


def test_nondegenerate_cells_counts():
    assert len(nondegenerate_cells(full_sub(shape(1), window_for(shape(1))))) == 3
    assert len(nondegenerate_cells(boundary(shape(1, 1), window_for(shape(1, 1))))) == 4
    assert len(nondegenerate_cells(full_sub(POINT, window_for(POINT)))) == 1


def test_nondegenerate_cells_match_brute_force():
    sub = full_sub(shape(2, 1), window_for(shape(2, 1)))
    w = sub.window
    brute = set()
    for b in w.shapes():
        for s in sub.levels[b]:
            degenerate = False
            for b2 in w.shapes():
                for e in epi_classes_between(b, b2):
                    if e.is_identity():
                        continue
                    if any(
                        compose_classes(s2, e) == s for s2 in sub.levels[b2]
                    ):
                        degenerate = True
            if not degenerate:
                brute.add((b, s))
    assert brute == set(nondegenerate_cells(sub))


def test_face_intersections_brute_force():
    cases = shapes_with(2, 3, min_dim=1) + [shape(1, 1, 1), shape(2, 1, 1), shape(2, 2, 2)]
    for a in cases:
        w = window_for(a)
        for fd1, fd2 in itertools.combinations(faces_of(a), 2):
            cells = face_intersection_cells(fd1, fd2)
            for b in w.shapes():
                want = {
                    s
                    for s in enumerate_hom(b, a)
                    if face_membership(s, fd1) and face_membership(s, fd2)
                }
                got = set()
                for c in cells:
                    got |= {
                        compose_classes(c, t) for t in enumerate_hom(b, c.src)
                    }
                assert want == got, (a, fd1, fd2, b)


def test_sub_json_shape():
    a = shape(1, 1)
    data = boundary(a, window_for(a)).to_json()
    assert data["base"] == [1, 1]
    assert all("shape" in lv and "cells" in lv for lv in data["levels"])
