"""Shared helpers: independent oracles used to freeze expected values."""

from __future__ import annotations

import itertools

from thetacat.delta import enumerate_monos
from thetacat.subshapes import SubOfRepresentable
from thetacat.theta import (
    MorphismClass,
    Shape,
    compose_classes,
    enumerate_hom,
    factor_through,
    identity_class,
    mono_cells_into,
)


def shapes_with(max_dim: int, max_entry: int, min_dim: int = 0) -> list[Shape]:
    out = []
    for d in range(min_dim, max_dim + 1):
        out.extend(
            Shape(e) for e in itertools.product(range(1, max_entry + 1), repeat=d)
        )
    return out


# ---------------------------------------------------------------------------
# oracle: maximal proper subobjects, from scratch
#
# A subobject of the representable on `a` is the image of a mono cell;
# containment of images is factorization of the generating cells.  The
# faces must be exactly the maximal ones below the identity.


def brute_maximal_subobjects(a: Shape) -> list[MorphismClass]:
    cells = [m for m in mono_cells_into(a) if m != identity_class(a)]

    def contained(m1, m2):
        return factor_through(m1, m2) is not None

    maximal = []
    for m in cells:
        dominated = False
        for m2 in cells:
            if m2 != m and contained(m, m2) and not contained(m2, m):
                dominated = True
                break
        if not dominated:
            maximal.append(m)
    # deduplicate mutually-factoring cells (same image)
    out = []
    for m in maximal:
        if not any(contained(m, m2) and contained(m2, m) for m2 in out):
            out.append(m)
    return out


# ---------------------------------------------------------------------------
# oracle: classical simplicial sets on the simplex category
#
# Levels of the n-simplex are the monotone maps; boundary, horns and
# spine by image conditions.  Used to pin the dim-1 levels of the
# generalized constructions.


def classical_cells(n: int, level: int):
    return enumerate_monos(level, n)


def classical_boundary(n: int, level: int):
    return [f for f in classical_cells(n, level) if len(set(f.values)) < n + 1]


def classical_horn(n: int, k: int, level: int):
    need = set(range(n + 1)) - {k}
    return [f for f in classical_cells(n, level) if not need <= set(f.values)]


def classical_spine(n: int, level: int):
    return [f for f in classical_cells(n, level) if f.values[-1] - f.values[0] <= 1]


# ---------------------------------------------------------------------------
# oracle: exhaustive naturality of an enumerated family


def family_is_natural(sub: SubOfRepresentable, x, value_at) -> bool:
    """Check one family on a subpresheaf against every window square."""
    window = sub.window
    values = {}
    for b in window.shapes():
        for s in sub.levels[b]:
            values[(b, s)] = value_at(s)
    for b1 in window.shapes():
        for b2 in window.shapes():
            for f in enumerate_hom(b1, b2):
                for s in sub.levels[b2]:
                    if values[(b1, compose_classes(s, f))] != x.apply(
                        f, values[(b2, s)]
                    ):
                        return False
    return True
