"""Subpresheaves of a representable: faces, boundaries, horns, spines.

A subpresheaf is stored levelwise over a finite window of shapes as
sets of classes into the base shape, always closed under
precomposition.  Membership of a single cell in a face, horn or spine
is decidable directly from the class data, so levels can also be
computed at shapes far beyond the base.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .delta import MonotoneMap, constant_map
from .errors import WindowInsufficientError
from .theta import (
    FaceDescriptor,
    MorphismClass,
    Shape,
    compose_classes,
    enumerate_hom,
    face_class,
    faces_of,
    is_mono_cell,
)


class WindowSpec(NamedTuple):
    """All shapes of dimension <= max_dim with entries <= max_entry."""

    max_dim: int
    max_entry: int

    def shapes(self) -> tuple[Shape, ...]:
        return _window_shapes(self.max_dim, self.max_entry)

    def contains(self, s: Shape) -> bool:
        return s.dim <= self.max_dim and all(a <= self.max_entry for a in s.entries)

    def covers_shape(self, a: Shape) -> bool:
        """Whether every shape below `a` is in the window."""
        top = max(a.entries) if a.entries else 1
        return self.max_dim >= a.dim and self.max_entry >= top

    def require_covers(self, a: Shape) -> None:
        if not self.covers_shape(a):
            raise WindowInsufficientError(f"window {self} insufficient for {a}")

    def to_json(self) -> dict:
        return {"max_dim": self.max_dim, "max_entry": self.max_entry}


@lru_cache(maxsize=None)
def _window_shapes(max_dim: int, max_entry: int) -> tuple[Shape, ...]:
    out: list[Shape] = []
    for d in range(max_dim + 1):
        out.extend(
            Shape(entries)
            for entries in itertools.product(range(1, max_entry + 1), repeat=d)
        )
    out.sort(key=lambda s: (s.dim, s.entries))
    return tuple(out)


def window_for(a: Shape, min_dim: int = 0, min_entry: int = 1) -> WindowSpec:
    """The smallest window whose levels determine subobjects of y(a)."""
    top = max(a.entries) if a.entries else 1
    return WindowSpec(max(a.dim, min_dim), max(top, min_entry))


DEFAULT_WINDOW = WindowSpec(3, 3)


# ---------------------------------------------------------------------------
# membership predicates


def face_membership(s: MorphismClass, fd: FaceDescriptor) -> bool:
    """Whether a cell into fd.base factors through the face fd."""
    if s.dst != fd.base:
        raise ValueError(f"cell {s} is not a cell of {fd.base}")
    k, d = fd.k, fd.base.dim
    if fd.base.entry(k) >= 2:
        if k > s.degree:
            return True
        return fd.m not in s.components[k - 1].values
    # dropped top coordinate with entry 1
    if s.degree < d:
        return True
    if s.degree == d:
        return s.components[d - 1].values[0] == 1 - fd.m
    return False


def in_union_of_faces(s: MorphismClass, fds: Iterable[FaceDescriptor]) -> bool:
    return any(face_membership(s, fd) for fd in fds)


def spine_membership(s: MorphismClass) -> bool:
    """Whether every component lands in adjacent vertices of its simplex."""
    return all(f.in_spine() for f in s.components)


# ---------------------------------------------------------------------------
# the levelwise container


@dataclass(frozen=True)
class SubOfRepresentable:
    """A levelwise subset of Hom(-, base) over a window."""

    base: Shape
    window: WindowSpec
    levels: dict  # Shape -> frozenset[MorphismClass]

    def level(self, b: Shape) -> frozenset:
        return self.levels[b]

    def cells_sorted(self, b: Shape) -> list[MorphismClass]:
        return sorted(self.levels[b], key=_cell_key)

    def size(self) -> int:
        return sum(len(v) for v in self.levels.values())

    def state_key(self):
        return tuple(
            (b, tuple(self.cells_sorted(b))) for b in self.window.shapes()
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubOfRepresentable)
            and self.base == other.base
            and self.window == other.window
            and self.levels == other.levels
        )

    def __hash__(self):
        return hash((self.base, self.window, self.state_key()))

    def is_subset(self, other: "SubOfRepresentable") -> bool:
        _check_compatible(self, other)
        return all(self.levels[b] <= other.levels[b] for b in self.window.shapes())

    def check_closure(self) -> None:
        """Verify closure under precomposition, exhaustively on the window."""
        for b2 in self.window.shapes():
            for s in self.levels[b2]:
                for b1 in self.window.shapes():
                    for f in enumerate_hom(b1, b2):
                        if compose_classes(s, f) not in self.levels[b1]:
                            raise AssertionError(
                                f"not closed: {s} along {f} at level {b1}"
                            )

    def to_json(self) -> dict:
        return {
            "base": list(self.base.entries),
            "window": self.window.to_json(),
            "levels": [
                {
                    "shape": list(b.entries),
                    "cells": [s.to_json() for s in self.cells_sorted(b)],
                }
                for b in self.window.shapes()
                if self.levels[b]
            ],
        }


def _cell_key(s: MorphismClass):
    return (s.degree, tuple(f.values for f in s.components), s.src)


def _check_compatible(u: SubOfRepresentable, v: SubOfRepresentable) -> None:
    if u.base != v.base or u.window != v.window:
        raise ValueError("subpresheaves live on different bases or windows")


def _build(base: Shape, window: WindowSpec, predicate) -> SubOfRepresentable:
    levels = {
        b: frozenset(s for s in enumerate_hom(b, base) if predicate(s))
        for b in window.shapes()
    }
    return SubOfRepresentable(base, window, levels)


def full_sub(a: Shape, window: WindowSpec) -> SubOfRepresentable:
    return _build(a, window, lambda s: True)


def boundary(a: Shape, window: WindowSpec) -> SubOfRepresentable:
    """Union of all faces; empty for the point."""
    window.require_covers(a)
    fds = faces_of(a)
    return _build(a, window, lambda s: in_union_of_faces(s, fds))


def face_image(fd: FaceDescriptor, window: WindowSpec) -> SubOfRepresentable:
    window.require_covers(fd.base)
    return _build(fd.base, window, lambda s: face_membership(s, fd))


def union_of_faces(
    a: Shape, fds: Iterable[FaceDescriptor], window: WindowSpec
) -> SubOfRepresentable:
    window.require_covers(a)
    fds = tuple(fds)
    return _build(a, window, lambda s: in_union_of_faces(s, fds))


class Horn(SubOfRepresentable):
    pass


def horn(a: Shape, k: int, m: int, window: WindowSpec) -> SubOfRepresentable:
    """Union of all faces except (k, m); carries the missing face."""
    window.require_covers(a)
    missing = None
    for fd in faces_of(a):
        if fd.k == k and fd.m == m:
            missing = fd
    if missing is None:
        raise ValueError(f"no face ({k},{m}) on {a}")
    rest = tuple(fd for fd in faces_of(a) if fd != missing)
    sub = union_of_faces(a, rest, window)
    h = Horn(a, window, sub.levels)
    object.__setattr__(h, "missing", missing)
    object.__setattr__(h, "inner", missing.inner)
    return h


def spine(a: Shape, window: WindowSpec) -> SubOfRepresentable:
    window.require_covers(a)
    return _build(a, window, spine_membership)


# ---------------------------------------------------------------------------
# set algebra and pullbacks


def sub_union(u: SubOfRepresentable, v: SubOfRepresentable) -> SubOfRepresentable:
    _check_compatible(u, v)
    return SubOfRepresentable(
        u.base, u.window, {b: u.levels[b] | v.levels[b] for b in u.window.shapes()}
    )


def sub_intersect(u: SubOfRepresentable, v: SubOfRepresentable) -> SubOfRepresentable:
    _check_compatible(u, v)
    return SubOfRepresentable(
        u.base, u.window, {b: u.levels[b] & v.levels[b] for b in u.window.shapes()}
    )


def sub_algebra(op: str, u: SubOfRepresentable, v: SubOfRepresentable):
    """Dispatch union | intersect | equal | subset on two subpresheaves."""
    if op == "union":
        return sub_union(u, v)
    if op == "intersect":
        return sub_intersect(u, v)
    if op == "equal":
        _check_compatible(u, v)
        return u.levels == v.levels
    if op == "subset":
        return u.is_subset(v)
    raise ValueError(f"unknown set operation {op!r}")


def pullback_along(
    u: SubOfRepresentable, c: MorphismClass, window: WindowSpec | None = None
) -> SubOfRepresentable:
    """Cells t of y(c.src) whose composite with c lies in u."""
    if c.dst != u.base:
        raise ValueError(f"{c} does not land in {u.base}")
    window = window or u.window
    levels = {}
    for b in window.shapes():
        members = u.levels[b]
        levels[b] = frozenset(
            t for t in enumerate_hom(b, c.src) if compose_classes(c, t) in members
        )
    return SubOfRepresentable(c.src, window, levels)


def image_cells(c: MorphismClass, b: Shape) -> frozenset:
    """The level of the image of y(c) at a shape."""
    return frozenset(compose_classes(c, t) for t in enumerate_hom(b, c.src))


def nondegenerate_cells(u: SubOfRepresentable) -> list[tuple[Shape, MorphismClass]]:
    """Cells not of the form s'.e for a non-identity componentwise epi e."""
    out = []
    for b in u.window.shapes():
        for s in u.cells_sorted(b):
            if is_mono_cell(s):
                out.append((b, s))
    out.sort(key=lambda p: (p[0].dim, p[0].entries, _cell_key(p[1])))
    return out


# ---------------------------------------------------------------------------
# maximal common cells of two faces (drives the horn-filling solver)


def face_intersection_cells(
    fd1: FaceDescriptor, fd2: FaceDescriptor
) -> tuple[MorphismClass, ...]:
    """Maximal cells generating the intersection of two face images.

    Every cell lying in both faces factors through one of the returned
    canonical mono cells, and each returned cell lies in both faces.
    """
    a = fd1.base
    if fd2.base != a:
        raise ValueError("faces of different shapes")
    if fd1 == fd2:
        return (face_class(fd1),)
    d = a.dim
    k1, m1, k2, m2 = fd1.k, fd1.m, fd2.k, fd2.m
    if k1 == k2:
        k, ak = k1, a.entry(k1)
        if ak >= 2:
            if ak - 2 >= 1:
                comps = []
                for j in range(1, d + 1):
                    if j == k:
                        vals = tuple(v for v in range(ak + 1) if v not in (m1, m2))
                        comps.append(MonotoneMap(ak - 2, ak, vals))
                    else:
                        comps.append(_identity(a.entry(j)))
                comps.append(constant_map(0, a.entry(d + 1), 0))
                src = Shape(
                    a.entries[: k - 1] + (ak - 2,) + a.entries[k:]
                )
                return (MorphismClass(src, a, tuple(comps)),)
            # entry 2, both outer vertices removed: only the middle vertex
            v = next(x for x in range(3) if x not in (m1, m2))
            if k == d:
                comps = [_identity(a.entry(j)) for j in range(1, d)]
                comps.append(constant_map(0, ak, v))
                return (MorphismClass(Shape(a.entries[:-1]), a, tuple(comps)),)
            comps = [_identity(a.entry(j)) for j in range(1, k)]
            comps.append(constant_map(0, ak, v))
            return (MorphismClass(Shape(a.entries[: k - 1]), a, tuple(comps)),)
        # twin faces of a dropped coordinate: everything of lower degree
        if d == 1:
            return ()
        src = Shape(a.entries[: d - 2])
        cells = []
        for v in range(a.entry(d - 1) + 1):
            comps = [_identity(a.entry(j)) for j in range(1, d - 1)]
            comps.append(constant_map(0, a.entry(d - 1), v))
            cells.append(MorphismClass(src, a, tuple(comps)))
        return tuple(cells)
    if k1 > k2:
        fd1, fd2 = fd2, fd1
        k1, m1, k2, m2 = fd1.k, fd1.m, fd2.k, fd2.m
    if a.entry(k2) >= 2:
        comps = []
        entries = list(a.entries)
        for j in range(1, d + 1):
            if j == k1:
                comps.append(_skip(a.entry(j), m1))
                entries[j - 1] -= 1
            elif j == k2:
                comps.append(_skip(a.entry(j), m2))
                entries[j - 1] -= 1
            else:
                comps.append(_identity(a.entry(j)))
        comps.append(constant_map(0, a.entry(d + 1), 0))
        return (MorphismClass(Shape(tuple(entries)), a, tuple(comps)),)
    # k2 = d drops its coordinate, k1 < d decrements
    comps = []
    entries = list(a.entries[:-1])
    for j in range(1, d):
        if j == k1:
            comps.append(_skip(a.entry(j), m1))
            entries[j - 1] -= 1
        else:
            comps.append(_identity(a.entry(j)))
    comps.append(constant_map(0, 1, 1 - m2))
    return (MorphismClass(Shape(tuple(entries)), a, tuple(comps)),)


def _identity(n: int) -> MonotoneMap:
    return MonotoneMap(n, n, tuple(range(n + 1)))


def _skip(n: int, m: int) -> MonotoneMap:
    return MonotoneMap(n - 1, n, tuple(i if i < m else i + 1 for i in range(n)))
