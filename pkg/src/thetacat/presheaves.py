"""Finite presheaves on the generalized-simplex category.

A presheaf knows its level set at every shape and a contravariant
action of morphism classes.  Levels and action arrays are memoized by
index, so downstream enumeration works on plain ints.  Natural families
are enumerated three ways, all exact:

* out of a union of face images, by solving for the values on the face
  roots with compatibility on the maximal common cells of face pairs;
* out of an arbitrary subpresheaf of a representable, by solving for
  the values on its nondegenerate cells with face incidences;
* between two presheaves, by solving for all level values with
  constraints along a generating family of classes (faces and
  componentwise epis), which every class of the window factors through.
"""

from __future__ import annotations

import itertools
import random
from typing import NamedTuple

from .csp import Network
from .delta import constant_map
from .subshapes import (
    SubOfRepresentable,
    WindowSpec,
    face_intersection_cells,
    window_for,
)
from .theta import (
    FaceDescriptor,
    MorphismClass,
    Shape,
    compose_classes,
    enumerate_hom,
    epi_classes_between,
    epi_mono_factor_class,
    face_class,
    faces_of,
    factor_through,
    identity_class,
    is_mono_cell,
    mono_cells_into,
)

DEFAULT_BUDGET = 10**7


class Presheaf:
    """Base class: caching of level sets and action arrays."""

    name = "presheaf"

    def __init__(self):
        self._elems: dict[Shape, tuple] = {}
        self._index: dict[Shape, dict] = {}
        self._actions: dict[MorphismClass, tuple[int, ...]] = {}

    # subclasses implement these two
    def _elements(self, b: Shape) -> tuple:
        raise NotImplementedError

    def apply(self, f: MorphismClass, x):
        """The action of a class f: B -> B' on an element of the B' level."""
        raise NotImplementedError

    def elements(self, b: Shape) -> tuple:
        if b not in self._elems:
            self._elems[b] = self._elements(b)
        return self._elems[b]

    def size(self, b: Shape) -> int:
        return len(self.elements(b))

    def index_of(self, b: Shape, x) -> int:
        if b not in self._index:
            self._index[b] = {x: i for i, x in enumerate(self.elements(b))}
        return self._index[b][x]

    def action(self, f: MorphismClass) -> tuple[int, ...]:
        """Index array of the action: position i holds the index in the
        f.src level of the image of the i-th element of the f.dst level."""
        arr = self._actions.get(f)
        if arr is None:
            arr = tuple(
                self.index_of(f.src, self.apply(f, x)) for x in self.elements(f.dst)
            )
            self._actions[f] = arr
        return arr

    def label(self, x):
        """JSON-friendly rendering of an element."""
        if isinstance(x, tuple):
            return list(x)
        return x


class Representable(Presheaf):
    def __init__(self, base: Shape):
        super().__init__()
        self.base = base
        self.name = f"y({base})"

    def _elements(self, b: Shape) -> tuple:
        return enumerate_hom(b, self.base)

    def apply(self, f: MorphismClass, x: MorphismClass) -> MorphismClass:
        return compose_classes(x, f)

    def label(self, x: MorphismClass):
        return x.to_json()


class TerminalPresheaf(Presheaf):
    name = "1"

    def _elements(self, b: Shape) -> tuple:
        return ("*",)

    def apply(self, f: MorphismClass, x):
        return "*"


class ProductPresheaf(Presheaf):
    def __init__(self, left: Presheaf, right: Presheaf):
        super().__init__()
        self.left, self.right = left, right
        self.name = f"({left.name} x {right.name})"

    def _elements(self, b: Shape) -> tuple:
        return tuple(
            itertools.product(self.left.elements(b), self.right.elements(b))
        )

    def apply(self, f: MorphismClass, x):
        return (self.left.apply(f, x[0]), self.right.apply(f, x[1]))

    def label(self, x):
        return [self.left.label(x[0]), self.right.label(x[1])]


def product(x: Presheaf, y: Presheaf) -> ProductPresheaf:
    return ProductPresheaf(x, y)


class SubAsPresheaf(Presheaf):
    """A subpresheaf of a representable, viewed as a presheaf on its window."""

    def __init__(self, sub: SubOfRepresentable):
        super().__init__()
        self.sub = sub
        self.name = f"sub({sub.base})"

    def _elements(self, b: Shape) -> tuple:
        return tuple(self.sub.cells_sorted(b))

    def apply(self, f: MorphismClass, x: MorphismClass) -> MorphismClass:
        return compose_classes(x, f)


class TablePresheaf(Presheaf):
    """Explicit levels and action tables; the JSON-facing realization."""

    def __init__(self, levels: dict, actions: dict, name: str = "table"):
        super().__init__()
        self.levels = dict(levels)
        self.actions_table = dict(actions)
        self.name = name

    def _elements(self, b: Shape) -> tuple:
        return tuple(self.levels[b])

    def apply(self, f: MorphismClass, x):
        row = self.actions_table[f]
        return self.elements(f.src)[row[self.index_of(f.dst, x)]]

    @classmethod
    def from_presheaf(cls, x: Presheaf, window: WindowSpec, name=None):
        """Materialize every level and every action over a window."""
        levels = {b: x.elements(b) for b in window.shapes()}
        actions = {}
        for b1 in window.shapes():
            for b2 in window.shapes():
                for f in enumerate_hom(b1, b2):
                    actions[f] = x.action(f)
        return cls(levels, actions, name or f"table({x.name})")


def table_to_json(x: TablePresheaf) -> dict:
    levels = []
    for b in sorted(x.levels, key=lambda s: (s.dim, s.entries)):
        levels.append(
            {"shape": list(b.entries), "elements": [x.label(e) for e in x.levels[b]]}
        )
    actions = []
    for f in sorted(x.actions_table, key=lambda f: (f.src, f.dst, f.components)):
        actions.append({"class": f.to_json(), "map": list(x.actions_table[f])})
    return {"levels": levels, "actions": actions}


def table_from_json(data: dict, name: str = "table") -> TablePresheaf:
    from .theta import class_from_json

    levels = {}
    for lv in data["levels"]:
        b = Shape(tuple(lv["shape"]))
        levels[b] = tuple(_freeze(e) for e in lv["elements"])
    actions = {}
    for row in data["actions"]:
        f = class_from_json(row["class"])
        actions[f] = tuple(row["map"])
    return TablePresheaf(levels, actions, name)


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(v) for v in x)
    return x


# ---------------------------------------------------------------------------
# truncation and extension


def project_shape(b: Shape, n: int) -> Shape:
    return Shape(b.entries[:n])


def project_class(f: MorphismClass, n: int) -> MorphismClass:
    """Image of a class under the projection that drops coordinates past n."""
    ps, pd = project_shape(f.src, n), project_shape(f.dst, n)
    if f.degree <= n:
        return MorphismClass(ps, pd, f.components)
    return MorphismClass(ps, pd, f.components[:n] + (constant_map(0, 0, 0),))


class TruncatedPresheaf(Presheaf):
    def __init__(self, x: Presheaf, n: int):
        super().__init__()
        self.inner, self.n = x, n
        self.name = f"{x.name}|<={n}"

    def _elements(self, b: Shape) -> tuple:
        if b.dim > self.n:
            raise ValueError(f"{b} exceeds truncation level {self.n}")
        return self.inner.elements(b)

    def apply(self, f: MorphismClass, x):
        if f.src.dim > self.n or f.dst.dim > self.n:
            raise ValueError("class exceeds truncation level")
        return self.inner.apply(f, x)


class ExtendedPresheaf(Presheaf):
    def __init__(self, xn: Presheaf, n: int):
        super().__init__()
        self.inner, self.n = xn, n
        self.name = f"extend({xn.name})"

    def _elements(self, b: Shape) -> tuple:
        return self.inner.elements(project_shape(b, self.n))

    def apply(self, f: MorphismClass, x):
        return self.inner.apply(project_class(f, self.n), x)


def truncate(x: Presheaf, n: int) -> TruncatedPresheaf:
    return TruncatedPresheaf(x, n)


def extend(xn: Presheaf, n: int) -> ExtendedPresheaf:
    return ExtendedPresheaf(xn, n)


# ---------------------------------------------------------------------------
# functoriality checking


class FunctorialityReport(NamedTuple):
    ok: bool
    mode: str
    identities_checked: int
    pairs_checked: int
    violation: tuple | None


def _composable_pair_count(window: WindowSpec) -> int:
    shapes = window.shapes()
    sizes = {
        (b1, b2): len(enumerate_hom(b1, b2)) for b1 in shapes for b2 in shapes
    }
    total = 0
    for b1 in shapes:
        for b2 in shapes:
            for b3 in shapes:
                total += sizes[(b1, b2)] * sizes[(b2, b3)]
    return total


def check_functoriality(
    x: Presheaf,
    window: WindowSpec,
    pair_ceiling: int = 2_000_000,
    samples: int = 300,
    seed: int = 0,
) -> FunctorialityReport:
    """Verify identity actions and composite actions over the window.

    Exhaustive over all composable pairs when the window is small
    enough, otherwise all generator pairs (faces and epis) plus a
    seeded random sample of general pairs.
    """
    shapes = window.shapes()
    ident = 0
    for b in shapes:
        arr = x.action(identity_class(b))
        if arr != tuple(range(x.size(b))):
            return FunctorialityReport(False, "identity", ident, 0, (b,))
        ident += 1

    def bad(f, g):
        lhs = x.action(compose_classes(g, f))
        garr, farr = x.action(g), x.action(f)
        rhs = tuple(farr[v] for v in garr)
        return None if lhs == rhs else (f, g, lhs, rhs)

    pairs = 0
    if _composable_pair_count(window) <= pair_ceiling:
        for b1 in shapes:
            for b2 in shapes:
                for f in enumerate_hom(b1, b2):
                    for b3 in shapes:
                        for g in enumerate_hom(b2, b3):
                            witness = bad(f, g)
                            pairs += 1
                            if witness:
                                return FunctorialityReport(
                                    False, "exhaustive", ident, pairs, witness
                                )
        return FunctorialityReport(True, "exhaustive", ident, pairs, None)

    for b2 in shapes:
        gens_in = [face_class(fd) for fd in faces_of(b2)]
        for b in shapes:
            gens_in.extend(epi_classes_between(b, b2))
        gens_out = []
        for b3 in shapes:
            gens_out.extend(
                fc
                for fd in faces_of(b3)
                if (fc := face_class(fd)).src == b2
            )
            gens_out.extend(epi_classes_between(b2, b3))
        for f in gens_in:
            for g in gens_out:
                witness = bad(f, g)
                pairs += 1
                if witness:
                    return FunctorialityReport(False, "generators", ident, pairs, witness)
    rng = random.Random(seed)
    for _ in range(samples):
        b1, b2, b3 = (rng.choice(shapes) for _ in range(3))
        h1, h2 = enumerate_hom(b1, b2), enumerate_hom(b2, b3)
        if not h1 or not h2:
            continue
        witness = bad(rng.choice(h1), rng.choice(h2))
        pairs += 1
        if witness:
            return FunctorialityReport(False, "generators+sampled", ident, pairs, witness)
    return FunctorialityReport(True, "generators+sampled", ident, pairs, None)


# ---------------------------------------------------------------------------
# natural families out of unions of face images


class FaceUnionFamily:
    """A natural family on a union of faces, stored by its root values.

    root_values[i] is an index into x.elements(roots[i].target); the
    value at any other cell of the union is derived by factoring the
    cell through a containing root.
    """

    __slots__ = ("base", "roots", "x", "root_values")

    def __init__(self, base, roots, x, root_values):
        self.base = base
        self.roots = roots
        self.x = x
        self.root_values = tuple(root_values)

    def key(self):
        return self.root_values

    def value_at(self, cell: MorphismClass):
        """The family's value on any cell of the union (as an element)."""
        epi, mono = epi_mono_factor_class(cell)
        for fd, val in zip(self.roots, self.root_values):
            u = factor_through(mono, face_class(fd))
            if u is not None:
                xm = self.x.apply(u, self.x.elements(fd.target)[val])
                return self.x.apply(epi, xm) if not epi.is_identity() else xm
        raise ValueError(f"cell {cell} is not in the union of the roots")

    def __eq__(self, other):
        return (
            isinstance(other, FaceUnionFamily)
            and self.base == other.base
            and self.roots == other.roots
            and self.root_values == other.root_values
        )

    def __hash__(self):
        return hash((self.base, self.roots, self.root_values))

    def to_json(self):
        return {
            "base": list(self.base.entries),
            "roots": [[fd.k, fd.m] for fd in self.roots],
            "values": [
                self.x.label(self.x.elements(fd.target)[v])
                for fd, v in zip(self.roots, self.root_values)
            ],
        }


def nat_face_union(
    a: Shape,
    roots: tuple[FaceDescriptor, ...],
    x: Presheaf,
    budget: int = DEFAULT_BUDGET,
) -> list[FaceUnionFamily]:
    """All natural families on the union of the given face images."""
    roots = tuple(roots)
    net = Network()
    for fd in roots:
        net.add_var(range(x.size(fd.target)))
    for i, fd1 in enumerate(roots):
        arr1 = {}
        for j in range(i + 1, len(roots)):
            fd2 = roots[j]
            shared = face_intersection_cells(fd1, fd2)
            if not shared:
                continue
            keys1, keys2 = _shared_keys(x, fd1, shared), _shared_keys(x, fd2, shared)
            allowed: dict[int, set[int]] = {}
            buckets: dict[tuple, list[int]] = {}
            for v2, key in enumerate(keys2):
                buckets.setdefault(key, []).append(v2)
            for v1, key in enumerate(keys1):
                allowed[v1] = set(buckets.get(key, ()))
            net.add_table(i, j, allowed)
    out = []
    for sol in net.solve_all(budget):
        out.append(FaceUnionFamily(a, roots, x, sol))
    out.sort(key=lambda fam: fam.root_values)
    return out


def _shared_keys(x: Presheaf, fd: FaceDescriptor, shared) -> list[tuple]:
    """For each value at the root face, its restriction to the shared cells."""
    arrays = []
    for cell in shared:
        u = factor_through(cell, face_class(fd))
        if u is None:
            raise AssertionError(f"shared cell {cell} does not divide {fd}")
        arrays.append(x.action(u))
    return [tuple(arr[v] for arr in arrays) for v in range(x.size(fd.target))]


def restriction_key(x: Presheaf, a: Shape, xa_index: int, roots) -> tuple[int, ...]:
    """Root values of the family obtained by restricting an element of x(a)."""
    return tuple(x.action(face_class(fd))[xa_index] for fd in roots)


# ---------------------------------------------------------------------------
# natural families out of an arbitrary subpresheaf of a representable


class CellFamily:
    """A natural family on a subpresheaf, stored on its nondegenerate cells."""

    __slots__ = ("sub", "x", "cells", "values")

    def __init__(self, sub, x, cells, values):
        self.sub = sub
        self.x = x
        self.cells = cells
        self.values = tuple(values)

    def value_at(self, cell: MorphismClass):
        epi, mono = epi_mono_factor_class(cell)
        idx = self.cells.index(mono)
        xm = self.x.elements(mono.src)[self.values[idx]]
        return self.x.apply(epi, xm) if not epi.is_identity() else xm

    def __eq__(self, other):
        return (
            isinstance(other, CellFamily)
            and self.cells == other.cells
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.cells, self.values))


def nat_cells(
    sub: SubOfRepresentable, x: Presheaf, budget: int = DEFAULT_BUDGET
) -> list[CellFamily]:
    """All natural families on a subpresheaf, by generic cell search."""
    cells = [
        s
        for b in sub.window.shapes()
        for s in sub.cells_sorted(b)
        if is_mono_cell(s)
    ]
    cells.sort(key=lambda s: (s.src.dim + sum(s.src.entries), s.src, _ckey(s)))
    pos = {s: i for i, s in enumerate(cells)}
    net = Network()
    for s in cells:
        net.add_var(range(x.size(s.src)))
    for s in cells:
        for fd in faces_of(s.src):
            fc = face_class(fd)
            lower = compose_classes(s, fc)
            net.add_fn(pos[s], pos[lower], x.action(fc))
    out = [CellFamily(sub, x, tuple(cells), sol) for sol in net.solve_all(budget)]
    out.sort(key=lambda fam: fam.values)
    return out


def _ckey(s: MorphismClass):
    return tuple(f.values for f in s.components)


# ---------------------------------------------------------------------------
# natural families between presheaves


class PresheafNatFamily:
    """A natural transformation stored as per-shape index arrays."""

    __slots__ = ("source", "target", "window", "components")

    def __init__(self, source, target, window, components):
        self.source = source
        self.target = target
        self.window = window
        self.components = components  # Shape -> tuple of target indices

    def key(self):
        return tuple(self.components[b] for b in self.window.shapes())

    def component(self, b: Shape) -> tuple[int, ...]:
        return self.components[b]

    def value(self, b: Shape, x):
        return self.target.elements(b)[self.components[b][self.source.index_of(b, x)]]

    def __eq__(self, other):
        return isinstance(other, PresheafNatFamily) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_natural_at(self, f: MorphismClass) -> bool:
        """Check one naturality square (both shapes must be in the window)."""
        src_arr = self.source.action(f)
        tgt_arr = self.target.action(f)
        phi_src, phi_dst = self.components[f.src], self.components[f.dst]
        return all(
            phi_src[src_arr[i]] == tgt_arr[phi_dst[i]]
            for i in range(self.source.size(f.dst))
        )

    def to_json(self):
        return {
            "source": self.source.name,
            "target": self.target.name,
            "components": [
                {"shape": list(b.entries), "map": list(self.components[b])}
                for b in self.window.shapes()
            ],
        }


def generator_classes(window: WindowSpec) -> list[MorphismClass]:
    """Faces and componentwise epis between window shapes.

    Every class between window shapes is a composite of these staying
    inside the window, so naturality along them implies naturality.
    """
    gens: list[MorphismClass] = []
    shapes = window.shapes()
    for b in shapes:
        for fd in faces_of(b):
            gens.append(face_class(fd))
    for b1 in shapes:
        for b2 in shapes:
            for e in epi_classes_between(b1, b2):
                if not e.is_identity():
                    gens.append(e)
    return gens


def nat_presheaves(
    source: Presheaf,
    target: Presheaf,
    window: WindowSpec,
    budget: int = DEFAULT_BUDGET,
) -> list[PresheafNatFamily]:
    """All natural transformations source -> target over the window."""
    shapes = window.shapes()
    net = Network()
    var_of: dict[tuple[Shape, int], int] = {}
    for b in shapes:
        nvals = target.size(b)
        for i in range(source.size(b)):
            var_of[(b, i)] = net.add_var(range(nvals))
    for f in generator_classes(window):
        src_arr = source.action(f)
        tgt_arr = target.action(f)
        for i in range(source.size(f.dst)):
            net.add_fn(var_of[(f.dst, i)], var_of[(f.src, src_arr[i])], tgt_arr)
    out = []
    for sol in net.solve_all(budget):
        comps = {}
        for b in shapes:
            comps[b] = tuple(sol[var_of[(b, i)]] for i in range(source.size(b)))
        out.append(PresheafNatFamily(source, target, window, comps))
    out.sort(key=lambda fam: fam.key())
    return out


def enumerate_nat(source, target: Presheaf, window: WindowSpec, budget: int = DEFAULT_BUDGET):
    """Natural families from a subpresheaf or presheaf into a presheaf."""
    if isinstance(source, SubOfRepresentable):
        return nat_cells(source, target, budget)
    return nat_presheaves(source, target, window, budget)


def yoneda_family(x: Presheaf, a: Shape, idx: int, cells) -> tuple[int, ...]:
    """Values on the given cells of the family classified by an element of x(a)."""
    return tuple(x.action(m)[idx] for m in cells)
