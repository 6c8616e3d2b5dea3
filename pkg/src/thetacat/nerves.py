"""Nerves of groups and the maps-vs-cocycles correspondence.

Three formula-backed presheaves:

* the one-object groupoid nerve of a group: level G^{b1}, acting
  through the first component by interval products;
* the strict one-object one-arrow 2-nerve of an abelian group: level
  A^{b1*b2} grids, acting bilinearly through the first two components;
* the cocycle realization: level = normalized simplicial 2-cocycles on
  the first-coordinate simplex, acting by cochain pullback.  Its level
  at t[2] is a single free value, and it has no nondegenerate cells at
  shapes of dimension above 1 apart from those of the 1-skeleton.

All three factor through projection to the leading coordinates, which
is what makes their actions independent of the class representative.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import NamedTuple

from .errors import BudgetExceededError
from .groups import Cocycle2, FiniteGroup
from .presheaves import Presheaf, PresheafNatFamily, nat_presheaves, product, Representable, ProductPresheaf
from .subshapes import WindowSpec
from .theta import MorphismClass, Shape, constant_class, shape

H2_WINDOW = WindowSpec(2, 3)


class NerveB1(Presheaf):
    """Level G^{b1}; a class acts through its first component."""

    core_dim = 1

    def __init__(self, group: FiniteGroup):
        super().__init__()
        self.group = group
        self.name = f"B1({group.name})"

    def _elements(self, b: Shape) -> tuple:
        return tuple(itertools.product(range(self.group.order), repeat=b.entry(1)))

    def apply(self, f: MorphismClass, x):
        f1 = f.component(1)
        return tuple(
            self.group.prod(x[u - 1] for u in range(f1(i - 1) + 1, f1(i) + 1))
            for i in range(1, f.src.entry(1) + 1)
        )


class NerveB2Strict(Presheaf):
    """Level A^{b1*b2} grids; a class acts through two components."""

    core_dim = 2

    def __init__(self, group: FiniteGroup):
        super().__init__()
        if not group.abelian:
            raise ValueError("the one-object one-arrow 2-nerve needs abelian 2-cells")
        self.group = group
        self.name = f"B2({group.name})"

    def _elements(self, b: Shape) -> tuple:
        return tuple(
            itertools.product(range(self.group.order), repeat=b.entry(1) * b.entry(2))
        )

    def apply(self, f: MorphismClass, x):
        a_ = self.group
        p, q = f.src.entry(1), f.src.entry(2)
        q2 = f.dst.entry(2)
        f1, f2 = f.component(1), f.component(2)
        out = []
        for i in range(1, p + 1):
            for j in range(1, q + 1):
                acc = a_.identity
                for u in range(f1(i - 1) + 1, f1(i) + 1):
                    for v in range(f2(j - 1) + 1, f2(j) + 1):
                        acc = a_.mul(acc, x[(u - 1) * q2 + (v - 1)])
                out.append(acc)
        return tuple(out)


@lru_cache(maxsize=None)
def _triples(n: int) -> tuple[tuple[int, int, int], ...]:
    return tuple(itertools.combinations(range(n + 1), 3))


class NerveB2EM(Presheaf):
    """Level = normalized 2-cocycles on the first-coordinate simplex."""

    core_dim = 1

    def __init__(self, group: FiniteGroup, level_budget: int = 10**6):
        super().__init__()
        if not group.abelian:
            raise ValueError("cocycle coefficients must be abelian")
        self.group = group
        self.level_budget = level_budget
        self.name = f"B2em({group.name})"

    def _elements(self, b: Shape) -> tuple:
        n = b.entry(1)
        a_ = self.group
        trips = _triples(n)
        free = [t for t in trips if t[0] == 0]
        if a_.order ** len(free) > self.level_budget:
            raise BudgetExceededError(
                f"cocycle level at {b} needs {a_.order ** len(free)} tables", 0
            )
        pos = {t: i for i, t in enumerate(trips)}
        out = []
        for assignment in itertools.product(range(a_.order), repeat=len(free)):
            vals = [a_.identity] * len(trips)
            for t, v in zip(free, assignment):
                vals[pos[t]] = v
            for i, j, k in trips:
                if i == 0:
                    continue
                # z(i,j,k) = z(0,j,k) - z(0,i,k) + z(0,i,j)
                vals[pos[(i, j, k)]] = a_.mul(
                    a_.mul(vals[pos[(0, j, k)]], a_.inverse[vals[pos[(0, i, k)]]]),
                    vals[pos[(0, i, j)]],
                )
            table = tuple(vals)
            if not self._is_simplicial_cocycle(n, table):
                raise AssertionError("cone reconstruction produced a non-cocycle")
            out.append(table)
        return tuple(out)

    def _is_simplicial_cocycle(self, n: int, table) -> bool:
        a_ = self.group
        pos = {t: i for i, t in enumerate(_triples(n))}
        for i, j, k, l in itertools.combinations(range(n + 1), 4):
            # z(j,k,l) - z(i,k,l) + z(i,j,l) - z(i,j,k) = 0
            acc = a_.mul(table[pos[(j, k, l)]], a_.inverse[table[pos[(i, k, l)]]])
            acc = a_.mul(acc, table[pos[(i, j, l)]])
            acc = a_.mul(acc, a_.inverse[table[pos[(i, j, k)]]])
            if acc != a_.identity:
                return False
        return True

    def apply(self, f: MorphismClass, x):
        n_src, n_dst = f.src.entry(1), f.dst.entry(1)
        f1 = f.component(1)
        pos_dst = {t: i for i, t in enumerate(_triples(n_dst))}
        out = []
        for i, j, k in _triples(n_src):
            a, b, c = f1(i), f1(j), f1(k)
            if a < b < c:
                out.append(x[pos_dst[(a, b, c)]])
            else:
                out.append(self.group.identity)
        return tuple(out)

    def triple_index(self, n: int, t: tuple[int, int, int]) -> int:
        return _triples(n).index(t)


def nerve_b1(group: FiniteGroup) -> NerveB1:
    return NerveB1(group)


def nerve_b2_strict(group: FiniteGroup) -> NerveB2Strict:
    return NerveB2Strict(group)


def nerve_b2_em(group: FiniteGroup) -> NerveB2EM:
    return NerveB2EM(group)


def nerve_from_spec(spec: str) -> Presheaf:
    """Build the presheaf named by "B1:Z2", "B2strict:Z2" or "B2em:Z3"."""
    from .groups import builtin_group

    try:
        kind, gname = spec.split(":", 1)
    except ValueError:
        raise ValueError(f"bad nerve spec {spec!r}") from None
    group = builtin_group(gname)
    if kind == "B1":
        return nerve_b1(group)
    if kind == "B2strict":
        return nerve_b2_strict(group)
    if kind == "B2em":
        return nerve_b2_em(group)
    raise ValueError(f"bad nerve spec {spec!r}")


# ---------------------------------------------------------------------------
# maps vs cocycles


def map_to_cocycle(phi: PresheafNatFamily) -> Cocycle2:
    """Read off the group 2-cocycle from a map of nerves.

    The value on a pair (g, h) is the component at t[2] applied to the
    string (g, h), evaluated on the ordered triple (0, 1, 2).
    """
    src: NerveB1 = phi.source
    tgt: NerveB2EM = phi.target
    g_, a_ = src.group, tgt.group
    b = shape(2)
    trip = _triples(2).index((0, 1, 2))
    n = g_.order
    table = []
    for g in range(n):
        for h in range(n):
            z = phi.value(b, (g, h))
            table.append(z[trip])
    c = Cocycle2(g_, a_, tuple(table))
    c.validate()
    return c


def cocycle_to_map(
    c: Cocycle2, window: WindowSpec = H2_WINDOW
) -> PresheafNatFamily:
    """The map of nerves classified by a group 2-cocycle."""
    g_, a_ = c.group, c.coeffs
    src, tgt = NerveB1(g_), NerveB2EM(a_)
    comps = {}
    for b in window.shapes():
        n = b.entry(1)
        values = []
        for x in src.elements(b):
            table = []
            for i, j, k in _triples(n):
                left = g_.prod(x[u] for u in range(i, j))
                right = g_.prod(x[u] for u in range(j, k))
                table.append(c.value(left, right))
            values.append(tgt.index_of(b, tuple(table)))
        comps[b] = tuple(values)
    return PresheafNatFamily(src, tgt, window, comps)


class HomotopyReport(NamedTuple):
    group: str
    coeffs: str
    num_maps: int
    num_classes: int
    h2_classes: int
    agree: bool
    relation_was_reflexive: bool
    relation_was_symmetric: bool
    relation_was_transitive: bool
    pairs: tuple[tuple[int, int], ...]
    counterexample: dict | None


def vertex_inclusion_values(
    h: PresheafNatFamily, cyl: ProductPresheaf, src: Presheaf, vertex: int
) -> dict:
    """Restrict a cylinder family along a vertex inclusion of the interval."""
    window = h.window
    if not isinstance(cyl.right, Representable):
        raise TypeError("cylinder must be a product with a representable interval")
    interval = cyl.right.base
    comps = {}
    for b in window.shapes():
        vals = []
        cv = constant_class(b, interval, vertex)
        for x in src.elements(b):
            i = cyl.index_of(b, (x, cv))
            vals.append(h.components[b][i])
        comps[b] = tuple(vals)
    return comps


def homotopy_classes(
    g_: FiniteGroup,
    a_: FiniteGroup,
    window: WindowSpec = H2_WINDOW,
    budget: int = 10**7,
) -> HomotopyReport:
    """Maps of nerves modulo cylinder homotopy, against the H^2 count.

    Two maps are related when some family on the product with the
    interval restricts to them along the two vertex inclusions; classes
    are counted after transitive closure, and whether the raw relation
    was already an equivalence is recorded.  On disagreement with the
    cocycle-class count a counterexample bundle is attached instead of
    a bare failure.
    """
    from .groups import cocycle_tools

    if not (window.contains(shape(3)) and window.contains(shape(2, 1))):
        raise ValueError("window must contain t[3] and t[2,1]")
    src, tgt = NerveB1(g_), NerveB2EM(a_)
    maps = nat_presheaves(src, tgt, window, budget)
    key_of = {m.key(): i for i, m in enumerate(maps)}
    cyl = product(src, Representable(shape(1)))
    homotopies = nat_presheaves(cyl, tgt, window, budget)
    pairs = set()
    transcripts = []
    for h in homotopies:
        ends = []
        for vertex in (0, 1):
            comps = vertex_inclusion_values(h, cyl, src, vertex)
            fam = PresheafNatFamily(src, tgt, window, comps)
            ends.append(key_of[fam.key()])
        pairs.add((ends[0], ends[1]))
        transcripts.append(ends)
    reflexive = all((i, i) in pairs for i in range(len(maps)))
    symmetric = all((b, a) in pairs for (a, b) in pairs)
    transitive = all(
        (a, d) in pairs for (a, b) in pairs for (c, d) in pairs if b == c
    )
    # transitive-symmetric closure via union-find
    parent = list(range(len(maps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    classes = len({find(i) for i in range(len(maps))})
    h2 = cocycle_tools(g_, a_, budget)
    agree = classes == h2.classes
    counterexample = None
    if not agree:
        counterexample = {
            "maps": [m.to_json() for m in maps],
            "homotopy_pairs": sorted(pairs),
            "homotopy_transcript": transcripts,
            "num_classes": classes,
            "h2_classes": h2.classes,
            "cocycles": [c.to_json() for c in h2.z2],
            "coboundaries": [list(t) for t in h2.b2],
        }
    return HomotopyReport(
        g_.name,
        a_.name,
        len(maps),
        classes,
        h2.classes,
        agree,
        reflexive,
        symmetric,
        transitive,
        tuple(sorted(pairs)),
        counterexample,
    )
