"""Horn-filling checkers and the inner-fibration lifting check.

All checks are windowed: they quantify over the horns of the shapes in
a finite window, and every report records that window, so a pass is
evidence on the window and never a proof of the unbounded statement.
"""

from __future__ import annotations

from typing import NamedTuple

from .presheaves import (
    FaceUnionFamily,
    Presheaf,
    nat_face_union,
    restriction_key,
)
from .subshapes import WindowSpec
from .theta import Shape, faces_of, face_descriptor


class Mode(NamedTuple):
    """A horn-filling requirement: which horns, and how strict.

    Strict groupoid mode demands unique fillers for every horn except
    the two vertex horns of the interval t[1]: unique filling there
    would force at most one arrow out of each vertex, so uniqueness is
    only required from total entry sum two upward, the analogue of the
    dimension-two threshold in the classical unique-filling
    characterization of nerves.
    """

    kind: str  # cat | groupoid | strict-cat | strict-groupoid | n-strict | n-cat
    n: int | None = None

    def __str__(self):
        return self.kind if self.n is None else f"{self.kind}:{self.n}"

    @property
    def inner_only(self) -> bool:
        return self.kind in ("cat", "strict-cat", "n-strict", "n-cat")

    def requirement(self, a: Shape) -> str:
        if self.kind in ("cat", "groupoid", "n-cat"):
            return "surjective"
        if self.kind == "strict-groupoid":
            return "bijective" if sum(a.entries) >= 2 else "surjective"
        if self.kind == "strict-cat":
            return "bijective"
        if self.kind == "n-strict":
            return "bijective" if a.dim >= self.n else "surjective"
        raise ValueError(f"unknown mode {self.kind!r}")

    def wants_shape(self, a: Shape) -> bool:
        if self.kind == "n-cat":
            return a.dim <= self.n
        return True


def parse_mode(text: str) -> Mode:
    if ":" in text:
        kind, n = text.split(":", 1)
        if kind not in ("n-strict", "n-cat"):
            raise ValueError(f"unknown mode {text!r}")
        return Mode(kind, int(n))
    if text not in ("cat", "groupoid", "strict-cat", "strict-groupoid"):
        raise ValueError(f"unknown mode {text!r}")
    return Mode(text)


class HornRecord(NamedTuple):
    shape: Shape
    k: int
    m: int
    inner: bool
    x_size: int
    nat_size: int
    fiber_sizes: tuple[int, ...]
    surjective: bool
    bijective: bool

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape.entries),
            "horn": [self.k, self.m],
            "inner": self.inner,
            "x_size": self.x_size,
            "nat_size": self.nat_size,
            "fiber_sizes": list(self.fiber_sizes),
            "surjective": self.surjective,
            "bijective": self.bijective,
        }


def horn_filling(
    x: Presheaf, a: Shape, k: int, m: int, budget: int = 10**7
) -> HornRecord:
    """One horn: the family count, the restriction map, and its fibers."""
    missing = face_descriptor(a, k, m)
    roots = tuple(fd for fd in faces_of(a) if fd != missing)
    families = nat_face_union(a, roots, x, budget)
    keys = {fam.key(): 0 for fam in families}
    for idx in range(x.size(a)):
        key = restriction_key(x, a, idx, roots)
        if key not in keys:
            raise AssertionError(
                f"restriction of element {idx} of {x.name}({a}) is not natural"
            )
        keys[key] += 1
    fibers = tuple(sorted(keys.values()))
    surjective = all(c > 0 for c in keys.values())
    bijective = surjective and all(c == 1 for c in keys.values())
    return HornRecord(
        a, k, m, missing.inner, x.size(a), len(families), fibers, surjective, bijective
    )


class CheckReport(NamedTuple):
    subject: str
    mode: Mode
    window: WindowSpec
    records: tuple[tuple[HornRecord, str, bool], ...]  # (record, requirement, ok)
    verdict: bool
    witness: HornRecord | None

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "mode": str(self.mode),
            "window": self.window.to_json(),
            "horns": [
                dict(rec.to_json(), requirement=req, ok=ok)
                for rec, req, ok in self.records
            ],
            "verdict": "pass" if self.verdict else "fail",
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def check(
    x: Presheaf, mode: Mode | str, window: WindowSpec, budget: int = 10**7
) -> CheckReport:
    """Run the mode's requirement over every horn of the window."""
    if isinstance(mode, str):
        mode = parse_mode(mode)
    records = []
    verdict = True
    witness = None
    for a in window.shapes():
        if not mode.wants_shape(a):
            continue
        for fd in faces_of(a):
            if mode.inner_only and not fd.inner:
                continue
            rec = horn_filling(x, a, fd.k, fd.m, budget)
            req = mode.requirement(a)
            ok = rec.bijective if req == "bijective" else rec.surjective
            records.append((rec, req, ok))
            if not ok and witness is None:
                witness = rec
                verdict = False
    return CheckReport(x.name, mode, window, tuple(records), verdict, witness)


# ---------------------------------------------------------------------------
# inner fibrations


class PresheafMorphism:
    """A natural map of presheaves given by per-shape index arrays."""

    def __init__(self, source: Presheaf, target: Presheaf, components: dict):
        self.source = source
        self.target = target
        self.components = components  # Shape -> tuple[int, ...]

    @classmethod
    def to_terminal(cls, x: Presheaf, terminal: Presheaf, window: WindowSpec):
        return cls(
            x, terminal, {b: (0,) * x.size(b) for b in window.shapes()}
        )

    @classmethod
    def identity(cls, x: Presheaf, window: WindowSpec):
        return cls(
            x, x, {b: tuple(range(x.size(b))) for b in window.shapes()}
        )

    def check_natural(self, window: WindowSpec) -> bool:
        from .presheaves import generator_classes

        for f in generator_classes(window):
            src_arr = self.source.action(f)
            tgt_arr = self.target.action(f)
            phi_s, phi_d = self.components[f.src], self.components[f.dst]
            for i in range(self.source.size(f.dst)):
                if phi_s[src_arr[i]] != tgt_arr[phi_d[i]]:
                    return False
        return True


class LiftingSquare(NamedTuple):
    shape: Shape
    k: int
    m: int
    horn_family_key: tuple
    target_element: int

    def to_json(self):
        return {
            "shape": list(self.shape.entries),
            "horn": [self.k, self.m],
            "horn_family": list(self.horn_family_key),
            "target_element": self.target_element,
        }


class FibrationReport(NamedTuple):
    ok: bool
    squares_checked: int
    failures: tuple[LiftingSquare, ...]


def inner_fibration_check(
    phi: PresheafMorphism, window: WindowSpec, budget: int = 10**7
) -> FibrationReport:
    """Test the right lifting property against every inner horn in window.

    For each inner horn and each commuting square (a family on the horn
    in the source, an element of the target level restricting to its
    image), search for an element of the source level lifting both.
    """
    x, y = phi.source, phi.target
    checked = 0
    failures = []
    for a in window.shapes():
        for fd in faces_of(a):
            if not fd.inner:
                continue
            roots = tuple(f for f in faces_of(a) if f != fd)
            x_families = nat_face_union(a, roots, x, budget)
            x_keys: dict[tuple, list[int]] = {}
            for idx in range(x.size(a)):
                x_keys.setdefault(restriction_key(x, a, idx, roots), []).append(idx)
            y_keys: dict[tuple, list[int]] = {}
            for idx in range(y.size(a)):
                y_keys.setdefault(restriction_key(y, a, idx, roots), []).append(idx)
            phi_a = phi.components[a]
            for fam in x_families:
                pushed = tuple(
                    phi.components[root.target][val]
                    for root, val in zip(roots, fam.root_values)
                )
                for v in y_keys.get(pushed, ()):
                    checked += 1
                    lifts = [
                        ix
                        for ix in x_keys.get(fam.key(), ())
                        if phi_a[ix] == v
                    ]
                    if not lifts:
                        failures.append(
                            LiftingSquare(a, fd.k, fd.m, fam.key(), v)
                        )
    return FibrationReport(not failures, checked, tuple(failures))
