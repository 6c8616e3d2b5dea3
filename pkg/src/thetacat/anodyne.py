"""Inner-anodyne certificates: verification, construction, and search.

A certificate is an ordered list of inner-horn attachments.  A step
(C, c, (k, m)) attaches the image of y(c) to the current subpresheaf;
it is valid when the pullback of the current subpresheaf along c is
exactly the inner horn (k, m) of C and c identifies no two cells
outside the horn, which makes the enlargement a pushout of an inner
horn inclusion.  A verified certificate therefore witnesses membership
of the inclusion in the cell-by-cell saturation of the inner horns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import BudgetExceededError, ProofShapeViolation
from .subshapes import (
    SubOfRepresentable,
    WindowSpec,
    face_membership,
    full_sub,
    spine,
    sub_union,
    union_of_faces,
    window_for,
)
from .theta import (
    FaceDescriptor,
    MorphismClass,
    Shape,
    compose_classes,
    enumerate_hom,
    face_class,
    faces_of,
    identity_class,
    inner_faces,
    outer_faces,
)


class Step(NamedTuple):
    cell: Shape
    attach: MorphismClass
    horn: tuple[int, int]

    def to_json(self) -> dict:
        return {
            "shape": list(self.cell.entries),
            "class": self.attach.to_json(),
            "horn": list(self.horn),
        }


@dataclass(frozen=True)
class AnodyneCertificate:
    base: Shape
    window: WindowSpec
    start: SubOfRepresentable
    end: SubOfRepresentable
    steps: tuple[Step, ...]
    start_tag: str = ""
    end_tag: str = ""

    def to_json(self) -> dict:
        return {
            "base": list(self.base.entries),
            "window": self.window.to_json(),
            "start": self.start_tag,
            "target": self.end_tag,
            "steps": [s.to_json() for s in self.steps],
        }


class VerifyReport(NamedTuple):
    ok: bool
    steps_checked: int
    failed_step: int | None
    reason: str

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "steps_checked": self.steps_checked,
            "failed_step": self.failed_step,
            "reason": self.reason,
        }


def _inner_horn_levels(c: Shape, k: int, m: int, window: WindowSpec) -> dict:
    fds = tuple(fd for fd in faces_of(c) if not (fd.k == k and fd.m == m))
    levels = {}
    for b in window.shapes():
        levels[b] = frozenset(
            t
            for t in enumerate_hom(b, c)
            if any(face_membership(t, fd) for fd in fds)
        )
    return levels


def _apply_step(levels: dict, step: Step, window: WindowSpec) -> dict:
    new = dict(levels)
    for b in window.shapes():
        added = frozenset(
            compose_classes(step.attach, t) for t in enumerate_hom(b, step.cell)
        )
        new[b] = new[b] | added
    return new


def _step_admissible(
    levels: dict, step: Step, window: WindowSpec
) -> tuple[bool, str]:
    c = step.attach
    k, m = step.horn
    fd = next(
        (f for f in faces_of(step.cell) if f.k == k and f.m == m), None
    )
    if c.src != step.cell:
        return False, "attaching class does not start at the step cell"
    if fd is None:
        return False, f"no face ({k},{m}) on {step.cell}"
    if not fd.inner:
        return False, f"horn ({k},{m}) of {step.cell} is not inner"
    horn_levels = _inner_horn_levels(step.cell, k, m, window)
    for b in window.shapes():
        current = levels[b]
        pullback = set()
        composites: dict = {}
        for t in enumerate_hom(b, step.cell):
            ct = compose_classes(c, t)
            if ct in current:
                pullback.add(t)
            else:
                # pushout needs c to be injective outside the horn
                if ct in composites:
                    return False, f"attaching class identifies cells at level {b}"
                composites[ct] = t
        if pullback != horn_levels[b]:
            return False, f"pullback is not the horn at level {b}"
    return True, ""


def verify_certificate(
    cert: AnodyneCertificate, window: WindowSpec | None = None
) -> VerifyReport:
    """Replay the steps, checking the pushout condition at each one."""
    window = window or cert.window
    levels = {b: cert.start.levels[b] for b in window.shapes()}
    for i, step in enumerate(cert.steps):
        ok, reason = _step_admissible(levels, step, window)
        if not ok:
            return VerifyReport(False, i, i, reason)
        levels = _apply_step(levels, step, window)
    for b in window.shapes():
        if levels[b] != cert.end.levels[b]:
            return VerifyReport(
                False, len(cert.steps), None, f"result differs from target at {b}"
            )
    return VerifyReport(True, len(cert.steps), None, "")


# ---------------------------------------------------------------------------
# the constructive certifier for unions of faces


def certify_union_inclusion(
    a: Shape,
    gamma,
    window: WindowSpec | None = None,
) -> AnodyneCertificate:
    """Certificate that a proper outer-containing union of faces fills in.

    Follows the pushout induction: while at least two inner faces are
    missing, pick the first missing face B, express the restriction of
    the current union to B as a union of faces of B, certify that
    recursively, transport the steps along B's inclusion, and add B to
    the union; a single missing face is exactly an inner horn.
    """
    window = window or window_for(a)
    window.require_covers(a)
    gamma = _resolve_gamma(a, gamma)
    all_faces = faces_of(a)
    if not set(outer_faces(a)) <= set(gamma):
        raise ValueError("the union must contain every outer face")
    if set(gamma) == set(all_faces):
        raise ValueError("the union must be a proper subset of the faces")
    steps: list[Step] = []
    current = sorted(gamma, key=lambda fd: (fd.k, fd.m))
    while True:
        missing = [fd for fd in all_faces if fd not in current]
        if len(missing) == 1:
            steps.append(Step(a, identity_class(a), (missing[0].k, missing[0].m)))
            break
        b_face = missing[0]
        steps.extend(_transported_steps(a, current, b_face, window))
        current.append(b_face)
        current.sort(key=lambda fd: (fd.k, fd.m))
    start = union_of_faces(a, gamma, window)
    end = full_sub(a, window)
    return AnodyneCertificate(
        a,
        window,
        start,
        end,
        steps=tuple(steps),
        start_tag="gamma:" + ",".join(f"{fd.k}:{fd.m}" for fd in gamma),
        end_tag="full",
    )


def _resolve_gamma(a: Shape, gamma) -> tuple[FaceDescriptor, ...]:
    out = []
    lookup = {(fd.k, fd.m): fd for fd in faces_of(a)}
    for item in gamma:
        if isinstance(item, FaceDescriptor):
            out.append(item)
        else:
            k, m = item
            if (k, m) not in lookup:
                raise ValueError(f"no face ({k},{m}) on {a}")
            out.append(lookup[(k, m)])
    return tuple(sorted(set(out), key=lambda fd: (fd.k, fd.m)))


def _transported_steps(
    a: Shape, current: list, b_face: FaceDescriptor, window: WindowSpec
) -> list[Step]:
    """Steps attaching one missing face, via the recursion on its target."""
    beta = face_class(b_face)
    target = b_face.target
    # levels of the restriction of the current union to the face
    u_levels = {}
    for b in window.shapes():
        u_levels[b] = frozenset(
            t
            for t in enumerate_hom(b, target)
            if any(face_membership(compose_classes(beta, t), fd) for fd in current)
        )
    gamma_b = [
        fd
        for fd in faces_of(target)
        if face_class(fd) in u_levels[fd.target]
    ]
    # the restriction must be exactly a union of faces of the target
    recognized = {
        b: frozenset(
            t
            for t in enumerate_hom(b, target)
            if any(face_membership(t, fd) for fd in gamma_b)
        )
        for b in window.shapes()
    }
    if recognized != u_levels:
        raise ProofShapeViolation(
            f"restriction of the union to face ({b_face.k},{b_face.m}) of {a} "
            "is not a union of faces",
            data={
                "base": str(a),
                "face": (b_face.k, b_face.m),
                "gamma": [(fd.k, fd.m) for fd in current],
                "recognized_faces": [(fd.k, fd.m) for fd in gamma_b],
            },
        )
    if set(gamma_b) == set(faces_of(target)) or not (
        set(outer_faces(target)) <= set(gamma_b)
    ):
        raise ProofShapeViolation(
            f"restricted union at face ({b_face.k},{b_face.m}) of {a} is not "
            "proper or misses an outer face",
            data={"recognized_faces": [(fd.k, fd.m) for fd in gamma_b]},
        )
    subcert = certify_union_inclusion(target, gamma_b, window)
    return [
        Step(s.cell, compose_classes(beta, s.attach), s.horn) for s in subcert.steps
    ]


# ---------------------------------------------------------------------------
# bounded certificate search from the spine


class ProbeResult(NamedTuple):
    found: bool
    certificate: AnodyneCertificate | None
    nodes: int
    states: int
    max_depth: int

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "nodes": self.nodes,
            "states": self.states,
            "max_depth": self.max_depth,
        }


def spine_probe(
    a: Shape,
    target: str,
    window: WindowSpec | None = None,
    budget: int = 10**6,
) -> ProbeResult:
    """Search for a certificate from the spine to the chosen target.

    target is "full" (the whole representable) or "outer" (the spine
    together with every outer face).  Candidate steps prefer cells of
    smaller dimension and entry sum, then lexicographically smaller
    attaching classes, so the returned certificate is canonical.  A
    search that exhausts or runs out of budget is an exhaustion report,
    never a refutation.
    """
    window = window or window_for(a)
    window.require_covers(a)
    start = spine(a, window)
    if target == "full":
        end = full_sub(a, window)
    elif target == "outer":
        end = sub_union(start, union_of_faces(a, outer_faces(a), window))
    else:
        raise ValueError(f"unknown probe target {target!r}")

    shapes_order = sorted(
        window.shapes(), key=lambda c: (c.dim + sum(c.entries), c.dim, c.entries)
    )
    candidates = []
    for c_shape in shapes_order:
        horns = [(fd.k, fd.m) for fd in inner_faces(c_shape)]
        if not horns:
            continue
        for c in enumerate_hom(c_shape, a):
            for h in horns:
                candidates.append(Step(c_shape, c, h))

    end_levels = {b: end.levels[b] for b in window.shapes()}
    start_levels = {b: start.levels[b] for b in window.shapes()}
    nodes = 0
    seen = set()
    best: list[Step] | None = None
    max_depth = 0

    def state_key(levels):
        return tuple(frozenset(levels[b]) for b in window.shapes())

    def within_target(levels):
        return all(levels[b] <= end_levels[b] for b in window.shapes())

    def dfs(levels, trail):
        nonlocal nodes, best, max_depth
        max_depth = max(max_depth, len(trail))
        if all(levels[b] == end_levels[b] for b in window.shapes()):
            best = list(trail)
            return True
        key = state_key(levels)
        if key in seen:
            return False
        seen.add(key)
        for step in candidates:
            nodes += 1
            if nodes > budget:
                raise BudgetExceededError("probe budget exceeded", nodes)
            ok, _ = _step_admissible(levels, step, window)
            if not ok:
                continue
            new_levels = _apply_step(levels, step, window)
            if not within_target(new_levels):
                continue
            trail.append(step)
            if dfs(new_levels, trail):
                return True
            trail.pop()
        return False

    try:
        found = dfs(start_levels, [])
    except BudgetExceededError:
        return ProbeResult(False, None, nodes, len(seen), max_depth)
    if not found:
        return ProbeResult(False, None, nodes, len(seen), max_depth)
    cert = AnodyneCertificate(
        a,
        window,
        start,
        end,
        steps=tuple(best),
        start_tag="spine",
        end_tag=target,
    )
    return ProbeResult(True, cert, nodes, len(seen), max_depth)
