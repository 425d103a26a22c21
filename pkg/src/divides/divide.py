"""Divides as combinatorial planar maps.

A divide is stored as a rotation system: every branch is an ordered list of
crossing visits, every crossing carries an orientation bit fixing the
counterclockwise order of its four half-edges, and the 2r branch endpoints
are listed counterclockwise along the disk boundary.

Half-edges ("darts") are numbered canonically.  Branches are walked in input
order; the k-th edge overall gets darts ``2k`` (along the branch) and
``2k + 1`` (against it).  Boundary arcs, when the full disk map is needed,
get the darts after the divide darts.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class DTFError(ValueError):
    """Malformed divide text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class Visit:
    crossing: str
    slot: int

    def __str__(self) -> str:
        return f"{self.crossing}.{self.slot}"


@dataclass(frozen=True)
class Branch:
    name: str
    visits: tuple[Visit, ...] = ()

    @property
    def start(self) -> str:
        return f"{self.name}.s"

    @property
    def end(self) -> str:
        return f"{self.name}.e"


# ccw order of (slot, direction) at a crossing; "in" points back along the branch
_ROTATION = {
    +1: ((0, "in"), (1, "in"), (0, "out"), (1, "out")),
    -1: ((0, "in"), (1, "out"), (0, "out"), (1, "in")),
}


@dataclass(frozen=True)
class Divide:
    """Immutable combinatorial divide.

    ``orientation`` maps crossing id to +1 or -1.  With +1 the ccw order of the
    half-edges is (slot-0-in, slot-1-in, slot-0-out, slot-1-out), i.e. the
    slot-1 strand crosses the slot-0 strand from right to left.
    """

    branches: tuple[Branch, ...]
    orientation: tuple[tuple[str, int], ...]
    boundary: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "boundary", tuple(self.boundary))
        if isinstance(self.orientation, dict):
            object.__setattr__(self, "orientation", tuple(self.orientation.items()))
        else:
            object.__setattr__(self, "orientation", tuple(self.orientation))

    # -- basic counts -------------------------------------------------------

    @cached_property
    def crossings(self) -> tuple[str, ...]:
        """Crossing ids in order of first visit."""
        seen: dict[str, None] = {}
        for b in self.branches:
            for v in b.visits:
                seen.setdefault(v.crossing, None)
        return tuple(seen)

    @cached_property
    def orient(self) -> dict[str, int]:
        return dict(self.orientation)

    @property
    def delta(self) -> int:
        return len(self.crossings)

    @property
    def r(self) -> int:
        return len(self.branches)

    @property
    def mu(self) -> int:
        return 2 * self.delta - self.r + 1

    def crossing_index(self, c: str) -> int:
        return self._crossing_pos[c]

    @cached_property
    def _crossing_pos(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.crossings)}

    # -- darts --------------------------------------------------------------

    @cached_property
    def edges(self) -> tuple[tuple[tuple, tuple], ...]:
        """Edge k as (tail, head) nodes.

        A node is ``("end", token)`` for a boundary endpoint or
        ``("x", crossing, slot)`` for a crossing visit.
        """
        out = []
        for b in self.branches:
            nodes = [("end", b.start)] + [("x", v.crossing, v.slot) for v in b.visits] + [("end", b.end)]
            out.extend(zip(nodes[:-1], nodes[1:]))
        return tuple(out)

    @property
    def n_darts(self) -> int:
        return 2 * len(self.edges)

    @cached_property
    def dart_vertex(self) -> tuple[str, ...]:
        """Vertex (crossing id or endpoint token) each dart emanates from."""
        out = []
        for tail, head in self.edges:
            out.append(tail[1])
            out.append(head[1])
        return tuple(out)

    @cached_property
    def rotation(self) -> dict[str, tuple[int, ...]]:
        """ccw cyclic order of darts around each vertex."""
        ends: dict[tuple, int] = {}
        for k, (tail, head) in enumerate(self.edges):
            if tail[0] == "end":
                ends[("end", tail[1])] = 2 * k
            else:
                ends[(tail[1], tail[2], "out")] = 2 * k
            if head[0] == "end":
                ends[("end", head[1])] = 2 * k + 1
            else:
                ends[(head[1], head[2], "in")] = 2 * k + 1
        rot: dict[str, tuple[int, ...]] = {}
        for c in self.crossings:
            sign = self.orient.get(c)
            if sign not in _ROTATION:
                raise DTFError(f"crossing {c} has no orientation")
            try:
                rot[c] = tuple(ends[(c, s, d)] for s, d in _ROTATION[sign])
            except KeyError:
                raise DTFError(f"crossing {c} is not visited once per slot") from None
        for b in self.branches:
            rot[b.start] = (ends[("end", b.start)],)
            rot[b.end] = (ends[("end", b.end)],)
        return rot

    @cached_property
    def _rot_pos(self) -> dict[int, int]:
        return {d: i for darts in self.rotation.values() for i, d in enumerate(darts)}

    def rotation_position(self, dart: int) -> int:
        """Index of a dart in the ccw rotation at its vertex."""
        return self._rot_pos[dart]

    def face_next(self, dart: int) -> int:
        """Next dart along a face walk, keeping the face on the left."""
        back = dart ^ 1
        around = self.rotation[self.dart_vertex[back]]
        i = self._rot_pos[back]
        return around[(i - 1) % len(around)]

    # -- tokens -------------------------------------------------------------

    @cached_property
    def endpoint_tokens(self) -> tuple[str, ...]:
        out = []
        for b in self.branches:
            out += [b.start, b.end]
        return tuple(out)


# ---------------------------------------------------------------------------
# DTF text format

_NAME = r"[A-Za-z_][A-Za-z0-9_\-]*"
_BRANCH_RE = re.compile(rf"^branch\s+({_NAME})\s*:(.*)$")
_ORIENT_RE = re.compile(r"^orient\s+(\S+)\s+(\S+)\s*$")
_BOUNDARY_RE = re.compile(r"^boundary\s*:(.*)$")
_VISIT_RE = re.compile(r"^(\S+)\.([01])$")
_TOKEN_RE = re.compile(rf"^({_NAME})\.([se])$")


def _tokens_with_columns(text: str, offset: int) -> Iterable[tuple[str, int]]:
    for m in re.finditer(r"\S+", text):
        yield m.group(0), offset + m.start() + 1


def parse_dtf(text: str) -> Divide:
    """Parse divide text format into a :class:`Divide`."""
    branches: list[Branch] = []
    names: set[str] = set()
    orient: dict[str, int] = {}
    orient_line: dict[str, int] = {}
    boundary: list[str] | None = None
    used: dict[tuple[str, int], int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        if m := _BRANCH_RE.match(stripped):
            name = m.group(1)
            if name in names:
                raise DTFError(f"duplicate branch name {name!r}", lineno, indent + 1)
            names.add(name)
            visits = []
            body_offset = indent + stripped.index(":") + 1
            for tok, col in _tokens_with_columns(m.group(2), body_offset):
                vm = _VISIT_RE.match(tok)
                if not vm:
                    raise DTFError(f"bad crossing visit {tok!r}, expected <id>.<0|1>", lineno, col)
                key = (vm.group(1), int(vm.group(2)))
                if key in used:
                    raise DTFError(f"slot reuse: {tok} already visited on line {used[key]}", lineno, col)
                used[key] = lineno
                visits.append(Visit(*key))
            branches.append(Branch(name, tuple(visits)))
        elif m := _ORIENT_RE.match(stripped):
            cid, sign = m.group(1), m.group(2)
            if sign not in ("+", "-"):
                raise DTFError(f"orientation must be + or -, got {sign!r}", lineno, indent + len(stripped) - len(sign) + 1)
            if cid in orient:
                raise DTFError(f"duplicate orientation for crossing {cid}", lineno, indent + 1)
            orient[cid] = 1 if sign == "+" else -1
            orient_line[cid] = lineno
        elif m := _BOUNDARY_RE.match(stripped):
            if boundary is not None:
                raise DTFError("duplicate boundary line", lineno, indent + 1)
            boundary = []
            body_offset = indent + stripped.index(":") + 1
            for tok, col in _tokens_with_columns(m.group(1), body_offset):
                if not _TOKEN_RE.match(tok):
                    raise DTFError(f"bad boundary token {tok!r}", lineno, col)
                boundary.append(tok)
        else:
            raise DTFError(f"unrecognized line {stripped.split()[0]!r}", lineno, indent + 1)

    if not branches:
        raise DTFError("no branches")
    if boundary is None:
        raise DTFError("missing boundary line")

    crossing_ids = {c for c, _ in used}
    for c in sorted(crossing_ids):
        for slot in (0, 1):
            if (c, slot) not in used:
                raise DTFError(f"dangling crossing id {c}: slot {slot} never visited")
        if c not in orient:
            raise DTFError(f"dangling crossing id {c}: no orient line")
    for c in orient:
        if c not in crossing_ids:
            raise DTFError(f"dangling crossing id {c}: oriented but never visited", orient_line[c])

    expected = []
    for b in branches:
        expected += [b.start, b.end]
    if len(boundary) != len(set(boundary)) or set(boundary) != set(expected):
        missing = sorted(set(expected) - set(boundary))
        extra = sorted(set(boundary) - set(expected))
        raise DTFError(f"boundary order token mismatch (missing {missing}, unknown {extra})")

    d = Divide(tuple(branches), tuple((c, orient[c]) for c in orient), tuple(boundary))
    return canonical(d)


def canonical(d: Divide) -> Divide:
    """Orientation lines in first-visit order, boundary rotated to the first start token."""
    orient = d.orient
    ordered = tuple((c, orient[c]) for c in d.crossings)
    bnd = list(d.boundary)
    if bnd:
        i = bnd.index(d.branches[0].start)
        bnd = bnd[i:] + bnd[:i]
    return Divide(d.branches, ordered, tuple(bnd))


def serialize_dtf(d: Divide) -> str:
    d = canonical(d)
    lines = []
    for b in d.branches:
        body = " ".join(str(v) for v in b.visits)
        lines.append(f"branch {b.name}: {body}".rstrip())
    for c, sign in d.orientation:
        lines.append(f"orient {c} {'+' if sign > 0 else '-'}")
    lines.append("boundary: " + " ".join(d.boundary))
    return "\n".join(lines) + "\n"


def make_divide(branches: Sequence[tuple[str, Sequence[tuple[str, int]]]],
                orientation: dict[str, int], boundary: Sequence[str]) -> Divide:
    """Convenience constructor from plain tuples."""
    bs = tuple(Branch(name, tuple(Visit(c, s) for c, s in visits)) for name, visits in branches)
    return canonical(Divide(bs, tuple(orientation.items()), tuple(boundary)))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)
    delta: int = 0
    r: int = 0
    g: int | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def format(self) -> str:
        lines = [f"delta={self.delta} r={self.r} g={self.g if self.g is not None else '?'}"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"{status} {c.name}" + (f": {c.detail}" if c.detail else ""))
        return "\n".join(lines) + "\n"
