"""Hermitian unitals as partial linear spaces.

Builds H_q from the Hermitian curve x^(q+1) + y^(q+1) + z^(q+1) = 0 in
PG(2, q^2), and provides the combinatorial queries used downstream: design
verification, O'Nan configuration search, classification of pairwise
crossing line sets, and (s+1)-fan counting on a pair of lines.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, LinesDisjoint, UnknownLineId
from .field import FieldSpec, field_create


@dataclass(frozen=True)
class ProjPoint:
    """Homogeneous coordinates normalized so the first nonzero entry is 1."""

    coords: tuple[int, int, int]

    @classmethod
    def normalize(cls, F: FieldSpec, coords) -> "ProjPoint":
        coords = tuple(int(c) for c in coords)
        lead = next((c for c in coords if c != 0), None)
        if lead is None:
            raise ValueError("the zero vector is not a projective point")
        inv = F.inv(lead)
        return cls(tuple(F.mul(c, inv) for c in coords))


class PartialLinearSpace:
    """Points ``0..n_points-1`` and lines given as sorted tuples of point ids.

    Linearity (two points on at most one line) is not enforced here; use
    :meth:`is_linear` or :func:`verify_design` to check it.
    """

    def __init__(self, n_points: int, lines, coords=None, parent_points=None):
        self.n_points = int(n_points)
        self.lines: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(int(x) for x in l)) for l in lines)
        for l in self.lines:
            for x in l:
                if not 0 <= x < self.n_points:
                    raise ValueError(f"line {l} contains invalid point id {x}")
            if len(set(l)) != len(l):
                raise ValueError(f"line {l} repeats a point")
        self.coords = coords
        self.parent_points = parent_points

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    @property
    def points(self) -> range:
        return range(self.n_points)

    def __eq__(self, other):
        if not isinstance(other, PartialLinearSpace):
            return NotImplemented
        return self.n_points == other.n_points and self.lines == other.lines

    def __repr__(self):
        return f"PartialLinearSpace(n_points={self.n_points}, n_lines={self.n_lines})"

    @cached_property
    def point_to_lines(self) -> tuple[tuple[int, ...], ...]:
        inc = [[] for _ in range(self.n_points)]
        for i, l in enumerate(self.lines):
            for x in l:
                inc[x].append(i)
        return tuple(tuple(v) for v in inc)

    @cached_property
    def line_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(l) for l in self.lines)

    @cached_property
    def line_sizes(self) -> np.ndarray:
        return np.array([len(l) for l in self.lines], dtype=np.int64)

    @cached_property
    def _pair_line(self) -> dict:
        out = {}
        for i, l in enumerate(self.lines):
            for x, y in combinations(l, 2):
                out.setdefault((x, y), i)
        return out

    def line_through(self, x: int, y: int) -> Optional[int]:
        """Id of a line containing both points, or None."""
        if x == y:
            raise ValueError("line_through needs two distinct points")
        return self._pair_line.get((x, y) if x < y else (y, x))

    def _check_line(self, l):
        if not 0 <= l < self.n_lines:
            raise UnknownLineId(l)

    def meet(self, l1: int, l2: int) -> Optional[int]:
        """The common point of two distinct lines, or None if they are disjoint."""
        self._check_line(l1)
        self._check_line(l2)
        common = self.line_sets[l1] & self.line_sets[l2]
        return min(common) if common else None

    def is_linear(self) -> bool:
        return sum(comb(len(l), 2) for l in self.lines) == len(self._pair_line)

    # -- text format ------------------------------------------------------

    def to_text(self) -> str:
        rows = [f"pls {self.n_points} {self.n_lines}"]
        rows += [" ".join(map(str, l)) for l in self.lines]
        return "\n".join(rows) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PartialLinearSpace":
        rows = text.split("\n")
        head = rows[0].split()
        if len(head) != 3 or head[0] != "pls":
            raise ValueError(f"bad header {rows[0]!r}")
        n_points, n_lines = int(head[1]), int(head[2])
        body = rows[1:1 + n_lines]
        if len(body) != n_lines:
            raise ValueError(f"expected {n_lines} lines, found {len(body)}")
        return cls(n_points, [tuple(int(t) for t in r.split()) for r in body])


# -- construction -----------------------------------------------------------

def _hermitian_points(F: FieldSpec) -> np.ndarray:
    e = F.elements()
    nrm = F.norm(e)
    pts = []
    # (1, y, z)
    y, z = np.meshgrid(e, e, indexing="ij")
    y, z = y.ravel(), z.ravel()
    val = F.add(F.add(1, nrm[y]), nrm[z])
    sel = val == 0
    pts.append(np.stack([np.ones(sel.sum(), dtype=np.int64), y[sel], z[sel]], axis=1))
    # (0, 1, z)
    sel = F.add(1, nrm) == 0
    pts.append(np.stack([np.zeros(sel.sum(), dtype=np.int64), np.ones(sel.sum(), dtype=np.int64), e[sel]], axis=1))
    # (0, 0, 1) never satisfies the equation
    return np.concatenate(pts)


def _normalize_rows(F: FieldSpec, v: np.ndarray) -> np.ndarray:
    nz = v != 0
    first = np.argmax(nz, axis=1)
    lead = v[np.arange(len(v)), first]
    inv = F.inv(lead)
    return F.mul(v, inv[:, None])


def build_hermitian_unital(q: int) -> PartialLinearSpace:
    """The Hermitian unital H_q: q^3+1 points, q^2(q^2-q+1) lines of size q+1."""
    F = field_create(q)
    pts = _hermitian_points(F)
    n = len(pts)
    Q = F.order
    lines = []
    idx = np.arange(n)
    for i in range(n):
        P = pts[i]
        rest = idx[idx != i]
        others = pts[rest]
        # cross product P x R for every other point R
        c0 = F.sub(F.mul(P[1], others[:, 2]), F.mul(P[2], others[:, 1]))
        c1 = F.sub(F.mul(P[2], others[:, 0]), F.mul(P[0], others[:, 2]))
        c2 = F.sub(F.mul(P[0], others[:, 1]), F.mul(P[1], others[:, 0]))
        L = _normalize_rows(F, np.stack([c0, c1, c2], axis=1))
        keys = (L[:, 0] * Q + L[:, 1]) * Q + L[:, 2]
        order = np.argsort(keys, kind="stable")
        cuts = np.flatnonzero(np.diff(keys[order])) + 1
        for group in np.split(rest[order], cuts):
            # emit each line once, from its smallest point
            if group[0] > i:
                lines.append((i, *(int(g) for g in group)))
    lines.sort()
    return PartialLinearSpace(n, lines, coords=[tuple(int(c) for c in r) for r in pts])


# -- verification -----------------------------------------------------------

@dataclass
class DesignReport:
    q: int
    n_points: int
    n_lines: int
    line_sizes: list
    point_degrees: list
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self):
        return {
            "q": self.q, "n_points": self.n_points, "n_lines": self.n_lines,
            "line_sizes": self.line_sizes, "point_degrees": self.point_degrees,
            "failures": self.failures, "ok": self.ok,
        }


def verify_design(U: PartialLinearSpace, q: int) -> DesignReport:
    """Check that U is a 2-(q^3+1, q+1, 1) design with the expected counts."""
    n = U.n_points
    cover = np.zeros((n, n), dtype=np.int64)
    for l in U.lines:
        idx = np.array(l, dtype=np.int64)
        cover[np.ix_(idx, idx)] += 1
    np.fill_diagonal(cover, 0)
    degrees = [len(v) for v in U.point_to_lines]
    sizes = sorted(set(int(s) for s in U.line_sizes))
    rep = DesignReport(q, n, U.n_lines, sizes, sorted(set(degrees)))
    if n != q ** 3 + 1:
        rep.failures.append(f"point count {n} != q^3+1 = {q ** 3 + 1}")
    if U.n_lines != q * q * (q * q - q + 1):
        rep.failures.append(f"line count {U.n_lines} != q^2(q^2-q+1) = {q * q * (q * q - q + 1)}")
    if sizes != [q + 1]:
        rep.failures.append(f"line sizes {sizes} != [{q + 1}]")
    if set(degrees) != {q * q}:
        rep.failures.append(f"point degrees {sorted(set(degrees))} != [{q * q}]")
    off = ~np.eye(n, dtype=bool)
    multi = int(np.count_nonzero(cover[off] > 1)) // 2
    missing = int(np.count_nonzero(cover[off] == 0)) // 2
    if multi:
        rep.failures.append(f"{multi} point pairs lie on two or more lines")
    if missing:
        rep.failures.append(f"{missing} point pairs lie on no line")
    return rep


# -- O'Nan configurations ---------------------------------------------------

def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class OnanSearch:
    witness: Optional[tuple[int, int, int, int]]
    triangles_examined: int


def _pencil_masks(S: PartialLinearSpace) -> list[int]:
    masks = []
    for ls in S.point_to_lines:
        m = 0
        for l in ls:
            m |= 1 << l
        masks.append(m)
    return masks


def _line_neighbor_masks(S: PartialLinearSpace, pencils) -> list[int]:
    out = []
    for i, l in enumerate(S.lines):
        m = 0
        for x in l:
            m |= pencils[x]
        out.append(m & ~(1 << i))
    return out


def find_onan(S: PartialLinearSpace, budget: Optional[int] = None) -> OnanSearch:
    """Search for four lines meeting pairwise in six distinct points.

    Triangles (three lines, three distinct meeting points) are enumerated
    first and extended by a fourth line avoiding all three vertices.  The
    budget caps the number of triangles examined; ``None`` is exhaustive.
    Raises BudgetExceeded if the budget runs out before a verdict.
    """
    pencils = _pencil_masks(S)
    nbrs = _line_neighbor_masks(S, pencils)
    examined = 0
    for l1 in range(S.n_lines):
        above1 = nbrs[l1] >> (l1 + 1) << (l1 + 1)
        for l2 in _bits(above1):
            p12 = S.meet(l1, l2)
            c3 = above1 & nbrs[l2] & ~pencils[p12]
            c3 = c3 >> (l2 + 1) << (l2 + 1)
            for l3 in _bits(c3):
                if budget is not None and examined >= budget:
                    raise BudgetExceeded(f"O'Nan search exceeded {budget} triangles", examined)
                examined += 1
                p13 = S.meet(l1, l3)
                p23 = S.meet(l2, l3)
                c4 = c3 & nbrs[l3] & ~(pencils[p12] | pencils[p13] | pencils[p23])
                c4 = c4 >> (l3 + 1) << (l3 + 1)
                if c4:
                    l4 = (c4 & -c4).bit_length() - 1
                    return OnanSearch((l1, l2, l3, l4), examined)
    return OnanSearch(None, examined)


# -- crossing classification -------------------------------------------------

@dataclass(frozen=True)
class CrossingClass:
    """Classification of a set of pairwise crossing lines.

    ``tag`` is ``"concurrent"``, ``"fan"`` or ``"invalid"``.  For fans the
    point of concurrency is given, except for triangles (three lines) where
    ``triangle`` is set and ``point`` is None.
    """

    tag: str
    point: Optional[int] = None
    triangle: bool = False
    reason: Optional[str] = None

    def to_dict(self):
        d = {"tag": self.tag}
        if self.point is not None:
            d["point"] = self.point
        if self.triangle:
            d["triangle"] = True
        if self.reason:
            d["reason"] = self.reason
        return d


def classify_crossing(S: PartialLinearSpace, lines) -> CrossingClass:
    lines = sorted(set(int(l) for l in lines))
    if len(lines) < 3:
        raise ValueError("classify_crossing needs at least three lines")
    for l in lines:
        S._check_line(l)
    for a, b in combinations(lines, 2):
        if not (S.line_sets[a] & S.line_sets[b]):
            return CrossingClass("invalid", reason=f"lines {a} and {b} are disjoint")
    counts: dict[int, int] = {}
    for l in lines:
        for x in S.lines[l]:
            counts[x] = counts.get(x, 0) + 1
    s = len(lines)
    full = [x for x, c in counts.items() if c == s]
    if full:
        return CrossingClass("concurrent", point=min(full))
    if s == 3:
        return CrossingClass("fan", triangle=True)
    near = [x for x, c in counts.items() if c == s - 1]
    if len(near) == 1:
        return CrossingClass("fan", point=near[0])
    return CrossingClass("invalid", reason="neither")


def count_fans_on_pair(S: PartialLinearSpace, l1: int, l2: int, size: int) -> int:
    """Number of ``size``-fans of S containing the intersecting lines l1, l2.

    Two disjoint cases by where the point of concurrency c lies:

    * c = l1 ∩ l2: pick x on l1 and y on l2 (both != c); the line through x, y
      is the non-concurrent line, and the remaining size-3 lines join c to
      other points of it.
    * c on l1 or l2 but not their meet: the other line is the
      non-concurrent one and size-2 further lines join c to its points.
    """
    if size < 4:
        raise ValueError("fan size must be at least 4")
    p = S.meet(l1, l2)
    if p is None or l1 == l2:
        raise LinesDisjoint(f"lines {l1} and {l2} do not meet")
    A = [x for x in S.lines[l1] if x != p]
    B = [y for y in S.lines[l2] if y != p]
    total = 0
    for x in A:
        for y in B:
            l3 = S.line_through(x, y)
            if l3 is None:
                continue
            m = sum(1 for z in S.lines[l3] if z not in (x, y) and S.line_through(p, z) is not None)
            total += comb(m, size - 3)
    for c in A:
        m = sum(1 for y in B if S.line_through(c, y) is not None)
        total += comb(m, size - 2)
    for c in B:
        m = sum(1 for x in A if S.line_through(c, x) is not None)
        total += comb(m, size - 2)
    return total
