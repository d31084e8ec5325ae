"""Rational convex polyhedra in H-representation.

A :class:`Polyhedron` is the set ``{x : <normal_i, x> >= offset_i}`` with
primitive integer inward normals and rational offsets.  All geometry is exact
(:class:`fractions.Fraction`); lattice enumeration runs on the int64 kernels
in :mod:`toric_index._kernels` when the box is small enough to rule out
overflow, otherwise on a pure-Python scan.

Polytope documents
------------------
A polytope document is YAML (JSON is accepted too, being a subset)::

    name: square          # optional
    dim: 2
    facets:
      - {normal: [1, 0], offset: 0}
      - {normal: [-1, 0], offset: -2}
      - {normal: [0, 1], offset: 0}
      - {normal: [0, -1], offset: "-2"}

``offset`` is an integer or a string ``"p/q"``.  Normals are rescaled to be
primitive on parsing (``[2, 4] >= 3`` becomes ``[1, 2] >= 3/2``).  Unknown
fields are rejected.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import yaml

from . import _kernels
from .lattice_core import (
    IntVector,
    LatticeError,
    _column_echelon,
    as_int_vector,
    det,
    dot,
    hyperplane_basis,
    is_primitive,
    kernel_basis,
    primitive,
    rank,
    vector_gcd,
)

MAX_VERTEX_DIM = 4
MAX_BOX_POINTS = 50_000_000

RationalVector = tuple[Fraction, ...]


class PolytopeError(ValueError):
    """Invalid polyhedron or an operation outside its preconditions."""


class PolytopeParseError(PolytopeError):
    """Malformed polytope document; ``location`` names the offending field."""

    def __init__(self, message: str, location: str = "", line: int | None = None):
        self.location = location
        self.line = line
        where = location
        if line is not None:
            where = f"{location} (line {line})" if location else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


def as_fraction(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError(f"not a rational number: {value!r}")
    if isinstance(value, float):
        raise TypeError(f"floats are not accepted as exact rationals: {value!r}")
    return Fraction(value)


def format_fraction(q: Fraction) -> int | str:
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Halfspace:
    """``<normal, x> >= offset`` with a primitive integer inward normal."""

    normal: IntVector
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", as_int_vector(self.normal))
        object.__setattr__(self, "offset", as_fraction(self.offset))
        if not any(self.normal):
            raise PolytopeError("halfspace normal is zero")
        if not is_primitive(self.normal):
            raise PolytopeError(f"halfspace normal {list(self.normal)} is not primitive")

    @classmethod
    def normalized(cls, normal: Sequence[int], offset) -> "Halfspace":
        """Rescale ``<normal, x> >= offset`` so that the normal is primitive."""
        normal = as_int_vector(normal)
        g = vector_gcd(normal)
        if g == 0:
            raise PolytopeError("halfspace normal is zero")
        return cls(tuple(c // g for c in normal), as_fraction(offset) / g)

    def value(self, x: Sequence) -> Fraction:
        return sum((c * xi for c, xi in zip(self.normal, x)), Fraction(0))


class Vertex(NamedTuple):
    point: RationalVector
    active: frozenset[int]


@dataclass(frozen=True)
class Polyhedron:
    """Rational polyhedron ``{x : <n_i, x> >= b_i for every facet}``.

    ``empty`` marks a polyhedron known to be empty (e.g. a slice at a level
    the polytope never reaches); ``empty_reason`` records the witness.
    """

    dim: int
    facets: tuple[Halfspace, ...]
    name: str | None = None
    empty: bool = False
    empty_reason: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 1:
            raise PolytopeError(f"dim must be a positive integer, got {self.dim!r}")
        facets = tuple(self.facets)
        object.__setattr__(self, "facets", facets)
        seen = set()
        for i, f in enumerate(facets):
            if len(f.normal) != self.dim:
                raise PolytopeError(
                    f"facet {i}: normal has length {len(f.normal)}, expected {self.dim}"
                )
            key = (f.normal, f.offset)
            if key in seen:
                raise PolytopeError(f"facet {i} duplicates an earlier facet")
            seen.add(key)

    @classmethod
    def from_inequalities(cls, dim: int, rows: Iterable[tuple[Sequence[int], object]],
                          name: str | None = None) -> "Polyhedron":
        """Build from raw ``(normal, offset)`` pairs; normalises and merges.

        Facets sharing a normal keep only the tightest offset.
        """
        best: dict[IntVector, Fraction] = {}
        for normal, offset in rows:
            h = Halfspace.normalized(normal, offset)
            if h.normal not in best or h.offset > best[h.normal]:
                best[h.normal] = h.offset
        return cls(dim, tuple(Halfspace(n, b) for n, b in best.items()), name=name)

    @classmethod
    def empty_set(cls, dim: int, reason: str, name: str | None = None) -> "Polyhedron":
        return cls(dim, (), name=name, empty=True, empty_reason=reason)

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence, name: str | None = None) -> "Polyhedron":
        dim = len(lo)
        rows = []
        for i in range(dim):
            e = [0] * dim
            e[i] = 1
            rows.append((tuple(e), as_fraction(lo[i])))
            e[i] = -1
            rows.append((tuple(e), -as_fraction(hi[i])))
        return cls.from_inequalities(dim, rows, name=name)

    @property
    def normals(self) -> tuple[IntVector, ...]:
        return tuple(f.normal for f in self.facets)

    @property
    def offsets(self) -> tuple[Fraction, ...]:
        return tuple(f.offset for f in self.facets)

    def to_dict(self) -> dict:
        out: dict = {}
        if self.name is not None:
            out["name"] = self.name
        out["dim"] = self.dim
        out["facets"] = [
            {"normal": list(f.normal), "offset": format_fraction(f.offset)} for f in self.facets
        ]
        if self.empty:
            out["empty"] = True
            if self.empty_reason:
                out["empty_reason"] = self.empty_reason
        return out


# ---------------------------------------------------------------------------
# Parsing

_TOP_FIELDS = {"name", "dim", "facets", "empty", "empty_reason"}
_FACET_FIELDS = {"normal", "offset"}


def _line(node) -> int | None:
    return node.start_mark.line + 1 if node is not None else None


def parse_polytope(text: str) -> Polyhedron:
    """Parse a polytope document (see module docstring)."""
    loader = yaml.SafeLoader(text)
    try:
        root = loader.get_single_node()
        if root is None:
            raise PolytopeParseError("empty document")
        if not isinstance(root, yaml.MappingNode):
            raise PolytopeParseError("document must be a mapping", line=_line(root))
        fields = {}
        for knode, vnode in root.value:
            key = loader.construct_object(knode, deep=True)
            if key not in _TOP_FIELDS:
                raise PolytopeParseError(f"unknown field {key!r}", str(key), _line(knode))
            fields[key] = vnode
        for req in ("dim", "facets"):
            if req not in fields:
                raise PolytopeParseError("missing required field", req, _line(root))
        dim = loader.construct_object(fields["dim"], deep=True)
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise PolytopeParseError("must be a positive integer", "dim", _line(fields["dim"]))
        name = None
        if "name" in fields:
            name = loader.construct_object(fields["name"], deep=True)
            name = None if name is None else str(name)
        fnode = fields["facets"]
        if not isinstance(fnode, yaml.SequenceNode):
            raise PolytopeParseError("must be a list", "facets", _line(fnode))
        rows = []
        for i, item in enumerate(fnode.value):
            loc = f"facets[{i}]"
            if not isinstance(item, yaml.MappingNode):
                raise PolytopeParseError("facet must be a mapping", loc, _line(item))
            entry = {}
            for knode, vnode in item.value:
                key = loader.construct_object(knode, deep=True)
                if key not in _FACET_FIELDS:
                    raise PolytopeParseError(f"unknown field {key!r}", loc, _line(knode))
                entry[key] = vnode
            for req in ("normal", "offset"):
                if req not in entry:
                    raise PolytopeParseError(f"missing {req!r}", loc, _line(item))
            normal = loader.construct_object(entry["normal"], deep=True)
            if not isinstance(normal, list) or not all(
                isinstance(c, int) and not isinstance(c, bool) for c in normal
            ):
                raise PolytopeParseError(
                    "normal must be a list of integers", f"{loc}.normal", _line(entry["normal"])
                )
            if len(normal) != dim:
                raise PolytopeParseError(
                    f"normal has length {len(normal)}, expected dim {dim}",
                    f"{loc}.normal", _line(entry["normal"]),
                )
            if not any(normal):
                raise PolytopeParseError("zero normal", f"{loc}.normal", _line(entry["normal"]))
            raw = loader.construct_object(entry["offset"], deep=True)
            try:
                offset = as_fraction(raw if not isinstance(raw, str) else raw.strip())
            except (TypeError, ValueError, ZeroDivisionError):
                raise PolytopeParseError(
                    f"offset {raw!r} is not an integer or 'p/q'",
                    f"{loc}.offset", _line(entry["offset"]),
                ) from None
            rows.append((normal, offset))
        empty = False
        if "empty" in fields:
            empty = bool(loader.construct_object(fields["empty"], deep=True))
        if empty:
            reason = None
            if "empty_reason" in fields:
                reason = loader.construct_object(fields["empty_reason"], deep=True)
            return Polyhedron.empty_set(dim, reason or "declared empty", name=name)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise PolytopeParseError(str(exc), line=mark.line + 1 if mark else None) from None
    finally:
        loader.dispose()
    normalized = [Halfspace.normalized(n, b) for n, b in rows]
    seen: dict[tuple, int] = {}
    for i, h in enumerate(normalized):
        key = (h.normal, h.offset)
        if key in seen:
            raise PolytopeParseError(f"duplicates facets[{seen[key]}]", f"facets[{i}]")
        seen[key] = i
    return Polyhedron(dim, tuple(normalized), name=name)


def load_polytope(path) -> Polyhedron:
    with open(path, encoding="utf-8") as fh:
        return parse_polytope(fh.read())


def format_polytope(p: Polyhedron) -> str:
    return yaml.safe_dump(p.to_dict(), sort_keys=False, default_flow_style=None)


# ---------------------------------------------------------------------------
# Membership and exact linear algebra


def _check_dim(p: Polyhedron, x: Sequence) -> None:
    if len(x) != p.dim:
        raise PolytopeError(f"point has dimension {len(x)}, polyhedron has {p.dim}")


def contains(p: Polyhedron, x: Sequence) -> bool:
    """Exact test of every facet inequality at the rational point ``x``."""
    _check_dim(p, x)
    if p.empty:
        return False
    xq = [as_fraction(v) for v in x]
    return all(f.value(xq) >= f.offset for f in p.facets)


def _solve(rows: Sequence[Sequence[int]], rhs: Sequence[Fraction]) -> RationalVector | None:
    """Solve a square rational system; ``None`` if singular."""
    n = len(rows)
    m = [[Fraction(c) for c in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def is_pointed(p: Polyhedron) -> bool:
    return bool(p.facets) and rank(p.normals) == p.dim


@functools.lru_cache(maxsize=4096)
def _vertices_cached(p: Polyhedron) -> tuple[Vertex, ...]:
    found: dict[RationalVector, None] = {}
    normals = p.normals
    for subset in itertools.combinations(range(len(p.facets)), p.dim):
        x = _solve([normals[i] for i in subset], [p.facets[i].offset for i in subset])
        if x is None or x in found:
            continue
        if all(f.value(x) >= f.offset for f in p.facets):
            found[x] = None
    out = []
    for x in sorted(found):
        active = frozenset(i for i, f in enumerate(p.facets) if f.value(x) == f.offset)
        out.append(Vertex(x, active))
    return tuple(out)


def vertices(p: Polyhedron) -> list[Vertex]:
    """Vertices in lexicographic order, each with its active facet indices."""
    if p.dim > MAX_VERTEX_DIM:
        raise PolytopeError(
            f"vertex enumeration is limited to dim <= {MAX_VERTEX_DIM}, got {p.dim}"
        )
    if p.empty:
        return []
    if not is_pointed(p):
        raise PolytopeError("polyhedron is not pointed (it contains a line); vertices undefined")
    return list(_vertices_cached(p))


@functools.lru_cache(maxsize=4096)
def _extreme_rays(normals: tuple[IntVector, ...], dim: int) -> tuple[IntVector, ...]:
    """Extreme rays of the pointed cone ``{x : n_i . x >= 0}``."""
    rays: dict[IntVector, None] = {}
    for subset in itertools.combinations(range(len(normals)), dim - 1):
        sub = tuple(normals[i] for i in subset) if subset else ()
        if dim == 1:
            candidates = [(1,), (-1,)]
        else:
            if rank(sub) != dim - 1:
                continue
            k = kernel_basis(sub)
            r = primitive(tuple(row[0] for row in k))
            candidates = [r, tuple(-c for c in r)]
        for r in candidates:
            if all(dot(n, r) >= 0 for n in normals):
                rays[r] = None
    return tuple(sorted(rays))


def recession_rays(p: Polyhedron) -> list[IntVector]:
    """Primitive extreme rays of the recession cone of a pointed polyhedron."""
    if not is_pointed(p):
        raise PolytopeError("polyhedron is not pointed; recession cone has a line")
    return list(_extreme_rays(p.normals, p.dim))


def is_bounded(p: Polyhedron) -> bool:
    """True iff the recession cone ``{x : <n_i, x> >= 0}`` is ``{0}``."""
    if p.empty:
        return True
    if not is_pointed(p):
        return False
    return not _extreme_rays(p.normals, p.dim)


# ---------------------------------------------------------------------------
# Delzant condition


@dataclass(frozen=True)
class DelzantReport:
    is_delzant: bool
    violations: tuple[tuple[RationalVector, str], ...]

    def to_dict(self) -> dict:
        return {
            "is_delzant": self.is_delzant,
            "violations": [
                {"vertex": [format_fraction(c) for c in v], "reason": r}
                for v, r in self.violations
            ],
        }


def delzant_check(p: Polyhedron) -> DelzantReport:
    """Check that active normals at every minimal face form a lattice basis.

    Lines are factored out first (so slabs and half-cylinders are handled) and
    then implicit equalities, so lower-dimensional polytopes are judged inside
    their affine hull.  Each violation carries a point on the offending face
    and the determinant or failure found there.
    """
    if p.empty or not p.facets:
        return DelzantReport(True, ())
    normals = p.normals
    r = rank(normals)
    if r < p.dim:
        h, u, _ = _column_echelon(normals)
        reduced = Polyhedron(
            r, tuple(Halfspace(tuple(row[:r]), f.offset) for row, f in zip(h, p.facets))
        )
        lift = [[u[i][j] for j in range(r)] for i in range(p.dim)]
    else:
        reduced = p
        lift = None
    if reduced.dim > MAX_VERTEX_DIM:
        raise PolytopeError(f"Delzant check limited to dim <= {MAX_VERTEX_DIM}")
    verts = vertices(reduced)
    rays = recession_rays(reduced)
    eq = [
        i for i, f in enumerate(reduced.facets)
        if verts
        and all(f.value(v.point) == f.offset for v in verts)
        and all(dot(f.normal, ray) == 0 for ray in rays)
    ]
    if eq:
        kb = kernel_basis(tuple(reduced.facets[i].normal for i in eq))
        free = len(kb[0]) if kb and kb[0] else 0
    else:
        kb, free = None, reduced.dim

    def project(n: IntVector) -> IntVector | None:
        if kb is None:
            return n
        w = tuple(sum(n[i] * kb[i][j] for i in range(reduced.dim)) for j in range(free))
        return primitive(w) if any(w) else None

    violations = []
    for v in verts:
        act = [project(reduced.facets[i].normal) for i in sorted(v.active) if i not in eq]
        act = [a for a in act if a is not None]
        point = v.point
        if lift is not None:
            point = tuple(sum(lift[i][j] * v.point[j] for j in range(r)) for i in range(p.dim))
        if len(act) != free:
            violations.append((point, f"{len(act)} active facets, expected {free} (not simple)"))
            continue
        d = det(tuple(act)) if free else 1
        if abs(d) != 1:
            violations.append((point, f"|det| = {abs(d)}"))
    return DelzantReport(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# Lattice points


def _int_bounds(p: Polyhedron) -> list[int]:
    # For integer x and integer normal, <n, x> >= b  <=>  <n, x> >= ceil(b).
    return [math.ceil(f.offset) for f in p.facets]


def _vertex_box(p: Polyhedron) -> tuple[list[int], list[int]]:
    pts = [v.point for v in vertices(p)]
    lo = [math.ceil(min(x[i] for x in pts)) for i in range(p.dim)]
    hi = [math.floor(max(x[i] for x in pts)) for i in range(p.dim)]
    return lo, hi


def _scan_python(normals, bounds, lo, hi) -> list[IntVector]:
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return [
        x for x in itertools.product(*ranges)
        if all(dot(n, x) >= b for n, b in zip(normals, bounds))
    ]


def lattice_points(p: Polyhedron, box: tuple[Sequence[int], Sequence[int]] | None = None
                   ) -> list[IntVector]:
    """Integer points of ``p`` (intersected with ``box`` when given), lexicographic.

    ``box`` is ``(lo, hi)`` with inclusive integer corners.
    """
    if p.empty:
        return []
    if box is None:
        if not is_bounded(p):
            raise PolytopeError("unbounded polyhedron requires a bounding box")
        if not p.facets:
            return []
        lo, hi = _vertex_box(p) if vertices(p) else ([0] * p.dim, [-1] * p.dim)
    else:
        lo = list(as_int_vector(box[0]))
        hi = list(as_int_vector(box[1]))
        if len(lo) != p.dim or len(hi) != p.dim:
            raise PolytopeError("bounding box dimension does not match the polyhedron")
        if is_bounded(p) and p.facets:
            if not vertices(p):
                return []
            vlo, vhi = _vertex_box(p)
            lo = [max(a, b) for a, b in zip(lo, vlo)]
            hi = [min(a, b) for a, b in zip(hi, vhi)]
    if any(b < a for a, b in zip(lo, hi)):
        return []
    volume = math.prod(b - a + 1 for a, b in zip(lo, hi))
    if volume > MAX_BOX_POINTS:
        raise PolytopeError(f"enumeration box has {volume} points (limit {MAX_BOX_POINTS})")
    normals = [list(n) for n in p.normals] or [[0] * p.dim]
    bounds = _int_bounds(p) or [0]
    if _kernels.fits_int64(normals, bounds, lo, hi):
        pts = _kernels.scan_box(np.array(normals), np.array(bounds), np.array(lo), np.array(hi))
        return [tuple(int(c) for c in row) for row in pts]
    return _scan_python(normals, bounds, lo, hi)


def contains_many(p: Polyhedron, points: np.ndarray) -> np.ndarray:
    """Vectorised membership for integer points (rows of ``points``)."""
    points = np.asarray(points)
    if points.ndim != 2 or points.shape[1] != p.dim:
        raise PolytopeError("points must be an (n, dim) integer array")
    if p.empty:
        return np.zeros(points.shape[0], dtype=bool)
    if not p.facets:
        return np.ones(points.shape[0], dtype=bool)
    bounds = _int_bounds(p)
    span = np.abs(points).max(axis=0) if points.shape[0] else np.zeros(p.dim, dtype=np.int64)
    if _kernels.fits_int64(p.normals, bounds, -span, span):
        return _kernels.member_mask(np.array(p.normals), np.array(bounds), points)
    return np.array([contains(p, [int(c) for c in row]) for row in points], dtype=bool)


# ---------------------------------------------------------------------------
# Slices, regularity, and constructions


def slice_polyhedron(p: Polyhedron, xi: Sequence[int], level) -> Polyhedron:
    """``p ∩ {<xi, x> = level}`` in lattice coordinates of the hyperplane.

    With ``(v1, B) = hyperplane_basis(xi)`` a point ``y`` of the result stands
    for ``level * v1 + B @ y``; on integer points this is a bijection.
    """
    xi = as_int_vector(xi)
    if len(xi) != p.dim:
        raise PolytopeError("direction and polyhedron dimensions differ")
    if p.dim < 2:
        raise PolytopeError("slicing needs dim >= 2")
    try:
        v1, basis = hyperplane_basis(xi)
    except LatticeError as exc:
        raise PolytopeError(str(exc)) from None
    level = as_fraction(level)
    name = f"{p.name}|<{','.join(map(str, xi))}>={format_fraction(level)}" if p.name else None
    if p.empty:
        return Polyhedron.empty_set(p.dim - 1, p.empty_reason or "empty", name=name)
    rows = []
    for i, f in enumerate(p.facets):
        n2 = tuple(sum(f.normal[k] * basis[k][j] for k in range(p.dim)) for j in range(p.dim - 1))
        b2 = f.offset - level * dot(f.normal, v1)
        if not any(n2):
            if b2 > 0:
                return Polyhedron.empty_set(
                    p.dim - 1, f"facet {i} is parallel to the slice and reads 0 >= {b2}", name
                )
            continue
        rows.append((n2, b2))
    out = Polyhedron.from_inequalities(p.dim - 1, rows, name=name)
    if is_pointed(out) and out.dim <= MAX_VERTEX_DIM and not vertices(out):
        return Polyhedron.empty_set(out.dim, "slice has no vertex: level not attained", name)
    return out


def lift_slice_point(xi: Sequence[int], level: int, y: Sequence[int]) -> IntVector:
    """Map hyperplane lattice coordinates back to the ambient lattice."""
    v1, basis = hyperplane_basis(xi)
    n = len(v1)
    return tuple(level * v1[i] + sum(basis[i][j] * y[j] for j in range(n - 1)) for i in range(n))


def regular_level(p: Polyhedron, xi: Sequence[int], level) -> tuple[bool, RationalVector | None]:
    """``(True, None)`` if no vertex attains ``<xi, v> = level``, else the vertex."""
    level = as_fraction(level)
    for v in vertices(p):
        if sum((c * x for c, x in zip(xi, v.point)), Fraction(0)) == level:
            return False, v.point
    return True, None


def level_range(p: Polyhedron, xi: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Min and max of ``<xi, .>`` over a bounded nonempty polyhedron."""
    vals = [sum((c * x for c, x in zip(xi, v.point)), Fraction(0)) for v in vertices(p)]
    if not vals:
        raise PolytopeError("empty polyhedron has no level range")
    return min(vals), max(vals)


def translate(p: Polyhedron, w: Sequence[int]) -> Polyhedron:
    """``p + w`` for an integer vector ``w``."""
    if p.empty:
        return p
    return Polyhedron(
        p.dim, tuple(Halfspace(f.normal, f.offset + dot(f.normal, w)) for f in p.facets), p.name
    )


def transform(p: Polyhedron, u: Sequence[Sequence[int]], shift: Sequence[int] | None = None
              ) -> Polyhedron:
    """Image ``{u @ x + shift : x in p}`` under a unimodular ``u``."""
    from .lattice_core import as_int_matrix, transpose, unimodular_inverse

    u = as_int_matrix(u)
    shift = as_int_vector(shift) if shift is not None else (0,) * p.dim
    if p.empty:
        return p
    uinv_t = transpose(unimodular_inverse(u))
    facets = []
    for f in p.facets:
        n2 = tuple(dot(row, f.normal) for row in uinv_t)
        facets.append(Halfspace(n2, f.offset + dot(n2, shift)))
    return Polyhedron(p.dim, tuple(facets), p.name)


def product(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    """Cartesian product ``p x q`` in dimension ``p.dim + q.dim``."""
    name = f"{p.name}x{q.name}" if p.name and q.name else None
    if p.empty or q.empty:
        return Polyhedron.empty_set(p.dim + q.dim, "factor is empty", name)
    facets = [Halfspace(f.normal + (0,) * q.dim, f.offset) for f in p.facets]
    facets += [Halfspace((0,) * p.dim + f.normal, f.offset) for f in q.facets]
    return Polyhedron(p.dim + q.dim, tuple(facets), name)


def point_polyhedron(w: Sequence[int]) -> Polyhedron:
    return Polyhedron.box(w, w)
