"""Formal characters: total integer functions on the weight lattice.

Finite supports are stored extensionally; infinite ones (lattice points of a
possibly unbounded polyhedron) intensionally, and every consumer evaluates
pointwise.  Nothing is ever truncated.

Kinds
-----
``FiniteSupport``        weight -> nonzero integer map
``PolyhedralIndicator``  1 on the lattice points of a polyhedron
``FiberCount``           rank 1; value at ``m`` is the number of lattice points
                         of ``P`` on ``<xi, .> = m`` (pushforward of an indicator
                         whose fibers are bounded but whose support is not)
``Shifted``              ``v -> c(v - shift)``
``OuterProduct``         ``(v0, v1) -> a(v0) * b(v1)``
``FiniteSum``            unnormalised integer combination of the above

Equality of intensional characters is only semi-decidable here; see
:func:`equal_on_probes`.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .lattice_core import IntVector, as_int_vector, dot, is_primitive, vector_gcd
from .polytope import (
    Polyhedron,
    contains,
    is_bounded,
    is_pointed,
    lattice_points,
    level_range,
    parse_polytope,
    product,
    slice_polyhedron,
    translate,
    vertices,
)


class CharacterError(ValueError):
    """Rank mismatch or an operation the representation cannot support."""


@dataclass(frozen=True)
class FormalCharacter:
    rank: int

    def __call__(self, w: Sequence[int]) -> int:
        return evaluate(self, w)

    def __add__(self, other: "FormalCharacter") -> "FormalCharacter":
        return add(self, other)

    def __neg__(self) -> "FormalCharacter":
        return scale(self, -1)

    def __sub__(self, other: "FormalCharacter") -> "FormalCharacter":
        return add(self, scale(other, -1))

    def __rmul__(self, k: int) -> "FormalCharacter":
        return scale(self, k)


@dataclass(frozen=True)
class FiniteSupport(FormalCharacter):
    coeffs: tuple[tuple[IntVector, int], ...] = ()

    def __post_init__(self):
        merged: dict[IntVector, int] = {}
        for w, c in self.coeffs:
            w = as_int_vector(w)
            if len(w) != self.rank:
                raise CharacterError(f"weight {list(w)} has rank {len(w)}, expected {self.rank}")
            merged[w] = merged.get(w, 0) + int(c)
        object.__setattr__(
            self, "coeffs", tuple(sorted((w, c) for w, c in merged.items() if c != 0))
        )

    @classmethod
    def from_mapping(cls, rank: int, m: Mapping[Sequence[int], int]) -> "FiniteSupport":
        return cls(rank, tuple((tuple(w), c) for w, c in m.items()))

    def as_dict(self) -> dict[IntVector, int]:
        return dict(self.coeffs)


@dataclass(frozen=True)
class PolyhedralIndicator(FormalCharacter):
    polyhedron: Polyhedron = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.polyhedron is None or self.polyhedron.dim != self.rank:
            raise CharacterError("indicator polyhedron dimension must equal the rank")


@dataclass(frozen=True)
class FiberCount(FormalCharacter):
    polyhedron: Polyhedron = None  # type: ignore[assignment]
    xi: IntVector = ()

    def __post_init__(self):
        if self.rank != 1:
            raise CharacterError("fiber counts are rank 1")


@dataclass(frozen=True)
class Shifted(FormalCharacter):
    base: FormalCharacter = None  # type: ignore[assignment]
    shift: IntVector = ()


@dataclass(frozen=True)
class OuterProduct(FormalCharacter):
    left: FormalCharacter = None  # type: ignore[assignment]
    right: FormalCharacter = None  # type: ignore[assignment]


@dataclass(frozen=True)
class FiniteSum(FormalCharacter):
    terms: tuple[tuple[int, FormalCharacter], ...] = ()

    def __post_init__(self):
        for _, t in self.terms:
            if t.rank != self.rank:
                raise CharacterError("all summands must share the rank")


# ---------------------------------------------------------------------------
# Constructors and arithmetic


def zero(rank: int) -> FiniteSupport:
    return FiniteSupport(rank, ())


def delta(w: Sequence[int]) -> FiniteSupport:
    w = as_int_vector(w)
    return FiniteSupport(len(w), ((w, 1),))


def indicator(p: Polyhedron) -> PolyhedralIndicator:
    return PolyhedralIndicator(p.dim, p)


def _check_rank(c: FormalCharacter, w: Sequence[int]) -> IntVector:
    w = as_int_vector(w)
    if len(w) != c.rank:
        raise CharacterError(f"weight has rank {len(w)}, character has rank {c.rank}")
    return w


def _same_rank(a: FormalCharacter, b: FormalCharacter) -> None:
    if a.rank != b.rank:
        raise CharacterError(f"rank mismatch: {a.rank} vs {b.rank}")


def _terms(c: FormalCharacter) -> list[tuple[int, FormalCharacter]]:
    return list(c.terms) if isinstance(c, FiniteSum) else [(1, c)]


def add(a: FormalCharacter, b: FormalCharacter) -> FormalCharacter:
    _same_rank(a, b)
    if isinstance(a, FiniteSupport) and isinstance(b, FiniteSupport):
        return FiniteSupport(a.rank, a.coeffs + b.coeffs)
    finite = [t for t in (a, b) if isinstance(t, FiniteSupport)]
    rest = [(k, t) for x in (a, b) if not isinstance(x, FiniteSupport) for k, t in _terms(x)]
    fs = [(k, t) for k, t in rest if isinstance(t, FiniteSupport)]
    rest = [(k, t) for k, t in rest if not isinstance(t, FiniteSupport)]
    acc = zero(a.rank)
    for f in finite:
        acc = add(acc, f)
    for k, f in fs:
        acc = add(acc, scale(f, k))
    terms = tuple(rest) + (((1, acc),) if acc.coeffs else ())
    if not terms:
        return acc
    return FiniteSum(a.rank, terms)


def scale(c: FormalCharacter, k: int) -> FormalCharacter:
    k = int(k)
    if k == 0:
        return zero(c.rank)
    if k == 1:
        return c
    if isinstance(c, FiniteSupport):
        return FiniteSupport(c.rank, tuple((w, k * v) for w, v in c.coeffs))
    if isinstance(c, FiniteSum):
        return FiniteSum(c.rank, tuple((k * j, t) for j, t in c.terms))
    return FiniteSum(c.rank, ((k, c),))


def shift(c: FormalCharacter, w: Sequence[int]) -> FormalCharacter:
    """``v -> c(v - w)``, the convolution of ``c`` with ``delta(w)``."""
    w = _check_rank(c, w)
    if not any(w):
        return c
    if isinstance(c, FiniteSupport):
        return FiniteSupport(c.rank, tuple((tuple(a + b for a, b in zip(v, w)), k)
                                           for v, k in c.coeffs))
    if isinstance(c, PolyhedralIndicator):
        return indicator(translate(c.polyhedron, w))
    if isinstance(c, Shifted):
        return shift(c.base, tuple(a + b for a, b in zip(c.shift, w)))
    if isinstance(c, FiniteSum):
        return FiniteSum(c.rank, tuple((k, shift(t, w)) for k, t in c.terms))
    return Shifted(c.rank, c, w)


def has_finite_support(c: FormalCharacter) -> bool:
    if isinstance(c, FiniteSupport):
        return True
    if isinstance(c, PolyhedralIndicator):
        return is_bounded(c.polyhedron)
    if isinstance(c, FiniteSum):
        return all(has_finite_support(t) for _, t in c.terms)
    if isinstance(c, Shifted):
        return has_finite_support(c.base)
    if isinstance(c, OuterProduct):
        return has_finite_support(c.left) and has_finite_support(c.right)
    return False


def to_finite(c: FormalCharacter) -> FiniteSupport:
    """Extensional form of a finitely supported character."""
    if isinstance(c, FiniteSupport):
        return c
    if isinstance(c, PolyhedralIndicator):
        if not is_bounded(c.polyhedron):
            raise CharacterError("indicator of an unbounded polyhedron has infinite support")
        return FiniteSupport(c.rank, tuple((w, 1) for w in lattice_points(c.polyhedron)))
    if isinstance(c, FiniteSum):
        acc = zero(c.rank)
        for k, t in c.terms:
            acc = add(acc, scale(to_finite(t), k))
        return acc
    if isinstance(c, Shifted):
        return shift(to_finite(c.base), c.shift)  # type: ignore[return-value]
    if isinstance(c, OuterProduct):
        a, b = to_finite(c.left), to_finite(c.right)
        return FiniteSupport(c.rank, tuple((u + v, x * y) for u, x in a.coeffs
                                           for v, y in b.coeffs))
    raise CharacterError(f"cannot expand {type(c).__name__} extensionally")


def tensor(a: FormalCharacter, b: FormalCharacter, mode: str = "same") -> FormalCharacter:
    """Tensor product of characters.

    ``mode="same"``: both live on one torus, result is the convolution
    ``v -> sum_w a(w) b(v - w)``; one operand must have finite support.
    ``mode="outer"``: product torus, ``(v0, v1) -> a(v0) b(v1)``.
    """
    if mode == "outer":
        if isinstance(a, FiniteSupport) and isinstance(b, FiniteSupport):
            return FiniteSupport(a.rank + b.rank, tuple((u + v, x * y) for u, x in a.coeffs
                                                         for v, y in b.coeffs))
        if isinstance(a, PolyhedralIndicator) and isinstance(b, PolyhedralIndicator):
            return indicator(product(a.polyhedron, b.polyhedron))
        return OuterProduct(a.rank + b.rank, a, b)
    if mode != "same":
        raise CharacterError(f"unknown tensor mode {mode!r} (expected 'same' or 'outer')")
    _same_rank(a, b)
    if has_finite_support(a):
        fin, other = to_finite(a), b
    elif has_finite_support(b):
        fin, other = to_finite(b), a
    else:
        raise CharacterError(
            "tensor of two infinitely supported characters is not defined "
            "(the convolution need not converge)"
        )
    acc: FormalCharacter = zero(a.rank)
    for w, k in fin.coeffs:
        acc = add(acc, scale(shift(other, w), k))
    return acc


# ---------------------------------------------------------------------------
# Evaluation and restriction


@functools.lru_cache(maxsize=65536)
def _fiber_count(p: Polyhedron, xi: IntVector, m: int) -> int:
    g = vector_gcd(xi)
    if m % g:
        return 0
    if p.dim == 1:
        return int(contains(p, (m // xi[0],)))
    prim = tuple(c // g for c in xi)
    return len(lattice_points(slice_polyhedron(p, prim, m // g)))


def evaluate(c: FormalCharacter, w: Sequence[int]) -> int:
    w = _check_rank(c, w)
    if isinstance(c, FiniteSupport):
        return dict(c.coeffs).get(w, 0)
    if isinstance(c, PolyhedralIndicator):
        return int(contains(c.polyhedron, w))
    if isinstance(c, FiberCount):
        return _fiber_count(c.polyhedron, c.xi, w[0])
    if isinstance(c, Shifted):
        return evaluate(c.base, tuple(a - b for a, b in zip(w, c.shift)))
    if isinstance(c, OuterProduct):
        left = evaluate(c.left, w[: c.left.rank])
        return left * evaluate(c.right, w[c.left.rank:]) if left else 0
    if isinstance(c, FiniteSum):
        return sum(k * evaluate(t, w) for k, t in c.terms)
    raise CharacterError(f"unknown character kind {type(c).__name__}")


def _fibers_bounded(p: Polyhedron, xi: IntVector) -> bool:
    """Recession cone of ``p`` meets ``xi``-perp only in 0."""
    if p.empty:
        return True
    g = vector_gcd(xi)
    cone = Polyhedron.from_inequalities(p.dim, [(f.normal, 0) for f in p.facets])
    return is_bounded(slice_polyhedron(cone, tuple(c // g for c in xi), 0))


def _pushforward(c: FormalCharacter, xi: IntVector) -> FormalCharacter:
    if isinstance(c, FiniteSupport):
        return FiniteSupport(1, tuple(((dot(xi, w),), k) for w, k in c.coeffs))
    if isinstance(c, PolyhedralIndicator):
        p = c.polyhedron
        if not any(xi):
            if not is_bounded(p):
                raise CharacterError("restriction to the zero direction needs a bounded support")
            return FiniteSupport(1, (((0,), len(lattice_points(p))),))
        if p.dim == 1:
            if is_bounded(p):
                return FiniteSupport(1, tuple(((xi[0] * x[0],), 1) for x in lattice_points(p)))
            return FiberCount(1, p, xi)
        if not _fibers_bounded(p, xi):
            raise CharacterError(
                f"fiber-compactness fails: a level set of <{list(xi)}, .> meets the "
                "polyhedron in an unbounded set, so the restricted multiplicities are infinite"
            )
        if is_bounded(p):
            if p.empty or not vertices(p):
                return zero(1)
            g = vector_gcd(xi)
            lo, hi = level_range(p, tuple(x // g for x in xi))
            return FiniteSupport(1, tuple(
                ((g * m,), _fiber_count(p, xi, g * m))
                for m in range(math.ceil(lo), math.floor(hi) + 1)
            ))
        return FiberCount(1, p, xi)
    if isinstance(c, Shifted):
        base = _pushforward(c.base, xi)
        return shift(base, (dot(xi, c.shift),))
    if isinstance(c, FiniteSum):
        acc: FormalCharacter = zero(1)
        for k, t in c.terms:
            acc = add(acc, scale(_pushforward(t, xi), k))
        return acc
    if isinstance(c, OuterProduct):
        r = c.left.rank
        return tensor(_pushforward(c.left, xi[:r]), _pushforward(c.right, xi[r:]))
    if isinstance(c, FiberCount):
        raise CharacterError("restriction of a rank-1 fiber count is only defined for xi = (+-1)")
    raise CharacterError(f"unknown character kind {type(c).__name__}")


def restrict(c: FormalCharacter, xi: Sequence[int]) -> FormalCharacter:
    """Pushforward to the circle generated by primitive ``xi``.

    The result is rank 1 with value at ``m`` equal to the sum of ``c`` over
    the lattice points ``w`` with ``<xi, w> = m``.  Polyhedral fibers must be
    bounded (compact level sets); otherwise a :class:`CharacterError` is raised.
    """
    xi = _check_rank(c, xi)
    if not is_primitive(xi):
        raise CharacterError(f"direction {list(xi)} is not primitive; call primitive() first")
    if isinstance(c, FiberCount):
        if xi == (1,):
            return c
        if xi == (-1,):
            return FiberCount(1, c.polyhedron, tuple(-x for x in c.xi))
    return _pushforward(c, xi)


# ---------------------------------------------------------------------------
# Probing and equality


def _polyhedra(c: FormalCharacter) -> Iterable[Polyhedron]:
    if isinstance(c, PolyhedralIndicator):
        yield c.polyhedron
    elif isinstance(c, (Shifted,)):
        yield from _polyhedra(c.base)
    elif isinstance(c, FiniteSum):
        for _, t in c.terms:
            yield from _polyhedra(t)


def probe_weights(c: FormalCharacter, radius: int = 1) -> list[IntVector]:
    """Deterministic probe set: finite supports plus lattice neighbourhoods.

    Around every polyhedron vertex (floored) we add the box of the given
    radius; non-pointed polyhedra contribute a neighbourhood of the origin.
    Shifts and outer products are followed structurally.
    """
    pts: set[IntVector] = set()
    r = c.rank

    def box_around(center: Sequence[int], rad: int) -> None:
        for d in itertools.product(range(-rad, rad + 1), repeat=len(center)):
            pts.add(tuple(a + b for a, b in zip(center, d)))

    def walk(x: FormalCharacter, offset: IntVector) -> list[IntVector]:
        out: list[IntVector] = []
        if isinstance(x, FiniteSupport):
            out = [tuple(a + b for a, b in zip(w, offset)) for w, _ in x.coeffs]
        elif isinstance(x, PolyhedralIndicator):
            p = x.polyhedron
            if not p.empty and is_pointed(p) and p.dim <= 4:
                for v in vertices(p):
                    out.append(tuple(math.floor(q) + o for q, o in zip(v.point, offset)))
            else:
                out.append(offset)
        elif isinstance(x, FiberCount):
            out.append(offset)
        elif isinstance(x, Shifted):
            out = walk(x.base, tuple(a + b for a, b in zip(offset, x.shift)))
        elif isinstance(x, FiniteSum):
            for _, t in x.terms:
                out += walk(t, offset)
        elif isinstance(x, OuterProduct):
            k = x.left.rank
            left = walk(x.left, offset[:k]) or [offset[:k]]
            right = walk(x.right, offset[k:]) or [offset[k:]]
            out = [u + v for u in left for v in right]
        return out

    for centre in walk(c, (0,) * r):
        box_around(centre, radius)
    if not pts:
        box_around((0,) * r, radius)
    return sorted(pts)


def equal_on_probes(a: FormalCharacter, b: FormalCharacter, extra: Iterable[Sequence[int]] = (),
                    radius: int = 1) -> bool:
    """Semi-decision of ``a == b`` by evaluation on a shared probe set.

    ``False`` is a proof of inequality; ``True`` means no probe tells them
    apart.  The probe set is the union of both :func:`probe_weights` sets
    and ``extra``.
    """
    _same_rank(a, b)
    probes = set(probe_weights(a, radius)) | set(probe_weights(b, radius))
    probes |= {as_int_vector(w) for w in extra}
    return all(evaluate(a, w) == evaluate(b, w) for w in sorted(probes))


# ---------------------------------------------------------------------------
# Serialisation


def to_dict(c: FormalCharacter) -> dict:
    if isinstance(c, FiniteSupport):
        return {"kind": "finite", "rank": c.rank,
                "terms": [{"weight": list(w), "coeff": k} for w, k in c.coeffs]}
    if isinstance(c, PolyhedralIndicator):
        return {"kind": "indicator", "rank": c.rank, "polytope": c.polyhedron.to_dict()}
    if isinstance(c, FiberCount):
        return {"kind": "fiber_count", "rank": 1, "xi": list(c.xi),
                "polytope": c.polyhedron.to_dict()}
    if isinstance(c, Shifted):
        return {"kind": "shifted", "rank": c.rank, "shift": list(c.shift), "base": to_dict(c.base)}
    if isinstance(c, OuterProduct):
        return {"kind": "outer", "rank": c.rank, "left": to_dict(c.left),
                "right": to_dict(c.right)}
    if isinstance(c, FiniteSum):
        return {"kind": "sum", "rank": c.rank,
                "terms": [{"coeff": k, "character": to_dict(t)} for k, t in c.terms]}
    raise CharacterError(f"unknown character kind {type(c).__name__}")


def from_dict(d: Mapping) -> FormalCharacter:
    import yaml

    def poly(x: Mapping) -> Polyhedron:
        return parse_polytope(yaml.safe_dump(dict(x)))

    kind = d.get("kind")
    rank = int(d["rank"])
    if kind == "finite":
        return FiniteSupport(rank, tuple((tuple(t["weight"]), int(t["coeff"])) for t in d["terms"]))
    if kind == "indicator":
        return PolyhedralIndicator(rank, poly(d["polytope"]))
    if kind == "fiber_count":
        return FiberCount(1, poly(d["polytope"]), as_int_vector(d["xi"]))
    if kind == "shifted":
        return Shifted(rank, from_dict(d["base"]), as_int_vector(d["shift"]))
    if kind == "outer":
        return OuterProduct(rank, from_dict(d["left"]), from_dict(d["right"]))
    if kind == "sum":
        return FiniteSum(rank, tuple((int(t["coeff"]), from_dict(t["character"]))
                                     for t in d["terms"]))
    raise CharacterError(f"unknown character kind {kind!r}")
