"""Quantization of toric momentum data and its reduction checks.

For a Delzant polyhedron ``P`` the quantization character is the indicator of
its lattice points.  Reduction by a circle ``xi`` at an integer level is the
slice of ``P`` in hyperplane lattice coordinates, and its Riemann-Roch number
is the lattice count of that slice.  :func:`verify_qr` compares the two sides
of "quantization commutes with reduction" at one level.

Irregular levels are reported (``regular=False``), never silently handled
with an orbifold formula.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import character as ch
from .lattice_core import IntVector, as_int_vector, is_primitive, rank
from .polytope import (
    Polyhedron,
    PolytopeError,
    contains,
    delzant_check,
    format_fraction,
    is_bounded,
    lattice_points,
    regular_level,
    slice_polyhedron,
)

SCHEMA_VERSION = "toric-index.report/1"
BOUNDARY_TAG = "off-fiber-vanishing"


class QuantizeError(ValueError):
    """Precondition failure (non-Delzant input, unbounded fibers, ...)."""


class IrregularLevelError(QuantizeError):
    def __init__(self, xi, level, vertex):
        self.xi, self.level, self.vertex = tuple(xi), level, vertex
        coords = ", ".join(str(format_fraction(c)) for c in vertex)
        super().__init__(
            f"level {level} is not regular for xi={list(xi)}: vertex ({coords}) attains it"
        )


class DelzantViolation(QuantizeError):
    def __init__(self, report):
        self.report = report
        first = report.violations[0]
        coords = ", ".join(str(format_fraction(c)) for c in first[0])
        super().__init__(
            f"polyhedron fails the Delzant condition at {len(report.violations)} vertex(es), "
            f"first at ({coords}): {first[1]}"
        )


def _require_delzant(p: Polyhedron, strict: bool = True) -> None:
    rep = delzant_check(p)
    if rep.is_delzant:
        return
    if strict:
        raise DelzantViolation(rep)
    warnings.warn(str(DelzantViolation(rep)), stacklevel=3)


def _require_primitive(xi: Sequence[int], dim: int) -> IntVector:
    xi = as_int_vector(xi)
    if len(xi) != dim:
        raise QuantizeError(f"direction has length {len(xi)}, polyhedron has dim {dim}")
    if not is_primitive(xi):
        raise QuantizeError(f"direction {list(xi)} is not primitive; call primitive() first")
    return xi


def quantize(p: Polyhedron, strict: bool = True) -> ch.PolyhedralIndicator:
    """Quantization character: 1 on every lattice point of ``p``, else 0.

    ``strict=False`` downgrades a Delzant violation to a warning.
    """
    _require_delzant(p, strict)
    return ch.indicator(p)


def riemann_roch(p: Polyhedron, require_delzant: bool = True) -> int:
    """Riemann-Roch number of the toric space of a bounded polytope (lattice count).

    ``require_delzant=False`` is used for reduced polytopes, which at a regular
    level may be rationally smooth only.
    """
    if not is_bounded(p):
        raise QuantizeError("Riemann-Roch needs a bounded polytope (compact space)")
    if require_delzant:
        _require_delzant(p)
    return len(lattice_points(p))


def reduce(p: Polyhedron, xi: Sequence[int], level: int) -> Polyhedron:
    """Reduced polytope at a regular integer level, in ``Z^(dim-1)`` coordinates."""
    xi = _require_primitive(xi, p.dim)
    ok, vertex = regular_level(p, xi, level)
    if not ok:
        raise IrregularLevelError(xi, level, vertex)
    return slice_polyhedron(p, xi, level)


@dataclass(frozen=True)
class QRReport:
    xi: IntVector
    level: int
    regular: bool
    lhs: int
    rhs: int | None
    passed: bool
    critical_vertex: tuple[Fraction, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "kind": "qr",
            "xi": list(self.xi),
            "level": self.level,
            "regular": self.regular,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "pass": self.passed,
            "critical_vertex": None if self.critical_vertex is None
            else [format_fraction(c) for c in self.critical_vertex],
        }


def verify_qr(p: Polyhedron, xi: Sequence[int], level: int) -> QRReport:
    """Compare the restricted quantization at ``level`` with RR of the reduction."""
    xi = _require_primitive(xi, p.dim)
    level = int(level)
    q = quantize(p)
    try:
        lhs = ch.evaluate(ch.restrict(q, xi), (level,))
    except ch.CharacterError as exc:
        raise QuantizeError(str(exc)) from None
    ok, vertex = regular_level(p, xi, level)
    if not ok:
        return QRReport(xi, level, False, lhs, None, False, vertex)
    rhs = riemann_roch(reduce(p, xi, level), require_delzant=False)
    return QRReport(xi, level, True, lhs, rhs, lhs == rhs)


# ---------------------------------------------------------------------------
# Localization bookkeeping


@dataclass(frozen=True)
class BoundaryTerm:
    label: str
    alpha: tuple[Fraction, ...]
    contribution: int = 0
    justification: str = BOUNDARY_TAG

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "alpha": [format_fraction(c) for c in self.alpha],
            "contribution": self.contribution,
            "justification": self.justification,
        }


@dataclass(frozen=True)
class LocalizationReport:
    rho: IntVector
    fiber_contribution: int
    boundary_terms: tuple[BoundaryTerm, ...] = field(default=())

    @property
    def total(self) -> int:
        return self.fiber_contribution + sum(t.contribution for t in self.boundary_terms)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "kind": "localization",
            "rho": list(self.rho),
            "fiber_contribution": self.fiber_contribution,
            "boundary_terms": [t.to_dict() for t in self.boundary_terms],
            "total": self.total,
        }


def _project_to_face(p: Polyhedron, subset: Sequence[int], rho: IntVector):
    """Orthogonal projection of ``rho`` onto the affine span of the face ``subset``."""
    from .polytope import _solve

    n = [p.facets[i].normal for i in subset]
    resid = [p.facets[i].offset - sum(a * b for a, b in zip(row, rho)) for i, row in zip(subset, n)]
    gram = [[sum(a * b for a, b in zip(r1, r2)) for r2 in n] for r1 in n]
    lam = _solve(gram, resid)
    if lam is None:
        return None
    return tuple(Fraction(rho[j]) + sum(l * row[j] for l, row in zip(lam, n))
                 for j in range(p.dim))


def localization_report(p: Polyhedron, rho: Sequence[int]) -> LocalizationReport:
    """Split the multiplicity at ``rho`` into a fiber term and boundary terms.

    The fiber term is 1 exactly when ``rho`` lies in ``p``.  Each face ``F``
    whose relative interior contains the nearest point ``alpha != rho`` of its
    affine span carries a critical component away from the fiber over
    ``rho``; such components are acyclic for the deformed operator and
    contribute 0.
    """
    rho = as_int_vector(rho)
    if len(rho) != p.dim:
        raise QuantizeError(f"weight has rank {len(rho)}, polyhedron has dim {p.dim}")
    _require_delzant(p)
    fiber = int(contains(p, rho))
    terms = []
    if not p.empty:
        m = len(p.facets)
        for size in range(1, p.dim + 1):
            for subset in itertools.combinations(range(m), size):
                if rank([p.facets[i].normal for i in subset]) != size:
                    continue
                alpha = _project_to_face(p, subset, rho)
                if alpha is None or alpha == tuple(Fraction(x) for x in rho):
                    continue
                inside = all(
                    (f.value(alpha) == f.offset) if i in subset else (f.value(alpha) > f.offset)
                    for i, f in enumerate(p.facets)
                )
                if inside:
                    label = "face{" + ",".join(map(str, subset)) + "}"
                    terms.append(BoundaryTerm(label, alpha))
    return LocalizationReport(rho, fiber, tuple(terms))


def polytope_summary(p: Polyhedron) -> dict:
    """Machine-readable description used by the CLI ``quantize`` report."""
    out = {"schema": SCHEMA_VERSION, "kind": "quantize", "polytope": p.to_dict(),
           "bounded": is_bounded(p), "delzant": delzant_check(p).to_dict()}
    if out["bounded"]:
        pts = lattice_points(p)
        out["support_size"] = len(pts)
        out["support"] = [list(w) for w in pts]
    return out


__all__ = [
    "SCHEMA_VERSION", "QuantizeError", "IrregularLevelError", "DelzantViolation",
    "quantize", "riemann_roch", "reduce", "QRReport", "verify_qr",
    "BoundaryTerm", "LocalizationReport", "localization_report", "polytope_summary",
    "PolytopeError",
]
