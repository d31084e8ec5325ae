"""Deformed Dirac operators on the cylinder and disc models, one Fourier mode at a time.

Model
-----
On the mode ``tau`` of the circle factor, with bundle weight ``rho`` and
moment profile ``mu``, the chirality-raising block is first order::

    A u = -i (u' - g u)

with a real potential ``g``.  On the cylinder (coordinate ``r`` in ``R``)::

    ConstantT(t)       g = 2 pi (tau - mu) (1 + t phi^4)
    ProperFunction     g = 2 pi (tau - mu) (1 + phi^4 f^4),   f = sqrt(1 + r^2)
    EpsilonFamily(e)   g = 2 pi [(tau - mu) + phi^4 |mu|^4 (e tau - mu)]

The last family interpolates between the plain deformation (``e = 1``) and
the orbital one (``e = 0``), with ``f = |mu|``.  ``phi`` is a bump vanishing
for ``|r| <= 1/8`` and equal to 1 for ``|r| >= 1/4`` when ``tau == rho``
(the only mode with a zero of ``tau - mu``), and identically 1 otherwise.

The disc is treated radially on ``(eps_in, R]`` after conjugating by
``sqrt(l)``, where ``l(s)`` is the circumference of the circle of radius
``s`` (``2 pi s`` near the origin, 1 beyond ``3/4``)::

    g = (2 pi (tau - mu) + l'/2) / l + W(s) 2 pi (w tau - mu) l

with ``W`` and ``w`` the deformation weight and twist above.  Near 0 the
solution behaves like ``s^a`` with ``a = tau - rho + 1/2``; the inner
boundary keeps that branch (ghost value ``u(s_0 - h) = (eps/s_0)^a u(s_0)``)
when ``a > 0`` and imposes a zero value otherwise.

Discretization and counting
---------------------------
Central differences with zero values outside the grid give a real
tridiagonal ``B`` with ``A = -i B``.  Its smallest singular values come from
the banded Hermitian dilation ``[[0, B^T], [B, 0]]``.  A square truncation
always has index 0: each near-zero singular pair couples a smooth mode with a
staggered grid doubler.  Singular vectors of the kernel cluster are
classified by their nearest-neighbour hopping ``<x, (S + S^T) x> / |x|^2``,
which is close to ``+2`` for smooth vectors and ``-2`` for doublers; only
smooth ones count.  Ambiguous hopping leaves the index unresolved.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import yaml
from scipy.linalg import eig_banded, solve_banded

from . import _kernels

SEPARATION = 100.0
N_SMALLEST = 8
MAX_WEIGHT = 10**6
HOP_THRESHOLD = 1.0
DEFAULT_R = 5.0
DEFAULT_N = 2001
DEFAULT_T = 100.0


class ModelError(ValueError):
    """Invalid model specification."""


class IndexUnresolved(RuntimeError):
    """No clean spectral separation at either grid."""


# ---------------------------------------------------------------------------
# Smooth pieces


def smoothstep(t):
    t = np.clip(t, 0.0, 1.0)
    return t**3 * (10.0 - 15.0 * t + 6.0 * t * t)


def smoothstep_prime(t):
    t = np.asarray(t, dtype=float)
    tc = np.clip(t, 0.0, 1.0)
    return np.where((t > 0) & (t < 1), 30.0 * tc**2 * (1.0 - tc) ** 2, 0.0)


def smoothstep_integral(t):
    """Antiderivative of :func:`smoothstep` with value 0 at 0 and 1/2 at 1."""
    t = np.clip(t, 0.0, 1.0)
    return t**6 - 3.0 * t**5 + 2.5 * t**4


@dataclass(frozen=True)
class ProfileMu:
    """Moment profile: ``rho + r`` near the centre, ``rho +- 1/2`` far out.

    The slope ``1 - S((|r| - a0)/(a1 - a0))`` blends linearly to flat, so the
    profile is non-decreasing and C^2.  On the cylinder this needs
    ``a0 + a1 = 1``.  On the disc the centre behaviour is ``rho + c s^2`` with
    ``c = 1 / (2 a0 a1)``, which reaches ``rho + 1/2`` exactly at ``a1``.
    """

    rho: int
    kind: str = "cylinder"
    transition: tuple[float, float] = (0.25, 0.75)

    def __post_init__(self):
        a0, a1 = self.transition
        if not 0 < a0 < a1:
            raise ModelError(f"transition must satisfy 0 < a0 < a1, got {self.transition}")
        if self.kind == "cylinder" and abs(a0 + a1 - 1.0) > 1e-12:
            raise ModelError("cylinder transition must satisfy a0 + a1 = 1")
        if self.kind not in ("cylinder", "disc"):
            raise ModelError(f"unknown profile kind {self.kind!r}")

    @property
    def disc_coefficient(self) -> float:
        a0, a1 = self.transition
        return 1.0 / (2.0 * a0 * a1)

    def offset(self, r):
        """``mu - rho``."""
        a0, a1 = self.transition
        r = np.asarray(r, dtype=float)
        a = np.abs(r)
        b = np.clip(a, a0, a1)
        blend = (b - a0) - (a1 - a0) * smoothstep_integral((b - a0) / (a1 - a0))
        if self.kind == "cylinder":
            return np.sign(r) * np.where(a < a0, a, a0 + blend)
        c = self.disc_coefficient
        return np.where(a < a0, c * a * a, c * a0 * a0 + 2.0 * c * a0 * blend)

    def __call__(self, r):
        return self.rho + self.offset(r)

    def limit(self, side: int) -> Fraction:
        """Exact value beyond the transition on the given side (+1 or -1)."""
        if self.kind == "disc" or side > 0:
            return Fraction(2 * self.rho + 1, 2)
        return Fraction(2 * self.rho - 1, 2)


def cutoff(a, inner: float = 0.125, outer: float = 0.25):
    """Smooth bump in ``|r|``: 0 up to ``inner``, 1 from ``outer`` on."""
    return smoothstep((np.abs(np.asarray(a, dtype=float)) - inner) / (outer - inner))


def circumference(s, transition=(0.25, 0.75)):
    a0, a1 = transition
    x = smoothstep((np.asarray(s, dtype=float) - a0) / (a1 - a0))
    return (1.0 - x) * 2.0 * math.pi * s + x


def circumference_prime(s, transition=(0.25, 0.75)):
    a0, a1 = transition
    s = np.asarray(s, dtype=float)
    t = (s - a0) / (a1 - a0)
    x = smoothstep(t)
    dx = smoothstep_prime(t) / (a1 - a0)
    return (1.0 - x) * 2.0 * math.pi + dx * (1.0 - 2.0 * math.pi * s)


# ---------------------------------------------------------------------------
# Specification


@dataclass(frozen=True)
class ConstantT:
    t: float = DEFAULT_T

    def __post_init__(self):
        if not (self.t > 0 and math.isfinite(self.t)):
            raise ModelError(f"ConstantT needs a finite positive t, got {self.t}")

    def label(self) -> str:
        return f"t={self.t:g}"


@dataclass(frozen=True)
class ProperFunction:
    power: int = 4

    def __post_init__(self):
        if self.power != 4:
            raise ModelError("ProperFunction uses the fourth power of f")

    def label(self) -> str:
        return "proper"


@dataclass(frozen=True)
class EpsilonFamily:
    epsilon: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ModelError(f"epsilon must lie in [0, 1], got {self.epsilon}")

    def label(self) -> str:
        return f"epsilon={self.epsilon:g}"


Deformation = ConstantT | ProperFunction | EpsilonFamily


@dataclass(frozen=True)
class ModelSpec1D:
    kind: str
    rho: int
    tau: int
    deformation: Deformation = field(default_factory=ConstantT)
    cutoff: tuple[float, float] = (0.125, 0.25)
    R: float = DEFAULT_R
    N: int = DEFAULT_N

    def __post_init__(self):
        if self.kind not in ("cylinder", "disc"):
            raise ModelError(f"kind must be 'cylinder' or 'disc', got {self.kind!r}")
        for name in ("rho", "tau"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise ModelError(f"{name} must be an integer, got {v!r}")
            if abs(v) > MAX_WEIGHT:
                raise ModelError(f"|{name}| exceeds the guard {MAX_WEIGHT}")
            object.__setattr__(self, name, int(v))
        if not isinstance(self.deformation, (ConstantT, ProperFunction, EpsilonFamily)):
            raise ModelError(f"unknown deformation {self.deformation!r}")
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 64:
            raise ModelError(f"grid needs N >= 64 points, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        if not (self.R >= 2 and math.isfinite(self.R)):
            raise ModelError(f"grid needs R_max >= 2, got {self.R}")
        lo, hi = self.cutoff
        if not 0 <= lo < hi:
            raise ModelError(f"cutoff radii must satisfy 0 <= inner < outer, got {self.cutoff}")

    @property
    def profile(self) -> ProfileMu:
        return ProfileMu(self.rho, self.kind)

    def with_grid(self, R: float | None = None, N: int | None = None) -> "ModelSpec1D":
        return replace(self, R=self.R if R is None else R, N=self.N if N is None else N)

    def to_dict(self) -> dict:
        d = self.deformation
        if isinstance(d, ConstantT):
            dd = {"type": "constant_t", "t": d.t}
        elif isinstance(d, ProperFunction):
            dd = {"type": "proper"}
        else:
            dd = {"type": "epsilon", "epsilon": d.epsilon}
        return {"kind": self.kind, "rho": self.rho, "tau": self.tau, "deformation": dd,
                "cutoff": {"inner": self.cutoff[0], "outer": self.cutoff[1]},
                "grid": {"R": self.R, "N": self.N}}


def parse_deformation(d) -> Deformation:
    if isinstance(d, (ConstantT, ProperFunction, EpsilonFamily)):
        return d
    if not isinstance(d, dict):
        raise ModelError("deformation must be a mapping with a 'type' field")
    d = dict(d)
    kind = d.pop("type", None)
    try:
        if kind == "constant_t":
            return ConstantT(float(d.pop("t", DEFAULT_T)), **d)
        if kind == "proper":
            return ProperFunction(**d)
        if kind == "epsilon":
            return EpsilonFamily(float(Fraction(str(d.pop("epsilon")))), **d)
    except TypeError as exc:
        raise ModelError(f"deformation {kind!r}: {exc}") from None
    except KeyError as exc:
        raise ModelError(f"deformation {kind!r}: missing {exc}") from None
    raise ModelError(f"unknown deformation type {kind!r} (constant_t | proper | epsilon)")


_SPEC_FIELDS = {"kind", "rho", "tau", "deformation", "cutoff", "grid"}


def spec_from_dict(d: dict) -> ModelSpec1D:
    if not isinstance(d, dict):
        raise ModelError("model document must be a mapping")
    unknown = set(d) - _SPEC_FIELDS
    if unknown:
        raise ModelError(f"unknown field(s): {', '.join(sorted(map(str, unknown)))}")
    for req in ("kind", "rho", "tau"):
        if req not in d:
            raise ModelError(f"missing required field {req!r}")
    grid = dict(d.get("grid") or {})
    bad = set(grid) - {"R", "N"}
    if bad:
        raise ModelError(f"grid: unknown field(s) {sorted(bad)}")
    cut = dict(d.get("cutoff") or {})
    bad = set(cut) - {"inner", "outer"}
    if bad:
        raise ModelError(f"cutoff: unknown field(s) {sorted(bad)}")
    return ModelSpec1D(
        kind=d["kind"], rho=d["rho"], tau=d["tau"],
        deformation=parse_deformation(d.get("deformation", {"type": "constant_t"})),
        cutoff=(float(cut.get("inner", 0.125)), float(cut.get("outer", 0.25))),
        R=float(grid.get("R", DEFAULT_R)), N=grid.get("N", DEFAULT_N),
    )


def parse_model_spec(text: str) -> ModelSpec1D:
    """Parse a model document::

        kind: cylinder          # or disc
        rho: 0
        tau: 0
        deformation: {type: constant_t, t: 100}   # | {type: proper} | {type: epsilon, epsilon: 1/2}
        cutoff: {inner: 0.125, outer: 0.25}       # optional
        grid: {R: 5, N: 2001}                     # optional
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ModelError(f"malformed model document: {exc}") from None
    return spec_from_dict(data)


# ---------------------------------------------------------------------------
# Assembly


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """``A = -i B`` for the real tridiagonal ``B`` (diag ``d``, sub ``lo``, super ``up``)."""

    spec: ModelSpec1D
    grid: np.ndarray
    h: float
    potential: np.ndarray  # tau - mu on the grid
    d: np.ndarray
    lo: np.ndarray
    up: np.ndarray

    @property
    def size(self) -> int:
        return self.d.shape[0]

    @property
    def plus_block(self):
        import scipy.sparse as sp

        return sp.diags([-1j * self.lo, -1j * self.d, -1j * self.up], [-1, 0, 1],
                        shape=(self.size, self.size), format="csr")

    def full_operator(self):
        import scipy.sparse as sp

        a = self.plus_block
        return sp.bmat([[None, a.conj().T], [a, None]], format="csr")

    def assembly_residual(self) -> float:
        full = self.full_operator()
        diff = full - full.conj().T
        return float(abs(diff).max()) if diff.nnz else 0.0


def _weights(spec: ModelSpec1D, x: np.ndarray, mu: np.ndarray, phi: np.ndarray):
    """Deformation weight ``W`` and twisted potential ``(w tau - mu)``."""
    d = spec.deformation
    tau = spec.tau
    if isinstance(d, ConstantT):
        return d.t * phi**4, tau - mu
    if isinstance(d, ProperFunction):
        return phi**4 * (1.0 + x * x) ** 2, tau - mu
    return phi**4 * np.abs(mu) ** 4, d.epsilon * tau - mu


def _finish(spec, x, h, w, g, kappa=0.0) -> OperatorMatrix:
    n = x.shape[0]
    d = -g
    d = d.copy()
    d[0] -= kappa / (2.0 * h)
    lo = np.full(n - 1, -1.0 / (2.0 * h))
    up = np.full(n - 1, 1.0 / (2.0 * h))
    return OperatorMatrix(spec, x, h, w, d, lo, up)


def build_cylinder_operator(spec: ModelSpec1D) -> OperatorMatrix:
    if spec.kind != "cylinder":
        raise ModelError("build_cylinder_operator needs kind='cylinder'")
    h = 2.0 * spec.R / (spec.N + 1)
    r = -spec.R + h * np.arange(1, spec.N + 1)
    mu = spec.profile(r)
    phi = cutoff(r, *spec.cutoff) if spec.tau == spec.rho else np.ones_like(r)
    weight, twisted = _weights(spec, r, mu, phi)
    g = 2.0 * math.pi * ((spec.tau - mu) + weight * twisted)
    return _finish(spec, r, h, spec.tau - mu, g)


def disc_inner_radius(R: float) -> float:
    return 1e-3 * R


def build_disc_operator(spec: ModelSpec1D) -> OperatorMatrix:
    if spec.kind != "disc":
        raise ModelError("build_disc_operator needs kind='disc'")
    eps = disc_inner_radius(spec.R)
    h = (spec.R - eps) / (spec.N + 1)
    s = eps + h * np.arange(1, spec.N + 1)
    if s[0] >= spec.cutoff[0]:
        raise ModelError("grid too coarse: first radial node lies outside the cutoff core; refine N")
    mu = spec.profile(s)
    ell = circumference(s)
    dell = circumference_prime(s)
    # The disc cutoff always vanishes near the fixed point at the origin.
    phi = cutoff(s, *spec.cutoff)
    weight, twisted = _weights(spec, s, mu, phi)
    g = (2.0 * math.pi * (spec.tau - mu) + 0.5 * dell) / ell + weight * 2.0 * math.pi * twisted * ell
    a = spec.tau - spec.rho + 0.5
    if a == 0:  # pragma: no cover - impossible for integer weights
        raise ModelError("indicial exponent vanishes; refine the grid or change the mode")
    kappa = (eps / s[0]) ** a if a > 0 else 0.0
    return _finish(spec, s, h, spec.tau - mu, g, kappa)


def build_operator(spec: ModelSpec1D) -> OperatorMatrix:
    return build_cylinder_operator(spec) if spec.kind == "cylinder" else build_disc_operator(spec)


# ---------------------------------------------------------------------------
# Spectral analysis


@dataclass(frozen=True)
class GridAnalysis:
    N: int
    R: float
    singular_values: tuple[float, ...]
    resolved: bool
    index: int | None
    dim_ker_plus: int | None
    dim_ker_minus: int | None
    cluster_size: int | None
    spectral_gap: float | None
    separation: float | None
    doublers: tuple[int, int] = (0, 0)
    reason: str = ""


@dataclass(frozen=True)
class IndexResult:
    index: int | None
    dim_ker_plus: int | None
    dim_ker_minus: int | None
    spectral_gap: float | None
    kernel_cluster: tuple[float, ...]
    refinement_consistent: bool
    resolved: bool = True
    separation: float | None = None
    refined: GridAnalysis | None = None
    coarse: GridAnalysis | None = None

    def to_dict(self) -> dict:
        def grid(g: GridAnalysis | None):
            if g is None:
                return None
            return {"N": g.N, "R": g.R, "index": g.index, "resolved": g.resolved,
                    "cluster_size": g.cluster_size, "spectral_gap": g.spectral_gap,
                    "separation": g.separation, "doublers": list(g.doublers),
                    "singular_values": [float(f"{v:.6e}") for v in g.singular_values],
                    "reason": g.reason}

        return {"index": self.index, "dim_ker_plus": self.dim_ker_plus,
                "dim_ker_minus": self.dim_ker_minus,
                "spectral_gap": None if self.spectral_gap is None else float(f"{self.spectral_gap:.6e}"),
                "kernel_cluster": [float(f"{v:.6e}") for v in self.kernel_cluster],
                "separation": None if self.separation is None else float(f"{self.separation:.6e}"),
                "refinement_consistent": self.refinement_consistent,
                "resolved": self.resolved, "coarse": grid(self.coarse),
                "refined": grid(self.refined)}


def smallest_singular_values(op: OperatorMatrix, m: int = N_SMALLEST) -> np.ndarray:
    """The ``m`` smallest singular values of ``B``, ascending."""
    ab = _kernels.dilation_bands(op.d, op.lo, op.up)
    n = ab.shape[1]
    m = min(m, op.size)
    w = eig_banded(ab, select="i", select_range=(n // 2 - m, n // 2 + m - 1), eigvals_only=True)
    return np.sort(np.abs(w))[::2]


def cluster_split(sigma: np.ndarray, floor: float, ratio: float = SEPARATION) -> int | None:
    """Size of the kernel cluster, or ``None`` when no clean split exists.

    ``k`` is a candidate when ``sigma[k] >= ratio * sigma[k-1]``; ``k = 0``
    when ``sigma[0] >= ratio * floor``.  The largest candidate below
    ``len(sigma)`` wins.
    """
    cands = [0] if sigma[0] >= ratio * floor else []
    cands += [k for k in range(1, len(sigma)) if sigma[k] >= ratio * sigma[k - 1]]
    return max(cands) if cands else None


def _full_band(ab_upper: np.ndarray, shift: float) -> np.ndarray:
    """Upper band storage (bandwidth 3) to the (3, 3) layout of solve_banded, minus ``shift``."""
    n = ab_upper.shape[1]
    full = np.zeros((7, n), dtype=ab_upper.dtype)
    full[:4] = ab_upper
    for k in range(1, 4):
        full[3 + k, : n - k] = np.conj(ab_upper[3 - k, k:])
    full[3] -= shift
    return full


def cluster_vectors(op: OperatorMatrix, k: int, gap: float, iterations: int = 3
                    ) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases (N x k) of the right and left singular spaces of the cluster."""
    ab = _kernels.dilation_bands(op.d, op.lo, op.up)
    n = ab.shape[1]
    band = _full_band(ab, gap * 1e-6 * math.pi)
    rng = np.random.default_rng(20240611)
    y = rng.standard_normal((n, 2 * k))
    for _ in range(iterations):
        y = solve_banded((3, 3), band, y, check_finite=False)
        y, _ = np.linalg.qr(y)
    u, v = y[0::2], y[1::2]
    qu = np.linalg.svd(u, full_matrices=False)[0][:, :k]
    qv = np.linalg.svd(v, full_matrices=False)[0][:, :k]
    return qu, qv


def hopping_spectrum(q: np.ndarray) -> np.ndarray:
    """Eigenvalues of ``Q^H (S + S^T) Q`` for the nearest-neighbour shift ``S``."""
    tq = np.zeros_like(q)
    tq[1:] += q[:-1]
    tq[:-1] += q[1:]
    m = q.conj().T @ tq
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def analyze(op: OperatorMatrix) -> GridAnalysis:
    sigma = smallest_singular_values(op)
    sig_max = float(np.max(np.abs(op.d)) + np.max(np.abs(op.lo)) + np.max(np.abs(op.up)))
    floor = op.size * np.finfo(float).eps * sig_max
    k = cluster_split(sigma, floor)
    base = dict(N=op.spec.N, R=op.spec.R, singular_values=tuple(float(s) for s in sigma))
    if k is None:
        return GridAnalysis(**base, resolved=False, index=None, dim_ker_plus=None,
                            dim_ker_minus=None, cluster_size=None, spectral_gap=None,
                            separation=None, reason="no separation by a factor of 100")
    gap = float(sigma[k])
    sep = gap / float(sigma[k - 1]) if k else gap / floor
    if k == 0:
        return GridAnalysis(**base, resolved=True, index=0, dim_ker_plus=0, dim_ker_minus=0,
                            cluster_size=0, spectral_gap=gap, separation=sep)
    qu, qv = cluster_vectors(op, k, gap)
    hu, hv = hopping_spectrum(qu), hopping_spectrum(qv)
    if np.any(np.abs(hu) < HOP_THRESHOLD) or np.any(np.abs(hv) < HOP_THRESHOLD):
        return GridAnalysis(**base, resolved=False, index=None, dim_ker_plus=None,
                            dim_ker_minus=None, cluster_size=k, spectral_gap=gap, separation=sep,
                            reason="kernel vectors neither smooth nor staggered")
    plus, minus = int(np.sum(hu > 0)), int(np.sum(hv > 0))
    return GridAnalysis(**base, resolved=True, index=plus - minus, dim_ker_plus=plus,
                        dim_ker_minus=minus, cluster_size=k, spectral_gap=gap, separation=sep,
                        doublers=(k - plus, k - minus))


@functools.lru_cache(maxsize=1024)
def _analyze_spec(spec: ModelSpec1D) -> GridAnalysis:
    return analyze(build_operator(spec))


def compute_index(op: OperatorMatrix | ModelSpec1D, refine: bool = True) -> IndexResult:
    """Graded index of the plus block, with a refinement check at ``2N``.

    Raises :class:`IndexUnresolved` when neither grid separates.
    """
    spec = op if isinstance(op, ModelSpec1D) else op.spec
    coarse = _analyze_spec(spec) if isinstance(op, ModelSpec1D) else analyze(op)
    fine = _analyze_spec(spec.with_grid(N=2 * spec.N)) if refine else None
    if not coarse.resolved and (fine is None or not fine.resolved):
        raise IndexUnresolved(
            f"index unresolved; refine grid or adjust deformation ({coarse.reason})"
        )
    main = coarse if coarse.resolved else fine
    consistent = bool(
        fine is not None and coarse.resolved and fine.resolved and coarse.index == fine.index
    )
    k = main.cluster_size or 0
    return IndexResult(
        index=main.index, dim_ker_plus=main.dim_ker_plus, dim_ker_minus=main.dim_ker_minus,
        spectral_gap=main.spectral_gap, kernel_cluster=main.singular_values[:k],
        refinement_consistent=consistent, resolved=True, separation=main.separation,
        refined=fine, coarse=coarse,
    )


def unresolved_result(reason: str = "") -> IndexResult:
    return IndexResult(None, None, None, None, (), False, resolved=False)


# ---------------------------------------------------------------------------
# Oracle, sweeps, probes, products


def analytic_zero_mode_count(profile: ProfileMu, tau: int, chirality: int) -> int:
    """Normalisable zero modes of ``u' = +-2 pi (tau - mu) u`` decided from the ends.

    Chirality ``+1``: ``u = exp(2 pi int (tau - mu))`` decays at ``+inf`` iff
    ``tau < mu(+inf)`` and at ``-inf`` iff ``tau > mu(-inf)``.  Chirality
    ``-1`` needs the reverse inequalities, which cannot both hold because the
    profile is non-decreasing.  On the disc the left end is the origin, where
    the plus solution behaves like ``s^(tau - rho + 1/2)`` and must vanish.
    """
    if chirality not in (1, -1):
        raise ModelError("chirality must be +1 or -1")
    if isinstance(tau, bool) or int(tau) != tau:
        raise ModelError("tau must be an integer")
    tau = Fraction(int(tau))
    hi, lo = profile.limit(+1), profile.limit(-1)
    if tau in (hi, lo):
        raise ModelError("mode sits exactly on an asymptotic value of the profile")
    if profile.kind == "disc":
        regular = tau - profile.rho + Fraction(1, 2) > 0
        if chirality == 1:
            return int(regular and tau < hi)
        return int((not regular) and tau > hi)
    if chirality == 1:
        return int(lo < tau < hi)
    return int(hi < tau < lo)


@dataclass(frozen=True)
class SweepResult:
    spec: ModelSpec1D
    settings: tuple[Deformation, ...]
    results: tuple[IndexResult, ...]
    errors: tuple[str | None, ...]

    @property
    def all_equal(self) -> bool:
        vals = {r.index for r in self.results if r.resolved}
        return len(vals) <= 1

    def to_csv(self) -> str:
        return results_csv([replace(self.spec, deformation=s) for s in self.settings], self.results)


def deformation_sweep(spec: ModelSpec1D, family: Iterable[Deformation], refine: bool = True
                      ) -> SweepResult:
    """Index for every deformation in ``family`` (kind, weights and grid fixed)."""
    settings = tuple(parse_deformation(f) for f in family)
    results, errors = [], []
    for s in settings:
        try:
            results.append(compute_index(replace(spec, deformation=s), refine=refine))
            errors.append(None)
        except IndexUnresolved as exc:
            results.append(unresolved_result())
            errors.append(str(exc))
    return SweepResult(spec, settings, tuple(results), tuple(errors))


def results_csv(specs: Sequence[ModelSpec1D], results: Sequence[IndexResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "rho", "tau", "deformation", "index", "gap", "resolved"])
    for spec, r in zip(specs, results):
        w.writerow([spec.kind, spec.rho, spec.tau, spec.deformation.label(),
                    "" if r.index is None else r.index,
                    "" if r.spectral_gap is None else f"{r.spectral_gap:.6e}",
                    int(r.resolved and r.refinement_consistent)])
    return buf.getvalue()


@dataclass(frozen=True)
class AcyclicityProbe:
    kappa_estimate: float
    c_rho_estimate: float


def _region_intervals(region, lo: float, hi: float) -> list[tuple[float, float]]:
    if region is None:
        region = [(lo, hi)]
    elif len(region) == 2 and all(isinstance(v, (int, float)) for v in region):
        region = [tuple(region)]
    out = []
    for a, b in region:
        a, b = max(float(a), lo), min(float(b), hi)
        if a > b:
            raise ModelError(f"empty region interval ({a}, {b}) after clipping to the grid")
        out.append((a, b))
    return out


def probe_acyclicity(spec: ModelSpec1D, region=None, samples: int = 4001) -> AcyclicityProbe:
    """Estimate the lower bound of ``D_K^2`` and the anticommutator constant on ``region``.

    ``region`` is an interval ``(a, b)`` or a list of intervals in the model
    coordinate; infinite ends are clipped to the grid (the profile is constant
    beyond the transition, so nothing is lost).  ``D_K`` acts on the mode as
    multiplication by ``i (tau - mu)`` in the plus block, so
    ``D_K^2 = (tau - mu)^2``.
    """
    prof = spec.profile
    if spec.kind == "cylinder":
        lo, hi = -spec.R, spec.R
    else:
        lo, hi = disc_inner_radius(spec.R), spec.R
    kappa = math.inf
    for a, b in _region_intervals(region, lo, hi):
        x = np.linspace(a, b, samples)
        w = spec.tau - prof(x)
        if np.any(w == 0) or (np.min(w) < 0 < np.max(w)):
            kappa = 0.0
        else:
            kappa = min(kappa, float(np.min(w * w)))
    if kappa == 0.0:
        return AcyclicityProbe(0.0, math.inf)
    return AcyclicityProbe(kappa, _anticommutator_bound(spec, region, lo, hi))


def _anticommutator_bound(spec: ModelSpec1D, region, lo: float, hi: float) -> float:
    """Largest ``|<{D, D_K} s, s>| / <D_K^2 s, s>`` over sections supported in the region."""
    import scipy.sparse as sp
    from scipy.sparse.linalg import eigsh

    op = build_operator(spec)
    x = op.grid
    mask = np.zeros(x.shape[0], dtype=bool)
    for a, b in _region_intervals(region, lo, hi):
        mask |= (x >= a) & (x <= b)
    idx = np.flatnonzero(mask)
    # Undeformed plus block A0 = -i (d/dx - V) on the restricted grid, zero outside.
    v = 2.0 * math.pi * op.potential if spec.kind == "cylinder" else (
        2.0 * math.pi * op.potential + 0.5 * circumference_prime(x)) / circumference(x)
    n = x.shape[0]
    dmat = sp.diags([np.full(n - 1, -1.0), np.full(n - 1, 1.0)], [-1, 1]) / (2.0 * op.h)
    a0 = -1j * (dmat - sp.diags(v))
    wk = sp.diags(1j * op.potential)
    a0 = a0.tocsr()[idx][:, idx]
    wk = wk.tocsr()[idx][:, idx]
    z = None
    dfull = sp.bmat([[z, a0.conj().T], [a0, z]], format="csr")
    dk = sp.bmat([[z, wk.conj().T], [wk, z]], format="csr")
    anti = dfull @ dk + dk @ dfull
    w2 = np.concatenate([op.potential[idx] ** 2] * 2)
    scale = sp.diags(1.0 / np.sqrt(w2))
    m = scale @ anti @ scale
    m = 0.5 * (m + m.conj().T)
    if m.shape[0] <= 400:
        vals = np.linalg.eigvalsh(m.toarray())
    else:
        vals = eigsh(m, k=1, which="LM", return_eigenvectors=False, tol=1e-8)
    return float(np.max(np.abs(vals)))


def product_index(specs: Sequence[ModelSpec1D], multimode: Sequence[int], refine: bool = True
                  ) -> int:
    """Index on a product of model factors at the given multi-mode."""
    if len(specs) != len(multimode):
        raise ModelError(f"{len(specs)} factors but a multimode of length {len(multimode)}")
    total = 1
    for spec, tau in zip(specs, multimode):
        total *= compute_index(replace(spec, tau=int(tau)), refine=refine).index
    return total
