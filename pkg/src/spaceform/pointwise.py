"""Pointwise model of an almost contact metric structure on R^(2n+1).

A structure is a tuple (phi, xi, eta, g) satisfying, for all vectors X, Y:

    phi^2 X = -X + eta(X) xi        phi xi = 0
    eta(xi) = 1                     eta(X) = g(X, xi)        eta(phi X) = 0
    g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)
    g(phi X, Y) = -g(X, phi Y)

The curvature of a space form built on such a structure is a pointwise
trilinear map determined by three scalar coefficients (f1, f2, f3).  Four
modified connections are supported next to the Levi-Civita baseline; each
has its own closed-form curvature, evaluated here term by term.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class ConnectionKind(enum.Enum):
    """Connections whose curvature the model evaluates."""

    LEVI_CIVITA = "LeviCivita"
    SEMI_SYM_METRIC = "SemiSymMetric"
    SEMI_SYM_NON_METRIC = "SemiSymNonMetric"
    SCHOUTEN_VAN_KAMPEN = "SchoutenVanKampen"
    TANAKA_WEBSTER = "TanakaWebster"

    @classmethod
    def parse(cls, name: str) -> "ConnectionKind":
        """Accept either the enum value or a lowercase/underscore alias."""
        for kind in cls:
            if name == kind.value or name == kind.name.lower():
                return kind
        raise ValueError(f"unknown connection kind: {name!r}")


MODIFIED_KINDS = (
    ConnectionKind.SEMI_SYM_METRIC,
    ConnectionKind.SEMI_SYM_NON_METRIC,
    ConnectionKind.SCHOUTEN_VAN_KAMPEN,
    ConnectionKind.TANAKA_WEBSTER,
)


@dataclass(frozen=True)
class FormCoefficients:
    """Scalar coefficients (f1, f2, f3) of a space-form curvature."""

    f1: float
    f2: float
    f3: float

    @property
    def lam(self) -> float:
        # f1 - f3 weights every structure derivative, so it gets a name
        return self.f1 - self.f3

    def magnitude(self) -> float:
        """Scale of the largest coefficient any curvature formula can see."""
        lam = abs(self.lam)
        return max(1.0, abs(self.f1), abs(self.f2), abs(self.f3), lam, lam * lam)

    def astuple(self) -> tuple[float, float, float]:
        return (self.f1, self.f2, self.f3)


def sasakian_coeffs(c: float) -> FormCoefficients:
    """Coefficients of the Sasakian space form with phi-sectional curvature c."""
    return FormCoefficients((c + 3.0) / 4.0, (c - 1.0) / 4.0, (c - 1.0) / 4.0)


@dataclass(frozen=True, eq=False)
class AmbientSpace:
    """Almost contact metric structure on R^d, d = 2n + 1.

    g is the metric matrix, phi the structure endomorphism, xi the Reeb
    vector and eta its metric dual (eta = g xi).  All arrays are read-only.
    """

    n: int
    g: np.ndarray
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray

    @property
    def d(self) -> int:
        return 2 * self.n + 1

    def inner(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(a @ self.g @ b)

    def eta_of(self, v: np.ndarray) -> float:
        return float(self.eta @ v)

    def phi_of(self, v: np.ndarray) -> np.ndarray:
        return self.phi @ v


def _freeze(space: AmbientSpace) -> AmbientSpace:
    for arr in (space.g, space.phi, space.xi, space.eta):
        arr.setflags(write=False)
    return space


def standard_structure(n: int) -> AmbientSpace:
    """Canonical structure: g = I, xi = e_d, phi rotates each plane (e_2i-1, e_2i)."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    d = 2 * n + 1
    g = np.eye(d)
    xi = np.zeros(d)
    xi[d - 1] = 1.0
    phi = np.zeros((d, d))
    for i in range(n):
        phi[2 * i + 1, 2 * i] = 1.0
        phi[2 * i, 2 * i + 1] = -1.0
    return _freeze(AmbientSpace(n=n, g=g, phi=phi, xi=xi, eta=g @ xi))


def frame_structure(n: int, seed: int) -> AmbientSpace:
    """Standard structure conjugated by a seeded random orthogonal frame."""
    base = standard_structure(n)
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((base.d, base.d))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))  # fix the gauge so the frame is seed-deterministic
    phi = q @ base.phi @ q.T
    xi = q @ base.xi
    return _freeze(AmbientSpace(n=n, g=base.g.copy(), phi=phi, xi=xi, eta=base.g @ xi))


@dataclass(frozen=True)
class StructureValidation:
    """Max residual of each defining identity over all basis pairs."""

    reduction: float       # phi^2 = -I + xi (x) eta, and phi xi = 0
    normalization: float   # eta(xi) = 1, eta = g xi, eta(phi .) = 0
    compatibility: float   # g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)
    skewness: float        # g(phi X, Y) = -g(X, phi Y)
    tol: float = 1e-12

    @property
    def max_residual(self) -> float:
        return max(self.reduction, self.normalization,
                   self.compatibility, self.skewness)

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tol

    def passed(self, tol: float | None = None) -> bool:
        return self.max_residual <= (self.tol if tol is None else tol)


def validate_structure(space: AmbientSpace, tol: float = 1e-12) -> StructureValidation:
    """Measure each structure identity on the coordinate basis."""
    g, phi, xi, eta = space.g, space.phi, space.xi, space.eta
    d = space.d
    reduction = max(
        float(np.max(np.abs(phi @ phi + np.eye(d) - np.outer(xi, eta)))),
        float(np.max(np.abs(phi @ xi))),
    )
    normalization = max(
        abs(float(eta @ xi) - 1.0),
        float(np.max(np.abs(eta - g @ xi))),
        float(np.max(np.abs(phi.T @ eta))),
    )
    compatibility = float(np.max(np.abs(phi.T @ g @ phi - g + np.outer(eta, eta))))
    skewness = float(np.max(np.abs(phi.T @ g + g @ phi)))
    return StructureValidation(reduction=reduction, normalization=normalization,
                               compatibility=compatibility, skewness=skewness,
                               tol=tol)


# ---------------------------------------------------------------------------
# curvature formulas
# ---------------------------------------------------------------------------

def curvature(space: AmbientSpace, coeffs: FormCoefficients, kind: ConnectionKind,
              X: np.ndarray, Y: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Evaluate R(X, Y)Z for the given connection kind.

    Each branch transcribes the corresponding closed-form curvature
    term by term; nothing is shared with the symbolic layer, so the two
    act as independent transcriptions of the same formulas.
    """
    g, phi, xi, eta = space.g, space.phi, space.xi, space.eta
    f1, f2, f3 = coeffs.f1, coeffs.f2, coeffs.f3
    lam = f1 - f3

    phiX, phiY, phiZ = phi @ X, phi @ Y, phi @ Z
    gYZ = float(Y @ g @ Z)
    gXZ = float(X @ g @ Z)
    gXpZ = float(X @ g @ phiZ)
    gYpZ = float(Y @ g @ phiZ)
    gXpY = float(X @ g @ phiY)
    eX, eY, eZ = float(eta @ X), float(eta @ Y), float(eta @ Z)

    metric_bracket = gYZ * X - gXZ * Y
    phi_bracket = gXpZ * phiY - gYpZ * phiX + 2.0 * gXpY * phiZ
    eta_bracket = (eX * eZ * Y - eY * eZ * X
                   + gXZ * eY * xi - gYZ * eX * xi)

    if kind is ConnectionKind.LEVI_CIVITA:
        return f1 * metric_bracket + f2 * phi_bracket + f3 * eta_bracket

    if kind is ConnectionKind.SEMI_SYM_METRIC:
        mixed = (gXpZ * Y - gYpZ * X + gYZ * phiX - gXZ * phiY)
        return ((f1 - 1.0) * metric_bracket + f2 * phi_bracket
                + (f3 - 1.0) * eta_bracket + lam * mixed)

    if kind is ConnectionKind.SEMI_SYM_NON_METRIC:
        mixed = gXpZ * Y - gYpZ * X
        reeb = eY * eZ * X - eX * eZ * Y
        return (f1 * metric_bracket + f2 * phi_bracket + f3 * eta_bracket
                + lam * mixed + reeb)

    if kind is ConnectionKind.SCHOUTEN_VAN_KAMPEN:
        twist = gXpZ * phiY - gYpZ * phiX
        return (f1 * metric_bracket + f2 * phi_bracket
                + (f3 + lam * lam) * eta_bracket + lam * lam * twist)

    if kind is ConnectionKind.TANAKA_WEBSTER:
        twist = gXpZ * phiY - gYpZ * phiX
        return (f1 * metric_bracket + f2 * phi_bracket
                + (f3 + lam * lam) * eta_bracket + lam * lam * twist
                + 2.0 * lam * gXpY * phiZ)

    raise ValueError(f"unknown connection kind: {kind!r}")


def nabla_phi_rhs(space: AmbientSpace, coeffs: FormCoefficients,
                  X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """(nabla_X phi)(Y) = (f1 - f3) [g(X, Y) xi - eta(Y) X]."""
    return coeffs.lam * (space.inner(X, Y) * space.xi - space.eta_of(Y) * X)


def nabla_xi_rhs(space: AmbientSpace, coeffs: FormCoefficients,
                 X: np.ndarray) -> np.ndarray:
    """nabla_X xi = -(f1 - f3) phi X."""
    return -coeffs.lam * (space.phi @ X)
