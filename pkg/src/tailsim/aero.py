"""Airfoil coefficient model and longitudinal aerodynamic forces.

Covers the full angle-of-attack circle for a symmetric airfoil.  Lift
and drag follow the classical quadratic law

    L = 1/2 * C_L * V^2 * rho * S
    D = 1/2 * C_D * V^2 * rho * S

with C_L, C_D interpolated from a 360-degree table.  The body-axis
specific force terms combine lift, drag and the pitch-rate coupling:

    f1 = (-D*cos(a) + L*sin(a)) / m - q*w      [along body x]
    f2 = (-D*sin(a) - L*cos(a)) / m + q*u      [along body z]

Forces are expressed per unit mass (m/s^2) so the translational
dynamics read udot = f1 + T/m - g*sin(theta), wdot = f2 + g*cos(theta).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# Default coefficient model: classical 360-degree flat-plate curves for a
# symmetric section, cl = sin(2a), cd = cd0 + 2*sin(a)^2, on a 1-degree grid.
FLAT_PLATE_CD0 = 0.02


class TableError(ValueError):
    """Raised when a coefficient table violates its invariants."""


@dataclass(frozen=True)
class AeroParams:
    """Physical constants of the airframe and atmosphere.

    Defaults describe a small ~1.2 kg tail-sitter; override via config.
    """

    mass: float = 1.2          # kg
    inertia_y: float = 0.05    # kg m^2, pitch axis
    wing_area: float = 0.24    # m^2
    air_density: float = 1.225  # kg/m^3
    gravity: float = 9.81      # m/s^2

    def __post_init__(self) -> None:
        for name in ("mass", "inertia_y", "wing_area", "air_density", "gravity"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")


@dataclass(frozen=True)
class ForcePair:
    """Specific force along body x (f1) and body z (f2), in m/s^2."""

    f1: float
    f2: float


class CoefficientTable:
    """Periodic lift/drag coefficient curve over alpha in [-pi, pi].

    Evaluation wraps at +-pi, so the table behaves as a 2*pi-periodic
    function.  A valid table describes a symmetric airfoil:
    cl is odd, cd is even and non-negative, cl(0) = cl(pi) = 0.
    """

    def __init__(self, alpha_grid, cl_values, cd_values, symmetry_tol: float = 1e-12):
        alpha = np.asarray(alpha_grid, dtype=float)
        cl = np.asarray(cl_values, dtype=float)
        cd = np.asarray(cd_values, dtype=float)
        if alpha.ndim != 1 or alpha.shape != cl.shape or alpha.shape != cd.shape:
            raise TableError("alpha, cl, cd must be 1-D arrays of equal length")
        if alpha.size < 3:
            raise TableError("table needs at least 3 grid points")
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(cl)) and np.all(np.isfinite(cd))):
            raise TableError("table contains non-finite values")
        if np.any(np.diff(alpha) <= 0.0):
            raise TableError("alpha grid must be strictly increasing")
        if alpha[0] > -math.pi + 1e-9 or alpha[-1] < math.pi - 1e-9:
            raise TableError("alpha grid must span [-pi, pi]")

        self.alpha_grid = alpha
        self.cl_values = cl
        self.cd_values = cd
        # Plain lists are faster than ndarray indexing in the scalar hot path.
        self._alpha = alpha.tolist()
        self._cl = cl.tolist()
        self._cd = cd.tolist()
        self._n = len(self._alpha)
        self._validate(symmetry_tol)

    def _validate(self, tol: float) -> None:
        if np.any(self.cd_values < -tol):
            raise TableError("cd must be non-negative everywhere")
        cl0, _ = self.evaluate(0.0)
        cl_pi, _ = self.evaluate(math.pi)
        if abs(cl0) > tol or abs(cl_pi) > tol:
            raise TableError(f"cl(0) and cl(pi) must vanish (got {cl0}, {cl_pi})")
        # Endpoint consistency, so the wrap at +-pi is continuous.
        if abs(self._cl[0] - self._cl[-1]) > tol or abs(self._cd[0] - self._cd[-1]) > tol:
            raise TableError("table endpoints disagree; curve is not 2*pi-periodic")
        for a, cl_a, cd_a in zip(self._alpha, self._cl, self._cd):
            cl_m, cd_m = self.evaluate(-a)
            if abs(cl_m + cl_a) > tol:
                raise TableError(f"cl not odd at alpha={a}: cl(-a)={cl_m}, cl(a)={cl_a}")
            if abs(cd_m - cd_a) > tol:
                raise TableError(f"cd not even at alpha={a}: cd(-a)={cd_m}, cd(a)={cd_a}")

    def evaluate(self, alpha: float) -> tuple[float, float]:
        """Interpolated (cl, cd) at any angle; wraps modulo 2*pi."""
        if not math.isfinite(alpha):
            raise ValueError(f"alpha must be finite, got {alpha!r}")
        a = math.remainder(alpha, TWO_PI)
        if a <= -math.pi:
            a += TWO_PI
        grid = self._alpha
        if a <= grid[0]:
            return self._cl[0], self._cd[0]
        if a >= grid[-1]:
            return self._cl[-1], self._cd[-1]
        hi = bisect_right(grid, a)
        lo = hi - 1
        x_lo = grid[lo]
        t = (a - x_lo) / (grid[hi] - x_lo)
        cl_lo = self._cl[lo]
        cd_lo = self._cd[lo]
        return cl_lo + t * (self._cl[hi] - cl_lo), cd_lo + t * (self._cd[hi] - cd_lo)


def flat_plate_table(cd0: float = FLAT_PLATE_CD0, step_deg: int = 1) -> CoefficientTable:
    """Default symmetric-airfoil table sampled on an integer-degree grid.

    Integer degrees keep the grid bitwise antisymmetric, so the odd/even
    coefficient symmetry holds to machine precision.
    """
    degrees = np.arange(-180, 181, step_deg, dtype=float)
    alpha = np.deg2rad(degrees)
    cl = np.sin(2.0 * alpha)
    cd = cd0 + 2.0 * np.sin(alpha) ** 2
    return CoefficientTable(alpha, cl, cd)


def angle_of_attack(u: float, w: float) -> float:
    """Angle of attack from body velocities, in (-pi, pi].

    Defined as atan2(w, u); zero by convention at zero airspeed so the
    force model stays continuous (L = D = 0 there anyway).
    """
    if u == 0.0 and w == 0.0:
        return 0.0
    a = math.atan2(w, u)
    if a <= -math.pi:
        a = math.pi
    return a


def airspeed(u: float, w: float) -> float:
    """Airspeed magnitude sqrt(u^2 + w^2)."""
    return math.hypot(u, w)


def coefficients(table: CoefficientTable, alpha: float) -> tuple[float, float]:
    """(cl, cd) from the table at angle of attack ``alpha`` (radians)."""
    return table.evaluate(alpha)


def lift_drag(
    v: float, alpha: float, params: AeroParams, table: CoefficientTable
) -> tuple[float, float]:
    """Lift and drag in newtons at airspeed ``v`` and angle of attack ``alpha``."""
    if v < 0.0:
        raise ValueError(f"airspeed must be non-negative, got {v!r}")
    cl, cd = table.evaluate(alpha)
    pressure_area = 0.5 * v * v * params.air_density * params.wing_area
    return cl * pressure_area, cd * pressure_area


def specific_body_forces(
    u: float, w: float, q: float, params: AeroParams, table: CoefficientTable
) -> ForcePair:
    """Specific force terms f1, f2 (m/s^2) at body velocities (u, w) and pitch rate q."""
    alpha = angle_of_attack(u, w)
    v = airspeed(u, w)
    lift, drag = lift_drag(v, alpha, params, table)
    cos_a = math.cos(alpha)
    sin_a = math.sin(alpha)
    m = params.mass
    f1 = (-drag * cos_a + lift * sin_a) / m - q * w
    f2 = (-drag * sin_a - lift * cos_a) / m + q * u
    return ForcePair(f1, f2)


def save_table_csv(table: CoefficientTable, path) -> None:
    """Write a table as ``alpha_deg,cl,cd`` rows sorted ascending in alpha."""
    degrees = np.rad2deg(table.alpha_grid)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("alpha_deg,cl,cd\n")
        for d, cl, cd in zip(degrees, table.cl_values, table.cd_values):
            fh.write(f"{d!r},{cl!r},{cd!r}\n")


def load_table_csv(path, symmetry_tol: float = 1e-12) -> CoefficientTable:
    """Load a coefficient table from CSV (header ``alpha_deg,cl,cd``).

    Rows must be sorted ascending in alpha_deg and cover [-180, 180].
    ``symmetry_tol`` loosens the symmetry validation for measured data.
    """
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != "alpha_deg,cl,cd":
            raise TableError(f"bad table header: {header!r}")
        deg, cl, cd = [], [], []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise TableError(f"bad table row: {line!r}")
            deg.append(float(parts[0]))
            cl.append(float(parts[1]))
            cd.append(float(parts[2]))
    alpha = np.deg2rad(np.asarray(deg, dtype=float))
    return CoefficientTable(alpha, cl, cd, symmetry_tol=symmetry_tol)
