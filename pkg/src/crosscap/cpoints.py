"""Detection, classification and index computation for complex points.

A point of a parameterized surface nu -> (xi(nu, nubar), eta(nu, nubar)) is
complex exactly when

    W(nu) = d_eta dbar_xi - dbar_eta d_xi = 0,

and on a graph section eta = F(xi, xibar) the condition collapses to
dbar F = 0.  The integer index of an isolated complex point is the winding
of dbar F around a small loop; an index of +1 is called elliptic, -1
hyperbolic.  The umbilic index of the orthogonal surface in 3-space is half
the complex index.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateQuadratic,
    DegenerateZeroCurve,
    OnSeam,
    UnresolvedWinding,
    VanishingOnLoop,
)
from .wirtinger import Loop, MonomialField, d_xi, d_xibar, winding_of

SEAM_EPS = 1e-12
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
MAX_SHRINKS = 8


@dataclass(frozen=True)
class ParamPiece:
    """One annular piece rho_in <= |nu| <= rho_out with polynomial chart data."""

    rho_in: float
    rho_out: float
    xi_expr: MonomialField
    eta_expr: MonomialField

    def defect_field(self):
        """W = d_eta dbar_xi - dbar_eta d_xi as an exact polynomial field."""
        return (
            self.eta_expr.d_xi() * self.xi_expr.d_xibar()
            - self.eta_expr.d_xibar() * self.xi_expr.d_xi()
        )


class ParamSurface:
    """An ordered stack of contiguous annular pieces sharing seam radii."""

    def __init__(self, pieces):
        pieces = list(pieces)
        if not pieces:
            raise ValueError("a surface needs at least one piece")
        radii = []
        for p in pieces:
            if not p.rho_in < p.rho_out:
                raise ValueError("piece radii must be strictly increasing")
            radii.extend((p.rho_in, p.rho_out))
        for a, b in zip(pieces, pieces[1:]):
            if a.rho_out != b.rho_in:
                raise ValueError("pieces must be contiguous and non-overlapping")
        if sorted(radii) != radii:
            raise ValueError("piece radii must be globally increasing")
        self.pieces = pieces

    @property
    def rho_min(self):
        return self.pieces[0].rho_in

    @property
    def rho_max(self):
        return self.pieces[-1].rho_out

    def seam_radii(self):
        """Interior radii shared by consecutive pieces."""
        return [p.rho_out for p in self.pieces[:-1]]

    def piece_index(self, radius):
        for i, p in enumerate(self.pieces):
            if p.rho_in <= radius <= p.rho_out:
                return i
        raise ValueError(f"radius {radius:g} is outside the surface annuli")


def surface_defect(S, nu):
    """Evaluate W at a point strictly inside one piece.

    Points within ``SEAM_EPS`` of a seam radius are ambiguous between two
    polynomial expressions and raise ``OnSeam``.
    """
    radius = abs(nu)
    for seam in S.seam_radii():
        if abs(radius - seam) <= SEAM_EPS:
            raise OnSeam(f"|nu| = {radius:g} sits on the seam at {seam:g}")
    piece = S.pieces[S.piece_index(radius)]
    return piece.defect_field().eval(nu)


@dataclass(frozen=True)
class ComplexPointReport:
    """An isolated complex point: location, classification, index and the
    loop radius that certified the index."""

    location: complex
    kind: str
    index: int
    loop_radius: float

    def __post_init__(self):
        expected = {1: "elliptic", -1: "hyperbolic"}.get(self.index, "degenerate")
        if self.kind != expected:
            raise ValueError(f"kind {self.kind!r} inconsistent with index {self.index}")

    @property
    def umbilic_index(self):
        return Fraction(self.index, 2)


def classify_index(index):
    return {1: "elliptic", -1: "hyperbolic"}.get(index, "degenerate")


def section_complex_index(F, xi0, loop_radius, min_mag=1e-9):
    """Integer winding of dbar F around a loop centered at ``xi0``.

    The loop shrinks by halves (up to 8 times) when dbar F vanishes on it;
    the umbilic index of the orthogonal surfaces is half the returned value.
    """
    index, _ = _index_with_radius(F, xi0, loop_radius, min_mag)
    return index


def _index_with_radius(F, xi0, loop_radius, min_mag=1e-9):
    W = d_xibar(F.F)
    radius = float(loop_radius)
    last = None
    for _ in range(MAX_SHRINKS + 1):
        loop = Loop(xi0, radius)
        try:
            return winding_of(lambda pts: W.eval(pts), loop, min_mag=min_mag), radius
        except VanishingOnLoop as exc:
            last = exc
            radius *= 0.5
    raise VanishingOnLoop(
        f"dbar F still vanishes on loops around {xi0} after {MAX_SHRINKS} shrinks"
    ) from last


def _newton_refine(W, Wxi, Wxibar, z0):
    """Drive |W| below NEWTON_TOL with the exact 2x2 real Jacobian."""
    z = complex(z0)
    for _ in range(NEWTON_MAX_ITER):
        w = W.eval(z)
        if abs(w) < NEWTON_TOL:
            return z, True
        dz = Wxi.eval(z)
        dzb = Wxibar.eval(z)
        dx = dz + dzb            # dW/dx1
        dy = 1j * (dz - dzb)     # dW/dx2
        J = np.array([[dx.real, dy.real], [dx.imag, dy.imag]])
        try:
            step = np.linalg.solve(J, np.array([w.real, w.imag]))
        except np.linalg.LinAlgError:
            return z, abs(w) < NEWTON_TOL
        z = complex(z.real - step[0], z.imag - step[1])
    return z, abs(W.eval(z)) < NEWTON_TOL


def _sign_change_cells(values):
    sgn = np.sign(values)
    cmax = np.maximum.reduce([sgn[:-1, :-1], sgn[:-1, 1:], sgn[1:, :-1], sgn[1:, 1:]])
    cmin = np.minimum.reduce([sgn[:-1, :-1], sgn[:-1, 1:], sgn[1:, :-1], sgn[1:, 1:]])
    return (cmax >= 0) & (cmin <= 0)


def find_complex_points(F, center=0j, radius=1.0, grid_n=64):
    """Locate and classify the zeros of dbar F inside a disc.

    Grid sign structure of (Re, Im) proposes candidate cells; Newton
    refinement with the exact Jacobian polishes each zero, and the index
    comes from a winding loop of half the distance to the nearest other
    zero.  Raises ``DegenerateZeroCurve`` when the zeros are not isolated
    (a vanishing field, or winding loops that cannot avoid zeros).
    """
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    W = d_xibar(F.F)
    if not W.num:
        raise DegenerateZeroCurve("dbar F vanishes identically on the disc")
    Wxi, Wxibar = d_xi(W), d_xibar(W)

    ax = np.linspace(-radius, radius, grid_n)
    zz = center + ax[None, :] + 1j * ax[:, None]
    vals = W.eval(zz)
    cells = _sign_change_cells(vals.real) & _sign_change_cells(vals.imag)
    step = ax[1] - ax[0]

    roots = []
    for i, j in np.argwhere(cells):
        seed = zz[i, j] + 0.5 * step * (1 + 1j)
        z, ok = _newton_refine(W, Wxi, Wxibar, seed)
        if not ok or abs(z - center) > radius + step:
            continue
        if all(abs(z - r) > 1e-8 for r in roots):
            roots.append(z)
    roots.sort(key=lambda z: (abs(z - center), z.real, z.imag))

    reports = []
    for z in roots:
        others = [abs(z - r) for r in roots if r != z]
        gap = min(others) if others else float("inf")
        to_boundary = max(radius - abs(z - center), step)
        loop_radius = max(0.5 * min(gap, to_boundary), 0.25 * step)
        try:
            index, used = _index_with_radius(F, z, loop_radius)
        except (VanishingOnLoop, UnresolvedWinding) as exc:
            raise DegenerateZeroCurve(
                f"zero at {z} is not isolated: every winding loop meets more zeros"
            ) from exc
        reports.append(
            ComplexPointReport(
                location=z, kind=classify_index(index), index=index, loop_radius=used
            )
        )
    return reports


def quadratic_model_index(alpha, beta, rel_tol=1e-12):
    """Index of the quadratic model eta = alpha xibar^2 + beta xi xibar at 0.

    dbar of the model on the unit loop is 2 alpha xibar + beta xi, whose
    winding is -1 when 2|alpha| > |beta| (hyperbolic) and +1 when
    2|alpha| < |beta| (elliptic).  The winding computation is the ground
    truth; the modulus comparison only guards the degenerate boundary.
    """
    a, b = complex(alpha), complex(beta)
    scale = 2.0 * abs(a) + abs(b)
    if scale == 0 or abs(2.0 * abs(a) - abs(b)) <= rel_tol * scale:
        raise DegenerateQuadratic("2|alpha| = |beta|: the model winding is undefined")
    loop = Loop(0j, 1.0)
    return winding_of(lambda pts: 2.0 * a * np.conj(pts) + b * pts, loop)


def quadratic_model_report(alpha, beta):
    """Index plus flags comparing the winding rule with the stricter
    modulus condition |alpha| > 2|beta| sometimes quoted for hyperbolicity."""
    index = quadratic_model_index(alpha, beta)
    a, b = abs(complex(alpha)), abs(complex(beta))
    return {
        "index": index,
        "kind": classify_index(index),
        "strict_modulus_hyperbolic": a > 2.0 * b,
        "gap_zone": (index == -1) and not (a > 2.0 * b),
    }
