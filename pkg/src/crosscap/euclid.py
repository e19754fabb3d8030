"""Reconstruction of surfaces in Euclidean 3-space from line-space data.

The correspondence between a line (xi, eta), a signed distance r along it,
and the Euclidean point it passes through is

    x1 + i x2 = [ 2 (eta - etabar xi^2) + 2 xi (1 + xi xibar) r ] / (1 + xi xibar)^2
    x3        = [ -2 (eta xibar + etabar xi) + (1 - xi^2 xibar^2) r ] / (1 + xi xibar)^2.

The r-coefficient of this map is exactly the direction vector U(xi), so for
a support pair (F, r) the mesh x(xi) = point(xi, F(xi), r(xi) + C) satisfies
x . U = r + C and is orthogonal to its lines, and changing C translates every
vertex by (Delta C) U(xi) (parallel surfaces).

Umbilic analysis computes the first and second fundamental forms exactly
(rational fields in xi and xibar, with the sphere direction U as the unit
normal), takes the traceless part of the shape operator in an orthonormal
tangent frame, and winds its complex component around each isolated zero to
obtain the half-integer index of the principal foliation.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import EmptyMesh, NotImmersed
from .linespace import line_to_vectors, vectors_to_line
from .wirtinger import Loop, MonomialField, RationalField, winding_of

# Calibrated once on the cubic support example (umbilic of index -1/2):
# the winding of the traceless component equals twice the foliation index.
UMBILIC_WINDING_SIGN = 1


def point_from_line(xi, eta, r_value):
    """Euclidean point at signed distance ``r_value`` along the line (xi, eta).

    Broadcasts over ndarray inputs; the result has one trailing axis of
    length 3.
    """
    z = np.asarray(xi, dtype=complex)
    e = np.asarray(eta, dtype=complex)
    r = np.asarray(r_value, dtype=float)
    s = (z * np.conj(z)).real
    den = (1.0 + s) ** 2
    w = (2.0 * (e - np.conj(e) * z * z) + 2.0 * z * (1.0 + s) * r) / den
    x3 = (-2.0 * (e * np.conj(z) + np.conj(e) * z) + (1.0 - s * s) * r) / den
    return np.stack([w.real, w.imag, x3.real], axis=-1)


@dataclass(frozen=True)
class SurfacePoint:
    """A mesh vertex: Euclidean position and its Gauss-map parameter."""

    x: np.ndarray
    xi: complex


class MeshR3:
    """Structured grid of surface points over a (radius, angle) style lattice.

    ``points`` has shape (rows, cols, 3); ``xis`` carries the Gauss-map
    parameter per vertex; ``u_values`` / ``v_values`` are the lattice
    parameters along rows and columns.  Optional per-vertex scalar channels
    ride along in ``scalars``.
    """

    def __init__(self, points, xis, u_values, v_values, scalars=None):
        points = np.asarray(points, dtype=float)
        if points.size == 0:
            raise EmptyMesh("mesh grid is empty")
        if points.ndim != 3 or points.shape[2] != 3:
            raise ValueError("points must have shape (rows, cols, 3)")
        rows, cols = points.shape[:2]
        if rows < 2 or cols < 3:
            raise EmptyMesh(f"mesh grid {rows}x{cols} is below the 2x3 minimum")
        for axis in (0, 1):
            d = np.diff(points, axis=axis)
            if np.min(np.linalg.norm(d, axis=-1)) == 0.0:
                raise ValueError("mesh has duplicate consecutive vertices")
        self.points = points
        self.xis = np.asarray(xis, dtype=complex)
        self.u_values = np.asarray(u_values, dtype=float)
        self.v_values = np.asarray(v_values, dtype=float)
        self.scalars = dict(scalars or {})

    @property
    def shape(self):
        return self.points.shape[:2]

    def point(self, i, j):
        return SurfacePoint(x=self.points[i, j], xi=complex(self.xis[i, j]))


def reconstruct_surface(F, r, C, disc_radius=0.9, grid=(24, 48), attach_defect=False):
    """Mesh of the surface with support r + C over a polar lattice in xi.

    ``grid = (n_radii, n_angles)``; radii start at disc_radius / n_radii to
    keep the innermost ring nondegenerate.  With ``attach_defect`` the
    umbilic defect (norm of the traceless shape operator) rides along as the
    per-vertex scalar channel ``"umbilic_defect"``.
    """
    n_rad, n_ang = grid
    radii = np.linspace(disc_radius / n_rad, disc_radius, n_rad)
    angles = np.linspace(0.0, 2.0 * np.pi, n_ang)
    zz = radii[:, None] * np.exp(1j * angles[None, :])
    eta = F.F.eval(zz)
    rv = np.real(r.r.eval(zz)) + C
    pts = point_from_line(zz, eta, rv)
    scalars = None
    if attach_defect:
        _, _, defect, _ = _ShapeOperatorField(F, r, C).evaluate(zz)
        scalars = {"umbilic_defect": defect}
    return MeshR3(points=pts, xis=zz, u_values=radii, v_values=angles, scalars=scalars)


@dataclass(frozen=True)
class SupportCheck:
    max_support_residual: float
    max_orthogonality_residual: float


def support_property_check(mesh, F, r, C, h=1e-3):
    """Verify x . U = r + C on the mesh and tangency of the lines.

    The support residual is evaluated exactly at the vertices; the
    orthogonality residual differentiates the reconstruction map by
    fourth-order central differences in the two chart directions and dots
    the tangents with U.
    """
    zz = mesh.xis
    U = _direction_array(zz)
    rv = np.real(r.r.eval(zz)) + C
    support_res = np.abs(np.sum(mesh.points * U, axis=-1) - rv)

    def surface(z):
        return point_from_line(z, F.F.eval(z), np.real(r.r.eval(z)) + C)

    worst = 0.0
    for direction in (1.0, 1j):
        d = (
            -surface(zz + 2 * h * direction)
            + 8.0 * surface(zz + h * direction)
            - 8.0 * surface(zz - h * direction)
            + surface(zz - 2 * h * direction)
        ) / (12.0 * h)
        worst = max(worst, float(np.max(np.abs(np.sum(d * U, axis=-1)))))
    return SupportCheck(
        max_support_residual=float(np.max(support_res)),
        max_orthogonality_residual=worst,
    )


def _direction_array(zz):
    s = (zz * np.conj(zz)).real
    return np.stack(
        [2.0 * zz.real, 2.0 * zz.imag, 1.0 - s], axis=-1
    ) / (1.0 + s)[..., None]


# ---------------------------------------------------------------------------
# principal curvature analysis
# ---------------------------------------------------------------------------


def _coordinate_fields(F, r, C):
    """The three Euclidean coordinates of the reconstruction as rational fields."""
    one_plus_s = MonomialField({(0, 0): 1.0, (1, 1): 1.0})
    xi = MonomialField.xi()
    xibar = MonomialField.xibar()
    s = MonomialField({(1, 1): 1.0})
    p = F.den_power
    N = F.num
    Nb = N.conj()
    R = r.r + MonomialField.constant(C)
    den = p + 2
    num12 = 2.0 * (N - Nb * xi * xi) + 2.0 * xi * one_plus_s ** (p + 1) * R
    num3 = -2.0 * (N * xibar + Nb * xi) + (MonomialField.constant(1.0) - s) * one_plus_s ** (
        p + 1
    ) * R
    x1 = RationalField(0.5 * (num12 + num12.conj()), den)
    x2 = RationalField(-0.5j * (num12 - num12.conj()), den)
    x3 = RationalField(0.5 * (num3 + num3.conj()), den)
    return x1, x2, x3


def _chart_derivs(f):
    """Real-coordinate derivatives (d/dx1, d/dx2) of a rational field."""
    fx = f.d_xi()
    fy = f.d_xibar()
    return fx + fy, 1j * (fx - fy)


def _unit_normal_fields():
    xi = MonomialField.xi()
    xibar = MonomialField.xibar()
    one = MonomialField.constant(1.0)
    s = MonomialField({(1, 1): 1.0})
    U1 = RationalField(xi + xibar, 1)
    U2 = RationalField(-1j * (xi - xibar), 1)
    U3 = RationalField(one - s, 1)
    return U1, U2, U3


@dataclass(frozen=True)
class UmbilicReport:
    location: complex
    winding: int
    index: Fraction
    defect: float
    loop_radius: float


@dataclass(frozen=True)
class PrincipalReport:
    umbilics: tuple
    totally_umbilic: bool
    max_defect: float
    min_det_I: float


class _ShapeOperatorField:
    """Pointwise traceless shape-operator data for a support pair."""

    def __init__(self, F, r, C):
        coords = _coordinate_fields(F.F, r, C)
        normals = _unit_normal_fields()
        self._tangent = [_chart_derivs(c) for c in coords]
        self._normal_deriv = [_chart_derivs(u) for u in normals]

    def evaluate(self, zz):
        """Return (p, q, defect, det_I) arrays at the points ``zz``."""
        zz = np.asarray(zz, dtype=complex)
        t = np.empty((3, 2) + zz.shape, dtype=float)
        nd = np.empty((3, 2) + zz.shape, dtype=float)
        for c in range(3):
            for k in range(2):
                t[c, k] = np.real(self._tangent[c][k].eval(zz))
                nd[c, k] = np.real(self._normal_deriv[c][k].eval(zz))
        I11 = np.sum(t[:, 0] * t[:, 0], axis=0)
        I12 = np.sum(t[:, 0] * t[:, 1], axis=0)
        I22 = np.sum(t[:, 1] * t[:, 1], axis=0)
        II = np.empty((2, 2) + zz.shape, dtype=float)
        for i in range(2):
            for j in range(2):
                II[i, j] = -np.sum(t[:, i] * nd[:, j], axis=0)
        II12 = 0.5 * (II[0, 1] + II[1, 0])
        det_I = I11 * I22 - I12 * I12
        bad = (I11 <= 1e-12) | (det_I <= 1e-12)
        if np.any(bad):
            raise NotImmersed("first fundamental form degenerates on the grid")
        l11 = np.sqrt(I11)
        l21 = I12 / l11
        l22 = np.sqrt(I22 - l21 * l21)
        B11 = II[0, 0] / l11
        B12 = II12 / l11
        B21 = (II12 - l21 * B11) / l22
        B22 = (II[1, 1] - l21 * B12) / l22
        S11 = B11 / l11
        S12 = -B11 * l21 / (l11 * l22) + B12 / l22
        S21 = B21 / l11
        S22 = -B21 * l21 / (l11 * l22) + B22 / l22
        p = 0.5 * (S11 - S22)
        q = 0.5 * (S12 + S21)
        return p, q, np.hypot(p, q), det_I


def principal_analysis(
    F,
    r,
    C,
    disc_radius=0.6,
    grid_n=41,
    defect_tol=1e-8,
    flat_tol=1e-10,
):
    """Locate isolated umbilics of the reconstructed surface and their indices.

    Works on the traceless part of the shape operator expressed in an
    orthonormal tangent frame: umbilics are its zeros, located by a grid
    scan plus Newton refinement, and the half-integer index is the
    calibrated winding of its complex component p + i q halved.
    """
    shape = _ShapeOperatorField(F, r, C)
    ax = np.linspace(-disc_radius, disc_radius, grid_n)
    zz = ax[None, :] + 1j * ax[:, None]
    mask = np.abs(zz) <= disc_radius
    p, q, defect, det_I = shape.evaluate(zz)
    scale = float(np.median(np.hypot(p, q) + defect) + np.max(defect))
    max_defect = float(np.max(defect[mask]))

    if max_defect <= flat_tol * max(1.0, scale):
        return PrincipalReport(
            umbilics=(),
            totally_umbilic=True,
            max_defect=max_defect,
            min_det_I=float(np.min(det_I[mask])),
        )

    step = ax[1] - ax[0]
    candidates = []
    interior = defect.copy()
    interior[~mask] = np.inf
    for i in range(1, grid_n - 1):
        for j in range(1, grid_n - 1):
            v = interior[i, j]
            if not np.isfinite(v) or v > 0.25 * max_defect:
                continue
            patch = interior[i - 1 : i + 2, j - 1 : j + 2]
            if v <= patch.min():
                candidates.append(zz[i, j])

    roots = []
    for seed in candidates:
        z = _refine_umbilic(shape, seed)
        if z is None or abs(z) > disc_radius:
            continue
        _, _, dv, _ = shape.evaluate(np.array([z]))
        if dv[0] > defect_tol * max(1.0, scale):
            continue
        if all(abs(z - other) > 1e-6 for other in roots):
            roots.append(z)
    roots.sort(key=lambda z: (abs(z), z.real, z.imag))

    def traceless(pts):
        pv, qv, _, _ = shape.evaluate(pts)
        return pv + 1j * qv

    umbilics = []
    for z in roots:
        others = [abs(z - other) for other in roots if other != z]
        gap = min(others) if others else float("inf")
        loop_radius = max(0.5 * min(gap, disc_radius - abs(z) + step), 0.5 * step)
        w = winding_of(traceless, Loop(z, loop_radius), min_mag=1e-12 * max(1.0, scale))
        _, _, dv, _ = shape.evaluate(np.array([z]))
        umbilics.append(
            UmbilicReport(
                location=z,
                winding=w,
                index=Fraction(UMBILIC_WINDING_SIGN * w, 2),
                defect=float(dv[0]),
                loop_radius=loop_radius,
            )
        )
    return PrincipalReport(
        umbilics=tuple(umbilics),
        totally_umbilic=False,
        max_defect=max_defect,
        min_det_I=float(np.min(det_I[mask])),
    )


def _refine_umbilic(shape, z0, h=1e-6, max_iter=40, target=1e-11):
    z = complex(z0)
    for _ in range(max_iter):
        pts = np.array([z, z + h, z - h, z + 1j * h, z - 1j * h])
        p, q, _, _ = shape.evaluate(pts)
        f = np.array([p[0], q[0]])
        if np.hypot(*f) < target:
            return z
        J = np.array(
            [
                [(p[1] - p[2]) / (2 * h), (p[3] - p[4]) / (2 * h)],
                [(q[1] - q[2]) / (2 * h), (q[3] - q[4]) / (2 * h)],
            ]
        )
        try:
            step = np.linalg.solve(J, f)
        except np.linalg.LinAlgError:
            return None
        z = complex(z.real - step[0], z.imag - step[1])
        if not np.isfinite(z.real) or not np.isfinite(z.imag):
            return None
    p, q, _, _ = shape.evaluate(np.array([z]))
    return z if np.hypot(p[0], q[0]) < target * 100 else None


# ---------------------------------------------------------------------------
# ruled surfaces and line utilities
# ---------------------------------------------------------------------------


def ruled_family(S, radii, t_values, angular_n=64):
    """One ruled surface per Gauss radius: the lines over |nu| = radius swept
    along their length parameter t."""
    t_values = np.asarray(t_values, dtype=float)
    meshes = []
    for radius in radii:
        piece = S.pieces[S.piece_index(radius)]
        theta = 2.0 * np.pi * np.arange(angular_n) / angular_n
        nus = radius * np.exp(1j * theta)
        xis = piece.xi_expr.eval(nus)
        etas = piece.eta_expr.eval(nus)
        pts = point_from_line(
            np.broadcast_to(xis, (t_values.size, angular_n)),
            np.broadcast_to(etas, (t_values.size, angular_n)),
            np.broadcast_to(t_values[:, None], (t_values.size, angular_n)),
        )
        meshes.append(
            MeshR3(
                points=pts,
                xis=np.broadcast_to(xis, (t_values.size, angular_n)).copy(),
                u_values=t_values,
                v_values=theta,
            )
        )
    return meshes


def line_distance(line_a, line_b):
    """Closest-approach distance between two oriented lines."""
    va = line_to_vectors(line_a)
    vb = line_to_vectors(line_b)
    cross = np.cross(va.U, vb.U)
    delta = vb.V - va.V
    norm = np.linalg.norm(cross)
    if norm < 1e-12:
        perp = delta - np.dot(delta, va.U) * va.U
        return float(np.linalg.norm(perp))
    return float(abs(np.dot(delta, cross)) / norm)


def translate_line(line, w):
    """The oriented line carried to itself by the translation x -> x + w."""
    vecs = line_to_vectors(line)
    w = np.asarray(w, dtype=float)
    w_perp = w - np.dot(w, vecs.U) * vecs.U
    return vectors_to_line(vecs.U, vecs.V + w_perp)


# ---------------------------------------------------------------------------
# exporters
# ---------------------------------------------------------------------------


def export_obj(mesh):
    """Wavefront OBJ bytes: ``v`` lines then row-major quad faces, 1-based."""
    rows, cols = mesh.shape
    if rows < 2 or cols < 2:
        raise EmptyMesh("cannot export a mesh without faces")
    lines = []
    for i in range(rows):
        for j in range(cols):
            x, y, z = mesh.points[i, j]
            lines.append(f"v {x:.9g} {y:.9g} {z:.9g}")
    for i in range(rows - 1):
        for j in range(cols - 1):
            a = i * cols + j + 1
            b = (i + 1) * cols + j + 1
            c = (i + 1) * cols + j + 2
            d = i * cols + j + 2
            lines.append(f"f {a} {b} {c} {d}")
    return ("\n".join(lines) + "\n").encode("ascii")


def export_csv(mesh):
    """CSV bytes with header ``u,v,x1,x2,x3`` in row-major vertex order."""
    rows, cols = mesh.shape
    out = ["u,v,x1,x2,x3"]
    for i in range(rows):
        for j in range(cols):
            x, y, z = mesh.points[i, j]
            out.append(f"{mesh.u_values[i]!r},{mesh.v_values[j]!r},{x!r},{y!r},{z!r}")
    return ("\n".join(out) + "\n").encode("ascii")
