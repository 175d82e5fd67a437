# ================================================================================================
# 🧱 ELEMENTS - Funciones de forma y matrices elementales
# ================================================================================================
# Reference shape functions (Line2, cubic Hermite, Tri3), Gauss rules and the
# closed-form element stiffness, mass and consistent-load blocks.
#
# Reference coordinates: s in [0, 1] for lines, (r, s) on the unit right
# triangle for Tri3. Hermite slope functions are tabulated for h = 1; the
# physical ones are h times the reference ones.

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..entities.mesh import ElementKind, barycentric, triangle_signed_area
from ..exceptions.funcint_exceptions import (
    DegenerateTriangleException,
    InvalidParameterException,
    NonPositiveLengthException,
)

Geometry = Union[float, np.ndarray]


def _check_length(h_e: float) -> float:
    h_e = float(h_e)
    if not (np.isfinite(h_e) and h_e > 0.0):
        raise NonPositiveLengthException(h_e)
    return h_e


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not (np.isfinite(value) and value > 0.0):
        raise InvalidParameterException(name, value, "must be positive")
    return value


def _check_triangle(vertex_coords: Sequence[Sequence[float]]) -> Tuple[np.ndarray, float]:
    xy = np.asarray(vertex_coords, dtype=float)
    if xy.shape != (3, 2):
        raise InvalidParameterException("vertex_coords", xy.shape, "expected a 3x2 array")
    area = triangle_signed_area(xy)
    scale = max(float(np.ptp(xy[:, 0])), float(np.ptp(xy[:, 1])), 1e-300)
    if not area > 1e-14 * scale * scale:
        raise DegenerateTriangleException(area)
    return xy, area


# ================================================================================================
# 📐 SHAPE FUNCTIONS
# ================================================================================================

@dataclass(frozen=True)
class ShapeFunctionSet:
    """
    📐 Conjunto de funciones de forma sobre el elemento de referencia.

    ``eval`` returns the values of all functions at one reference point,
    ``eval_grad`` the first derivatives with respect to the reference
    coordinate(s) and ``eval_hess`` the second derivatives (Hermite only).
    """
    kind: ElementKind

    @property
    def n_funcs(self) -> int:
        return self.kind.n_funcs

    def eval(self, ref: Union[float, Sequence[float]]) -> np.ndarray:
        if self.kind is ElementKind.LINE2:
            s = float(ref)
            return np.array([1.0 - s, s])
        if self.kind is ElementKind.HERMITE_LINE2:
            s = float(ref)
            return np.array([
                1.0 - 3.0 * s**2 + 2.0 * s**3,
                s - 2.0 * s**2 + s**3,
                3.0 * s**2 - 2.0 * s**3,
                -s**2 + s**3,
            ])
        r, s = ref
        return np.array([1.0 - r - s, r, s])

    def eval_grad(self, ref: Union[float, Sequence[float]]) -> np.ndarray:
        if self.kind is ElementKind.LINE2:
            return np.array([-1.0, 1.0])
        if self.kind is ElementKind.HERMITE_LINE2:
            s = float(ref)
            return np.array([
                -6.0 * s + 6.0 * s**2,
                1.0 - 4.0 * s + 3.0 * s**2,
                6.0 * s - 6.0 * s**2,
                -2.0 * s + 3.0 * s**2,
            ])
        return np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])

    def eval_hess(self, ref: float) -> np.ndarray:
        if self.kind is not ElementKind.HERMITE_LINE2:
            raise InvalidParameterException("kind", self.kind.value, "second derivatives only for Hermite")
        s = float(ref)
        return np.array([-6.0 + 12.0 * s, -4.0 + 6.0 * s, 6.0 - 12.0 * s, -2.0 + 6.0 * s])


def shape_functions(kind: ElementKind) -> ShapeFunctionSet:
    return ShapeFunctionSet(kind)


def hermite_scaling(h_e: float) -> np.ndarray:
    """Diagonal map from reference to physical Hermite functions, DOF order (u1, u1_x, u2, u2_x)."""
    return np.array([1.0, h_e, 1.0, h_e])


# ================================================================================================
# 🎯 QUADRATURE
# ================================================================================================

def gauss_line(n_points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre points and weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n_points)
    return 0.5 * (x + 1.0), 0.5 * w


def gauss_triangle() -> Tuple[np.ndarray, np.ndarray]:
    """Three-point rule on the unit right triangle, exact for quadratics."""
    points = np.array([[1.0 / 6.0, 1.0 / 6.0], [2.0 / 3.0, 1.0 / 6.0], [1.0 / 6.0, 2.0 / 3.0]])
    weights = np.full(3, 1.0 / 6.0)
    return points, weights


# ================================================================================================
# 🧮 CLOSED-FORM ELEMENT MATRICES
# ================================================================================================

def stiffness_line2(sigma: float, h_e: float) -> np.ndarray:
    """sigma / h_e * [[1, -1], [-1, 1]]."""
    h_e = _check_length(h_e)
    sigma = _check_positive("sigma", sigma)
    return sigma / h_e * np.array([[1.0, -1.0], [-1.0, 1.0]])


def mass_line2(h_e: float) -> np.ndarray:
    h_e = _check_length(h_e)
    return h_e / 6.0 * np.array([[2.0, 1.0], [1.0, 2.0]])


def stiffness_hermite(K_B: float, h_e: float) -> np.ndarray:
    """
    Bending stiffness K_B * integral of phi_xx phi_xx^T over the element.

    DOF order (u1, u1_x, u2, u2_x).
    """
    h = _check_length(h_e)
    K_B = _check_positive("K_B", K_B)
    return K_B / h**3 * np.array([
        [12.0, 6.0 * h, -12.0, 6.0 * h],
        [6.0 * h, 4.0 * h**2, -6.0 * h, 2.0 * h**2],
        [-12.0, -6.0 * h, 12.0, -6.0 * h],
        [6.0 * h, 2.0 * h**2, -6.0 * h, 4.0 * h**2],
    ])


def mass_hermite(h_e: float) -> np.ndarray:
    h = _check_length(h_e)
    return h / 420.0 * np.array([
        [156.0, 22.0 * h, 54.0, -13.0 * h],
        [22.0 * h, 4.0 * h**2, 13.0 * h, -3.0 * h**2],
        [54.0, 13.0 * h, 156.0, -22.0 * h],
        [-13.0 * h, -3.0 * h**2, -22.0 * h, 4.0 * h**2],
    ])


def tri3_gradients(vertex_coords: Sequence[Sequence[float]]) -> Tuple[np.ndarray, float]:
    """Constant gradients (3x2, one row per vertex) and area of a linear triangle."""
    xy, area = _check_triangle(vertex_coords)
    (x1, y1), (x2, y2), (x3, y3) = xy
    grads = np.array([
        [y2 - y3, x3 - x2],
        [y3 - y1, x1 - x3],
        [y1 - y2, x2 - x1],
    ]) / (2.0 * area)
    return grads, area


def stiffness_tri3(sigma: float, vertex_coords: Sequence[Sequence[float]]) -> np.ndarray:
    """sigma * area * G G^T with G the constant shape-function gradients."""
    sigma = _check_positive("sigma", sigma)
    grads, area = tri3_gradients(vertex_coords)
    return sigma * area * grads @ grads.T


def mass_tri3(vertex_coords: Sequence[Sequence[float]]) -> np.ndarray:
    _, area = _check_triangle(vertex_coords)
    return area / 12.0 * np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]])


def hermite_load_matrix(h_e: float) -> np.ndarray:
    """
    4x2 matrix M with M @ (f1, f2) = integral of phi * f^h, f^h linear between
    the nodal values f1, f2.
    """
    h = _check_length(h_e)
    return h * np.array([
        [7.0 / 20.0, 3.0 / 20.0],
        [h / 20.0, h / 30.0],
        [3.0 / 20.0, 7.0 / 20.0],
        [-h / 30.0, -h / 20.0],
    ])


def consistent_load(kind: ElementKind, geometry: Geometry, nodal_f: Sequence[float]) -> np.ndarray:
    """
    Consistent load vector of one element.

    ``geometry`` is the element length for line kinds and the 3x2 vertex
    array for Tri3. ``nodal_f`` holds the values of f at the element nodes.
    """
    f = np.asarray(nodal_f, dtype=float)
    if f.shape != (kind.n_nodes,):
        raise InvalidParameterException("nodal_f", f.shape, f"expected {kind.n_nodes} nodal values")
    if kind is ElementKind.LINE2:
        return mass_line2(float(geometry)) @ f
    if kind is ElementKind.HERMITE_LINE2:
        return hermite_load_matrix(float(geometry)) @ f
    return mass_tri3(geometry) @ f


@dataclass(frozen=True)
class ElementMatrices:
    k: np.ndarray
    m: np.ndarray
    f_vec: Optional[np.ndarray] = None


def element_matrices(
    kind: ElementKind,
    coords: np.ndarray,
    material: float,
    nodal_f: Optional[Sequence[float]] = None,
) -> ElementMatrices:
    """Stiffness, mass and (optionally) load of one element from its node coordinates."""
    if kind is ElementKind.TRI3:
        geometry: Geometry = np.asarray(coords, dtype=float)
        k = stiffness_tri3(material, geometry)
        m = mass_tri3(geometry)
    else:
        geometry = float(coords[1][0] - coords[0][0])
        if kind is ElementKind.LINE2:
            k, m = stiffness_line2(material, geometry), mass_line2(geometry)
        else:
            k, m = stiffness_hermite(material, geometry), mass_hermite(geometry)
    f_vec = consistent_load(kind, geometry, nodal_f) if nodal_f is not None else None
    return ElementMatrices(k=k, m=m, f_vec=f_vec)


# ================================================================================================
# 📍 INTERPOLATION
# ================================================================================================

def interpolation_weights(kind: ElementKind, coords: np.ndarray, x: Union[float, Sequence[float]]) -> np.ndarray:
    """
    Weights w with u^h(x) = w . d^e for the local DOF vector d^e of the element.

    Points slightly outside the element are clamped to it.
    """
    coords = np.asarray(coords, dtype=float)
    if kind is ElementKind.TRI3:
        lam = barycentric(coords, np.asarray(x, dtype=float))
        lam = np.clip(lam, 0.0, 1.0)
        return lam / lam.sum()

    a, b = coords[0, 0], coords[1, 0]
    h = b - a
    s = float(np.clip((float(np.atleast_1d(x)[0]) - a) / h, 0.0, 1.0))
    values = shape_functions(kind).eval(s)
    if kind is ElementKind.HERMITE_LINE2:
        values = values * hermite_scaling(h)
    return values
