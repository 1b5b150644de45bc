"""Spherical trigonometry for the pentagon constraints.

Everything here is 64-bit floating point: polygon construction on the
unit sphere, the closed-form edge/angle relations of the isosceles
triangle and the a3c-quadrilateral, the pentagon splitting relations,
the two elimination quadratics, and sampled validation of the
edge-ordering lemmas.  Angles are oriented interior angles in (0, 2pi);
reflex values are meaningful and never clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

UNIT_TOL = 1e-12
DEFAULT_TOL = 1e-9
EQ_BAND = 1e-7  # equality band for the ordering checks
SIMPLE_CLEARANCE = 1e-10


class GeometryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# points, tangents and arcs
# ---------------------------------------------------------------------------


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n < UNIT_TOL:
        raise GeometryError("cannot normalize a near-zero vector")
    return v / n


def arc_length(p, q) -> float:
    """Great-arc distance in (0, pi]; antipodal pairs are rejected."""
    p, q = unit(p), unit(q)
    c = float(np.clip(np.dot(p, q), -1.0, 1.0))
    s = float(np.linalg.norm(np.cross(p, q)))
    if c < 0 and s < UNIT_TOL:
        raise GeometryError("antipodal points: arc undefined")
    return math.atan2(s, c)


def tangent(p, q) -> np.ndarray:
    """Unit tangent at p along the great circle toward q."""
    p, q = unit(p), unit(q)
    t = q - np.dot(p, q) * p
    return unit(t)


def rotate_tangent(p, t, angle: float) -> np.ndarray:
    """Rotate tangent t at p by ``angle``, counterclockwise seen from outside."""
    p = unit(p)
    return t * math.cos(angle) + np.cross(p, t) * math.sin(angle)


def advance(p, heading, dist: float):
    """Walk ``dist`` along a great circle; returns (point, new heading)."""
    p = unit(p)
    q = p * math.cos(dist) + heading * math.sin(dist)
    h = -p * math.sin(dist) + heading * math.cos(dist)
    return unit(q), h


def ray_intersection(p, tp, q, tq) -> np.ndarray:
    """Intersection of two great-circle rays (from p along tp, q along tq)."""
    n1 = unit(np.cross(p, tp))
    n2 = unit(np.cross(q, tq))
    x = np.cross(n1, n2)
    if np.linalg.norm(x) < UNIT_TOL:
        raise GeometryError("rays lie on the same great circle")
    x = unit(x)
    for cand in (x, -x):
        if np.dot(tp, cand - np.dot(p, cand) * p) > 0 and np.dot(
            tq, cand - np.dot(q, cand) * q
        ) > 0:
            return cand
    raise GeometryError("rays do not meet in the forward direction")


# ---------------------------------------------------------------------------
# polygons
# ---------------------------------------------------------------------------


@dataclass
class SphericalPolygon:
    """Ordered vertices on the unit sphere; interior on the left of the
    counterclockwise boundary."""

    vertices: np.ndarray

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise GeometryError("vertices must be an (n, 3) array")
        norms = np.linalg.norm(self.vertices, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise GeometryError("vertices must lie on the unit sphere")

    def __len__(self):
        return len(self.vertices)

    def edge_lengths(self) -> np.ndarray:
        n = len(self)
        return np.array(
            [arc_length(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]
        )

    def interior_angle(self, i: int) -> float:
        """Oriented interior angle at vertex i, in (0, 2pi)."""
        n = len(self)
        v = self.vertices[i]
        t_prev = tangent(v, self.vertices[(i - 1) % n])
        t_next = tangent(v, self.vertices[(i + 1) % n])
        ang = math.atan2(
            float(np.dot(np.cross(t_next, t_prev), v)), float(np.dot(t_next, t_prev))
        )
        return ang % (2 * math.pi)

    def angles(self) -> np.ndarray:
        return np.array([self.interior_angle(i) for i in range(len(self))])

    def area(self) -> float:
        """Signed spherical area by fan triangulation (van Oosterom-Strackee)."""
        n = len(self)
        v0 = self.vertices[0]
        total = 0.0
        for i in range(1, n - 1):
            a, b = self.vertices[i], self.vertices[i + 1]
            num = float(np.dot(v0, np.cross(a, b)))
            den = 1.0 + float(np.dot(v0, a) + np.dot(a, b) + np.dot(b, v0))
            total += 2.0 * math.atan2(num, den)
        return total

    def girard_residual(self) -> float:
        n = len(self)
        return float(np.sum(self.angles()) - (n - 2) * math.pi - self.area())

    def is_simple(self, clearance: float = SIMPLE_CLEARANCE) -> bool:
        """No two non-adjacent boundary arcs intersect.  Samples inside the
        clearance band around degeneracy are rejected rather than classified."""
        n = len(self)
        arcs = [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if j == i or (j - i) % n == 1 or (i - j) % n == 1:
                    continue
                if _arcs_intersect(arcs[i], arcs[j], clearance):
                    return False
        return True


def _arcs_intersect(arc1, arc2, clearance: float) -> bool:
    (p1, q1), (p2, q2) = arc1, arc2
    n1 = np.cross(p1, q1)
    n2 = np.cross(p2, q2)
    x = np.cross(n1, n2)
    nx = np.linalg.norm(x)
    if nx < 1e-9:  # same great circle: treat overlap as intersection
        return _point_on_arc(p2, p1, q1, 0.0) or _point_on_arc(q2, p1, q1, 0.0)
    x = x / nx
    for cand in (x, -x):
        if _point_on_arc(cand, p1, q1, clearance) and _point_on_arc(
            cand, p2, q2, clearance
        ):
            return True
    return False


def _point_on_arc(x, p, q, clearance: float) -> bool:
    d = arc_length(p, q)
    return arc_length(p, x) + arc_length(x, q) <= d + max(clearance, 1e-12)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def isosceles_cos_c(alpha: float, theta: float) -> float:
    """cos of the base of the isosceles triangle (b, b, c) with apex angle
    alpha and base angles theta:  cos c = cos(alpha) + (1+cos(alpha)) cot^2(theta)."""
    s = math.sin(theta)
    if abs(s) < 1e-12:
        raise GeometryError("pole singularity: sin(theta) = 0")
    cot = math.cos(theta) / s
    return math.cos(alpha) + (1.0 + math.cos(alpha)) * cot * cot


def quad_cos_a(beta: float, gamma: float, delta: float, epsilon: float) -> tuple[float, float]:
    """cos a of the a3c-quadrilateral from each of the two edge relations:

        sin(beta)  + cos(gamma) sin(eps)   = cos a * sin(gamma) (1 - cos(eps))
        sin(gamma) + cos(beta)  sin(delta) = cos a * sin(beta)  (1 - cos(delta))
    """
    d1 = math.sin(gamma) * (1.0 - math.cos(epsilon))
    d2 = math.sin(beta) * (1.0 - math.cos(delta))
    if abs(d1) < 1e-12 or abs(d2) < 1e-12:
        raise GeometryError("degenerate-denominator")
    v1 = (math.sin(beta) + math.cos(gamma) * math.sin(epsilon)) / d1
    v2 = (math.sin(gamma) + math.cos(beta) * math.sin(delta)) / d2
    return v1, v2


def quad_identity_residual(beta: float, gamma: float, delta: float, epsilon: float) -> float:
    """The four-angle identity of the a3c-quadrilateral (cos a eliminated)."""
    lhs = (math.sin(beta) + math.cos(gamma) * math.sin(epsilon)) * math.sin(beta) * (
        1.0 - math.cos(delta)
    )
    rhs = (math.sin(gamma) + math.cos(beta) * math.sin(delta)) * math.sin(gamma) * (
        1.0 - math.cos(epsilon)
    )
    return lhs - rhs


def quad_cos_c(a: float, delta: float, epsilon: float) -> float:
    """cos of the fourth edge of the a3c-quadrilateral."""
    ca, sa2 = math.cos(a), math.sin(a) ** 2
    return (
        ca
        - sa2 * ca * (1.0 - math.cos(delta)) * (1.0 - math.cos(epsilon))
        + sa2 * math.sin(delta) * math.sin(epsilon)
    )


def pentagon_split_residuals(
    beta: float, gamma: float, delta: float, epsilon: float, a: float, theta: float
) -> tuple[float, float]:
    """Residuals of the two splitting relations of the (b,a,a,a,b) pentagon,
    whose quadrilateral part has angles (beta-theta, gamma-theta, delta, eps)."""
    s = math.sin(theta)
    if abs(s) < 1e-12:
        raise GeometryError("pole singularity: sin(theta) = 0")
    cot = math.cos(theta) / s
    ca = math.cos(a)
    r1 = (
        (math.sin(beta) + math.cos(gamma) * math.sin(epsilon)) * cot
        - math.cos(beta)
        + math.sin(gamma) * math.sin(epsilon)
        - ca * (math.sin(gamma) * cot - math.cos(gamma)) * (1.0 - math.cos(epsilon))
    )
    r2 = (
        (math.sin(gamma) + math.cos(beta) * math.sin(delta)) * cot
        - math.cos(gamma)
        + math.sin(beta) * math.sin(delta)
        - ca * (math.sin(beta) * cot - math.cos(beta)) * (1.0 - math.cos(delta))
    )
    return r1, r2


@dataclass(frozen=True)
class QuadraticLMN:
    L: float
    M: float
    N: float

    def __iter__(self):
        return iter((self.L, self.M, self.N))


def lmn(beta: float, gamma: float, delta: float, epsilon: float) -> QuadraticLMN:
    """Coefficients of the quadratic for cos a (cot theta eliminated)."""
    sd, se = math.sin(delta), math.sin(epsilon)
    cd, ce = math.cos(delta), math.cos(epsilon)
    sbg, cbg = math.sin(beta - gamma), math.cos(beta - gamma)
    return QuadraticLMN(
        L=sbg * (1.0 - cd) * (1.0 - ce),
        M=cbg * (se - sd + math.sin(delta - epsilon)),
        N=sd - se - sbg * (1.0 - sd * se),
    )


@dataclass(frozen=True)
class QuadraticPQR:
    P: float
    Q: float
    R: float

    def __iter__(self):
        return iter((self.P, self.Q, self.R))


def pqr(beta: float, gamma: float, delta: float, epsilon: float) -> QuadraticPQR:
    """Coefficients of the quadratic for cot theta (cos a eliminated)."""
    sb, sg = math.sin(beta), math.sin(gamma)
    cb, cg = math.cos(beta), math.cos(gamma)
    sd, se = math.sin(delta), math.sin(epsilon)
    cd, ce = math.cos(delta), math.cos(epsilon)
    cbg = math.cos(beta + gamma)
    return QuadraticPQR(
        P=sb * (sb + cg * se) * (1.0 - cd) - sg * (sg + cb * sd) * (1.0 - ce),
        Q=-(math.sin(2 * beta) + cbg * se) * (1.0 - cd)
        + (math.sin(2 * gamma) + cbg * sd) * (1.0 - ce),
        R=cb * (cb - sg * se) * (1.0 - cd) - cg * (cg - sb * sd) * (1.0 - ce),
    )


@dataclass(frozen=True)
class QuadraticRoots:
    kind: str  # "quadratic" | "linear" | "no-real-root" | "identically-zero"
    roots: tuple[float, ...]


def solve_quadratic(c2: float, c1: float, c0: float) -> QuadraticRoots:
    """Real roots of c2 x^2 + c1 x + c0, with near-zero leading coefficient
    treated as linear and the all-zero case flagged for the caller."""
    if max(abs(c2), abs(c1), abs(c0)) < 1e-12:
        return QuadraticRoots("identically-zero", ())
    if abs(c2) < 1e-10:
        if abs(c1) < 1e-12:
            return QuadraticRoots("no-real-root", ())
        return QuadraticRoots("linear", (-c0 / c1,))
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < -1e-12:
        return QuadraticRoots("no-real-root", ())
    disc = max(disc, 0.0)
    r = math.sqrt(disc)
    return QuadraticRoots("quadratic", tuple(sorted(((-c1 - r) / (2 * c2), (-c1 + r) / (2 * c2)))))


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

_NORTH = np.array([0.0, 0.0, 1.0])
_EAST = np.array([1.0, 0.0, 0.0])


def construct_quadrilateral(a: float, delta: float, epsilon: float) -> SphericalPolygon:
    """The a3c-quadrilateral (B, D, E, C): BD = DE = EC = a, interior angles
    delta at D and epsilon at E.  D sits at the north pole and DE runs along
    a fixed meridian, which removes the gauge freedom."""
    if not 0 < a < math.pi:
        raise GeometryError("edge a must be in (0, pi)")
    D = _NORTH
    h = _EAST
    E, h_at_E = advance(D, h, a)
    # at D the arrival direction from B continues into DE after a left turn
    # of pi - delta, so the direction back toward B is the reverse
    t_in_D = rotate_tangent(D, h, -(math.pi - delta))
    B, _ = advance(D, -t_in_D, a)
    t_out_E = rotate_tangent(E, h_at_E, math.pi - epsilon)
    C, _ = advance(E, t_out_E, a)
    return SphericalPolygon(np.array([B, D, E, C]))


def quad_angles(poly: SphericalPolygon) -> tuple[float, float, float, float]:
    """(beta, gamma, delta, epsilon) of a (B, D, E, C) quadrilateral."""
    ang = poly.angles()
    return ang[0], ang[3], ang[1], ang[2]


def construct_pentagon(
    a: float, delta: float, epsilon: float, theta: float
) -> SphericalPolygon:
    """A (b, a, a, a, b) pentagon (A, B, D, E, C): the a3c-quadrilateral with
    apex A attached over the diagonal BC, base angles theta at B and C."""
    quad = construct_quadrilateral(a, delta, epsilon)
    B, D, E, C = quad.vertices
    t_BC = tangent(B, C)
    t_CB = tangent(C, B)
    # apex on the far side of BC from the quadrilateral
    ray_B = rotate_tangent(B, t_BC, theta)
    ray_C = rotate_tangent(C, t_CB, -theta)
    A = ray_intersection(B, ray_B, C, ray_C)
    return SphericalPolygon(np.array([A, B, D, E, C]))


def pentagon_angles(poly: SphericalPolygon) -> tuple[float, float, float, float, float]:
    """(alpha, beta, gamma, delta, epsilon) of an (A, B, D, E, C) pentagon."""
    ang = poly.angles()
    return ang[0], ang[1], ang[4], ang[2], ang[3]


def pentagon_from_angle_data(
    beta: float, gamma: float, delta: float, epsilon: float, a: float
) -> SphericalPolygon:
    """Pentagon (A, B, D, E, C) built from the quadrilateral part and the
    full interior angles beta at B, gamma at C: the apex is the intersection
    of the two boundary rays.  Used to measure the forced apex angle."""
    quad = construct_quadrilateral(a, delta, epsilon)
    B, D, E, C = quad.vertices
    ray_B = rotate_tangent(B, tangent(B, D), beta)
    ray_C = rotate_tangent(C, tangent(C, E), -gamma)
    A = ray_intersection(B, ray_B, C, ray_C)
    return SphericalPolygon(np.array([A, B, D, E, C]))


# ---------------------------------------------------------------------------
# ordering checks and the five-angle relation
# ---------------------------------------------------------------------------


def pcombo_check(
    beta: float, gamma: float, delta: float, epsilon: float, eq_band: float = EQ_BAND
) -> bool:
    """The edge-ordering constraint: beta > gamma iff delta < epsilon.

    Near-ties are accepted only when both differences vanish together."""
    d1, d2 = beta - gamma, delta - epsilon
    if abs(d1) < eq_band or abs(d2) < eq_band:
        return abs(d1) < eq_band and abs(d2) < eq_band
    return (d1 > 0) != (d2 > 0)


class NoConsistentSplit(GeometryError):
    pass


def _split_candidates(beta, gamma, delta, epsilon, tol):
    """(cot theta, cos a) pairs solving both splitting relations."""
    P, Q, R = pqr(beta, gamma, delta, epsilon)
    L, M, N = lmn(beta, gamma, delta, epsilon)
    cots = solve_quadratic(P, Q, R)
    cosas = solve_quadratic(L, M, N)
    cot_list = list(cots.roots)
    cosa_list = [c for c in cosas.roots if abs(c) <= 1.0 + 1e-9]
    if cosas.kind == "identically-zero" or not cosa_list:
        # fall back on the first edge relation once cot theta is known
        cosa_list = None
    out = []
    for cot in cot_list:
        theta = math.atan2(1.0, cot) % math.pi  # theta in (0, pi)
        cands = cosa_list
        if cands is None:
            den = (math.sin(gamma) * cot - math.cos(gamma)) * (1.0 - math.cos(epsilon))
            if abs(den) < 1e-12:
                continue
            num = (
                (math.sin(beta) + math.cos(gamma) * math.sin(epsilon)) * cot
                - math.cos(beta)
                + math.sin(gamma) * math.sin(epsilon)
            )
            cands = [num / den]
        for ca in cands:
            if abs(ca) > 1.0 + 1e-9:
                continue
            a = math.acos(max(-1.0, min(1.0, ca)))
            r1, r2 = pentagon_split_residuals(beta, gamma, delta, epsilon, a, theta)
            if abs(r1) <= tol and abs(r2) <= tol:
                out.append((cot, theta, ca, a))
    return out


def pentagon_angle_equality_residual(
    alpha: float,
    beta: float,
    gamma: float,
    delta: float,
    epsilon: float,
    tol: float = 1e-8,
) -> float:
    """Residual of the five-angle relation of the (b,a,a,a,b) pentagon,
    evaluated at the (theta, a) solving the splitting relations:

        cos(alpha) + (1+cos(alpha)) cot^2(theta)
            = cos a - sin^2 a cos a (1-cos d)(1-cos e) + sin^2 a sin d sin e

    Raises NoConsistentSplit when no real (theta, a) pair satisfies both
    splitting relations.  Note the relation sees only cos(alpha); the
    constructive check (pentagon_from_angle_data) is the arbiter for
    apex angles that differ by reflex complement.
    """
    cands = _split_candidates(beta, gamma, delta, epsilon, tol)
    if not cands:
        raise NoConsistentSplit("no real (theta, a) satisfies the splitting relations")
    best = None
    for cot, theta, ca, a in cands:
        lhs = math.cos(alpha) + (1.0 + math.cos(alpha)) * cot * cot
        rhs = quad_cos_c(a, delta, epsilon)
        r = lhs - rhs
        if best is None or abs(r) < abs(best):
            best = r
    return best


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadSample:
    a: float
    poly: SphericalPolygon
    beta: float
    gamma: float
    delta: float
    epsilon: float


def sample_quadrilaterals(
    n: int,
    rng: np.random.Generator,
    *,
    reflex: bool = True,
    margin: float = 0.15,
    max_tries: int = 100,
) -> list[QuadSample]:
    """Random simple a3c-quadrilaterals.  Near-degenerate draws (non-simple
    boundary, angles within the margin of 0 or 2pi, tiny identity
    denominators) are discarded, not classified."""
    out = []
    tries = 0
    hi = 2 * math.pi - margin if reflex else math.pi - margin
    while len(out) < n and tries < n * max_tries:
        tries += 1
        a = rng.uniform(margin, math.pi - margin)
        delta = rng.uniform(margin, hi)
        epsilon = rng.uniform(margin, hi)
        try:
            poly = construct_quadrilateral(a, delta, epsilon)
            beta, gamma, d_meas, e_meas = quad_angles(poly)
        except GeometryError:
            continue
        angs = (beta, gamma, d_meas, e_meas)
        if any(x < margin or x > 2 * math.pi - margin for x in angs):
            continue
        if abs(d_meas - delta) > 1e-6 or abs(e_meas - epsilon) > 1e-6:
            continue  # construction wrapped an angle; discard
        if abs(math.sin(gamma) * (1 - math.cos(epsilon))) < 0.05:
            continue
        if abs(math.sin(beta) * (1 - math.cos(delta))) < 0.05:
            continue
        if min(poly.edge_lengths()) < margin:
            continue
        if not poly.is_simple():
            continue
        out.append(QuadSample(a, poly, beta, gamma, delta, epsilon))
    if len(out) < n:
        raise GeometryError(f"sampler starved: {len(out)}/{n} accepted")
    return out


@dataclass(frozen=True)
class PentagonSample:
    a: float
    theta: float
    poly: SphericalPolygon
    alpha: float
    beta: float
    gamma: float
    delta: float
    epsilon: float


def sample_pentagons(
    n: int,
    rng: np.random.Generator,
    *,
    margin: float = 0.15,
    max_tries: int = 200,
) -> list[PentagonSample]:
    """Random simple (b, a, a, a, b) pentagons, built as a quadrilateral
    with an isosceles apex over the diagonal."""
    out = []
    tries = 0
    while len(out) < n and tries < n * max_tries:
        tries += 1
        a = rng.uniform(margin, math.pi - margin)
        delta = rng.uniform(margin, 2 * math.pi - margin)
        epsilon = rng.uniform(margin, 2 * math.pi - margin)
        theta = rng.uniform(margin, math.pi / 2 - margin / 2)
        try:
            poly = construct_pentagon(a, delta, epsilon, theta)
        except GeometryError:
            continue
        alpha, beta, gamma, d_meas, e_meas = pentagon_angles(poly)
        angs = (alpha, beta, gamma, d_meas, e_meas)
        if any(x < margin or x > 2 * math.pi - margin for x in angs):
            continue
        if abs(d_meas - delta) > 1e-6 or abs(e_meas - epsilon) > 1e-6:
            continue
        # the apex must sit across BC: the pentagon angles at B, C are the
        # quadrilateral's plus theta
        quad = construct_quadrilateral(a, delta, epsilon)
        qb, qg, _, _ = quad_angles(quad)
        if abs((qb + theta) - beta) > 1e-6 or abs((qg + theta) - gamma) > 1e-6:
            continue
        b_edges = poly.edge_lengths()
        if abs(b_edges[0] - b_edges[4]) > 1e-9:  # AB vs CA
            continue
        if min(b_edges) < margin:
            continue
        if not poly.is_simple():
            continue
        out.append(PentagonSample(a, theta, poly, alpha, beta, gamma, d_meas, e_meas))
    if len(out) < n:
        raise GeometryError(f"sampler starved: {len(out)}/{n} accepted")
    return out
