"""Assembly and verification of the 8-bar linkages.

Both linkages share one angular design: three base joints at arc positions
u1 < u2 < u3 on the base bar g0, arm arcs beta1..beta3 and branch signs. The
three driven cells determine three more cells whose couplers land on a single
eighth bar h0; the construction runs entirely through the half-turn /
line-reflection symmetry centers of circle (resp. line) pairs, so every
symmetry property is verified numerically on the assembled pose rather
than assumed.

Link/joint bookkeeping: joint R_ij (hinge I_ij) joins bar g_i to bar h_j,
i != j; each bar carries three joints; the linkgraph is the cube's
1-skeleton. The six four-bar cells are its faces.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from . import screws, sphere
from .errors import ClosureFailure, CollapsedPose, DegenerateBranch, InvalidSpec
from .isogram import Branch, SphericalIsogramSpec, coupled_angle, transmission_coefficient
from .oracle import numeric_nullity
from .screws import OrientedLine
from .sphere import OrientedGreatCircle, SpherePoint, SphericalRotation

_ALIGNED_EPS = 1e-12
_CLOSURE_TOL = 1e-9
_PROBE_ANGLES = (0.2, 0.37, 0.51, 0.68, 0.94)

JOINT_KEYS = tuple(
    f"R{i}{j}" for i in range(4) for j in range(4) if i != j
)
HINGE_KEYS = tuple(f"I{i}{j}" for i in range(4) for j in range(4) if i != j)

# Cells as (vertex joints A,B,C,D | sides AB,BC,CD,DA); the cell's half-turn
# swaps A<->C and B<->D. Cells 1-3 have bases on g0, cells 4-6 couplers on h0.
CELLS = (
    (("R01", "R02", "R32", "R31"), ("g0", "h2", "g3", "h1")),
    (("R02", "R03", "R13", "R12"), ("g0", "h3", "g1", "h2")),
    (("R01", "R03", "R23", "R21"), ("g0", "h3", "g2", "h1")),
    (("R13", "R23", "R20", "R10"), ("h3", "g2", "h0", "g1")),
    (("R21", "R31", "R30", "R20"), ("h1", "g3", "h0", "g2")),
    (("R12", "R32", "R30", "R10"), ("h2", "g3", "h0", "g1")),
)


# ---------------------------------------------------------------------------
# Specs and validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EightBarSpec:
    """Raw spherical 8-bar design. beta3/branch3 may be omitted and derived."""

    u1: float
    u2: float
    u3: float
    beta1: float
    beta2: float
    branch1: Branch
    branch2: Branch
    beta3: float | None = None
    branch3: Branch | None = None


@dataclass(frozen=True)
class SpatialEightBarSpec:
    """Spatial design: the angular data plus base segment lengths a1, a2 and
    (optional) arm offsets; omitted offsets are derived from the per-cell
    moduli k_i = a_i / sin(alpha_i)."""

    u1: float
    u2: float
    u3: float
    beta1: float
    beta2: float
    branch1: Branch
    branch2: Branch
    a1: float
    a2: float
    beta3: float | None = None
    branch3: Branch | None = None
    b1: float | None = None
    b2: float | None = None
    b3: float | None = None


@dataclass(frozen=True)
class ValidatedSpherical:
    u: tuple[float, float, float]
    alphas: tuple[float, float, float]
    betas: tuple[float, float, float]
    branches: tuple[Branch, Branch, Branch]
    c21: float
    c32: float
    c31: float


@dataclass(frozen=True)
class ValidatedSpatial:
    angular: ValidatedSpherical
    a: tuple[float, float]
    b: tuple[float, float, float]
    moduli: tuple[float, float, float]


def derive_third_isogram(alpha3: float, c31: float) -> list[tuple[float, Branch]]:
    """All (beta3, branch) pairs whose transmission coefficient equals c31.

    Every target is realizable on at least one branch; candidates come back
    sorted (plus before minus, then by arc) for deterministic selection.
    """
    out: list[tuple[float, Branch]] = []
    sa3, ca3 = np.sin(alpha3), np.cos(alpha3)
    for branch in ("plus", "minus"):
        if branch == "plus":
            a_c, b_c, c_c = ca3 - c31, -sa3, c31 * sa3
        else:
            a_c, b_c, c_c = c31 - ca3, sa3, c31 * sa3
        amp = float(np.hypot(a_c, b_c))
        if amp < abs(c_c) - 1e-14:
            continue
        phase = np.arctan2(b_c, a_c)
        base = np.arcsin(np.clip(c_c / amp, -1.0, 1.0))
        for root in (base - phase, np.pi - base - phase):
            x = float(np.mod(root, 2 * np.pi))
            if not 1e-9 < x < np.pi - 1e-9:
                continue
            try:
                got = transmission_coefficient(SphericalIsogramSpec(alpha3, x, branch))
            except DegenerateBranch:
                continue
            if abs(got - c31) < 1e-9 and all(abs(x - b0) > 1e-12 or br != branch for b0, br in out):
                out.append((x, branch))
    out.sort(key=lambda t: (t[1] != "plus", t[0]))
    return out


def _cell_coefficient(alpha: float, beta: float, branch: Branch, which: str) -> float:
    try:
        return transmission_coefficient(SphericalIsogramSpec(alpha, beta, branch))
    except (DegenerateBranch, ValueError) as exc:
        raise InvalidSpec(f"isogram {which}: {exc}") from exc


def _validate_angular(spec) -> ValidatedSpherical:
    u = (spec.u1, spec.u2, spec.u3)
    if not (u[0] < u[1] < u[2]):
        raise InvalidSpec("base joints must satisfy u1 < u2 < u3")
    a1, a2, a3 = u[1] - u[0], u[2] - u[1], u[2] - u[0]
    if not 0 < a1 < np.pi:
        raise InvalidSpec(f"alpha1 = u2 - u1 = {a1:.6g} outside (0, pi)")
    if not 0 < a2 < np.pi:
        raise InvalidSpec(f"alpha2 = u3 - u2 = {a2:.6g} outside (0, pi)")
    if not a3 < np.pi:
        raise InvalidSpec(f"alpha1 + alpha2 = {a3:.6g} must stay below pi")
    for name, beta in (("beta1", spec.beta1), ("beta2", spec.beta2)):
        if not 0 < beta < np.pi:
            raise InvalidSpec(f"{name} = {beta:.6g} outside (0, pi)")
    c21 = _cell_coefficient(a1, spec.beta1, spec.branch1, "1")
    c32 = _cell_coefficient(a2, spec.beta2, spec.branch2, "2")
    c31 = c21 * c32

    if spec.beta3 is None:
        if spec.branch3 is not None:
            candidates = [bc for bc in derive_third_isogram(a3, c31) if bc[1] == spec.branch3]
        else:
            candidates = derive_third_isogram(a3, c31)
        if not candidates:
            raise InvalidSpec("no third-isogram arm arc realizes c31 = c32*c21 on the requested branch")
        beta3, branch3 = candidates[0]
    else:
        beta3 = spec.beta3
        if not 0 < beta3 < np.pi:
            raise InvalidSpec(f"beta3 = {beta3:.6g} outside (0, pi)")
        matches = []
        for branch in ("plus", "minus") if spec.branch3 is None else (spec.branch3,):
            try:
                c = transmission_coefficient(SphericalIsogramSpec(a3, beta3, branch))
            except DegenerateBranch:
                continue
            if abs(c - c31) < 1e-9:
                matches.append(branch)
        if not matches:
            raise InvalidSpec(
                "isogram 3: supplied beta3 cannot realize the induced coefficient "
                f"c31 = c32*c21 = {c31:.12g}"
            )
        branch3 = matches[0]
    return ValidatedSpherical(
        u=u,
        alphas=(a1, a2, a3),
        betas=(spec.beta1, spec.beta2, beta3),
        branches=(spec.branch1, spec.branch2, branch3),
        c21=c21,
        c32=c32,
        c31=c31,
    )


def _offset_sign(branch: Branch) -> float:
    # minus-branch cells close with the arm offset measured against the arm
    # direction; the signed proportion is b = sign * k * sin(beta)
    return 1.0 if branch == "plus" else -1.0


def validate_spec(spec):
    """Normalize a raw spec, deriving beta3/branch3 and spatial offsets.

    Rejects infeasible data with a diagnostic naming the violated constraint.
    """
    if isinstance(spec, EightBarSpec):
        return _validate_angular(spec)
    if isinstance(spec, SpatialEightBarSpec):
        angular = _validate_angular(spec)
        if spec.a1 <= 0 or spec.a2 <= 0:
            raise InvalidSpec("base segment lengths a1, a2 must be positive")
        a3 = spec.a1 + spec.a2
        moduli = (
            spec.a1 / np.sin(angular.alphas[0]),
            spec.a2 / np.sin(angular.alphas[1]),
            a3 / np.sin(angular.alphas[2]),
        )
        b = []
        for idx, (given, k, beta, branch) in enumerate(
            zip(
                (spec.b1, spec.b2, spec.b3),
                moduli,
                angular.betas,
                angular.branches,
            ),
            start=1,
        ):
            expected = _offset_sign(branch) * k * np.sin(beta)
            if given is None:
                b.append(float(expected))
            else:
                if abs(given - expected) > 1e-9 * max(1.0, abs(expected)):
                    raise InvalidSpec(
                        f"isogram {idx}: arm offset b{idx} = {given:.12g} violates the "
                        f"signed side proportion (expected {expected:.12g})"
                    )
                b.append(float(given))
        return ValidatedSpatial(angular=angular, a=(spec.a1, spec.a2), b=tuple(b), moduli=moduli)
    raise TypeError(f"cannot validate {type(spec).__name__}")


def derive_spec(spec):
    """Completed raw spec with beta3/branch3 (and spatial offsets) filled in."""
    v = validate_spec(spec)
    if isinstance(spec, EightBarSpec):
        return replace(spec, beta3=v.betas[2], branch3=v.branches[2])
    return replace(
        spec,
        beta3=v.angular.betas[2],
        branch3=v.angular.branches[2],
        b1=v.b[0],
        b2=v.b[1],
        b3=v.b[2],
    )


# ---------------------------------------------------------------------------
# Spherical assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EightBarPose:
    spec: ValidatedSpherical
    phi: tuple[float, float, float]
    g: tuple[OrientedGreatCircle, ...]
    h: tuple[OrientedGreatCircle, ...]
    joints: Mapping[str, SpherePoint]
    centers: tuple[SpherePoint, ...] | None
    n_circle: OrientedGreatCircle | None
    n_pole: SpherePoint | None
    t1: OrientedGreatCircle | None
    t2: OrientedGreatCircle | None
    aligned: bool
    closure_residual: float

    def bar(self, key: str) -> OrientedGreatCircle:
        return self.g[int(key[1])] if key[0] == "g" else self.h[int(key[1])]


def _base_point(u: float) -> SpherePoint:
    return SpherePoint.of(np.cos(u), np.sin(u), 0.0)


def _phis(v: ValidatedSpherical, phi1: float) -> tuple[float, float, float]:
    return (phi1, coupled_angle(v.c21, phi1), coupled_angle(v.c31, phi1))


def _is_aligned_angle(phi1: float) -> bool:
    return abs(phi1) < _ALIGNED_EPS or abs(abs(phi1) - np.pi) < _ALIGNED_EPS


def assemble_spherical(spec, phi1: float) -> EightBarPose:
    """Pose of the spherical 8-bar at arm angle phi1.

    phi1 = 0 (and the flip pose phi1 = pi) are not errors: they return the
    aligned pose, all bars on g0, with the symmetry elements marked absent.
    """
    v = spec if isinstance(spec, ValidatedSpherical) else validate_spec(spec)
    if _is_aligned_angle(phi1):
        return _assemble_spherical_aligned(v, phi1)
    return _assemble_spherical_regular(v, phi1)


def _assemble_spherical_regular(v: ValidatedSpherical, phi1: float) -> EightBarPose:
    phi = _phis(v, phi1)
    g0 = OrientedGreatCircle(np.array([0.0, 0.0, 1.0]))
    r = {f"R0{j}": _base_point(v.u[j - 1]) for j in (1, 2, 3)}

    h = [None, None, None, None]
    for j in (1, 2, 3):
        h[j] = sphere.apply(sphere.rotation_about(r[f"R0{j}"], phi[j - 1]), g0)

    def center(c1: OrientedGreatCircle, c2: OrientedGreatCircle) -> SpherePoint:
        try:
            s, _, _ = sphere.symmetry_centers(c1, c2.reversed())
        except Exception as exc:
            raise ClosureFailure(f"symmetry center degenerate away from the aligned pose: {exc}") from exc
        return s

    s1 = center(h[1], h[2])
    s2 = center(h[2], h[3])
    s3 = center(h[3], h[1])
    sig = [sphere.halfturn_about(s) for s in (s1, s2, s3)]

    g = [g0, None, None, None]
    g[3] = sphere.apply(sig[0], g0).reversed()
    g[1] = sphere.apply(sig[1], g0).reversed()
    g[2] = sphere.apply(sig[2], g0).reversed()

    r["R32"] = sphere.apply(sig[0], r["R01"])
    r["R31"] = sphere.apply(sig[0], r["R02"])
    r["R13"] = sphere.apply(sig[1], r["R02"])
    r["R12"] = sphere.apply(sig[1], r["R03"])
    r["R21"] = sphere.apply(sig[2], r["R03"])
    r["R23"] = sphere.apply(sig[2], r["R01"])

    s4 = center(g[1], g[2])
    s5 = center(g[2], g[3])
    s6 = center(g[3], g[1])
    sig += [sphere.halfturn_about(s) for s in (s4, s5, s6)]

    h0_a = sphere.apply(sig[3], h[3]).reversed()
    h0_b = sphere.apply(sig[4], h[1]).reversed()
    h0_c = sphere.apply(sig[5], h[2]).reversed()
    coupler_resid = max(
        sphere.circle_distance(h0_a, h0_b), sphere.circle_distance(h0_a, h0_c)
    )
    h[0] = h0_a

    r["R20"] = sphere.apply(sig[3], r["R13"])
    r["R10"] = sphere.apply(sig[3], r["R23"])
    r["R30"] = sphere.apply(sig[4], r["R21"])
    joint_resid = max(
        float(np.linalg.norm(sphere.apply(sig[4], r["R31"]).v - r["R20"].v)),
        float(np.linalg.norm(sphere.apply(sig[5], r["R32"]).v - r["R10"].v)),
        float(np.linalg.norm(sphere.apply(sig[5], r["R12"]).v - r["R30"].v)),
    )

    incidence = max(
        max(sphere.lies_on(r[k], g[int(k[1])]), sphere.lies_on(r[k], h[int(k[2])]))
        for k in JOINT_KEYS
    )

    centers = (s1, s2, s3, s4, s5, s6)
    stack = np.array([c.v for c in centers])
    _, _, vt = np.linalg.svd(stack)
    n_dir = vt[2] * sphere.tie_break_sign(vt[2])
    n_circle = OrientedGreatCircle(n_dir)
    centers_resid = float(np.max(np.abs(stack @ n_circle.n)))

    closure = max(coupler_resid, joint_resid, incidence, centers_resid)
    if closure > _CLOSURE_TOL:
        raise ClosureFailure(f"spherical 8-bar failed to close (residual {closure:.3e})")

    t1, t2 = _bisector_circles(centers, n_circle)
    return EightBarPose(
        spec=v,
        phi=phi,
        g=tuple(g),
        h=tuple(h),
        joints=dict(sorted(r.items())),
        centers=centers,
        n_circle=n_circle,
        n_pole=n_circle.pole(),
        t1=t1,
        t2=t2,
        aligned=False,
        closure_residual=closure,
    )


def _bisector_circles(centers, n_circle):
    """Orthogonal circles through the pole of n bisecting the center pairs
    (S1, S4), cross-checked against the other pairs by the report."""
    pairs = ((0, 3), (1, 4), (2, 5))
    n_dir = n_circle.n
    for i, j in pairs:
        plus = centers[i].v + centers[j].v
        minus = centers[i].v - centers[j].v
        if np.linalg.norm(plus) > 1e-6 and np.linalg.norm(minus) > 1e-6:
            b_plus = plus / np.linalg.norm(plus)
            b_minus = minus / np.linalg.norm(minus)
            w1 = np.cross(n_dir, b_plus)
            w2 = np.cross(n_dir, b_minus)
            t1 = OrientedGreatCircle(w1 * sphere.tie_break_sign(w1))
            t2 = OrientedGreatCircle(w2 * sphere.tie_break_sign(w2))
            return t1, t2
    raise ClosureFailure("all symmetry-center pairs degenerate; cannot place bisector circles")


def _collapse_signs(flipped: bool) -> tuple[list[float], list[float]]:
    """Limit orientations of the bars at the aligned poses relative to g0.

    The symmetry centers tend to the plane of g0 as the pose collapses, so
    the coupler half-turns negate g0's normal exactly: every g-bar keeps
    g0's orientation at both aligned poses, while the h-bars keep it at
    phi = 0 and reverse it at the flip pose phi = pi.
    """
    sign_g = [1.0, 1.0, 1.0, 1.0]
    sign_h = [-1.0, -1.0, -1.0, -1.0] if flipped else [1.0, 1.0, 1.0, 1.0]
    return sign_g, sign_h


def _assemble_spherical_aligned(v: ValidatedSpherical, phi1: float) -> EightBarPose:
    """Aligned (collapsed) pose: exact joint layout on g0 from the rigid
    on-bar arc offsets, which are measured once at a probe pose."""
    flipped = abs(phi1) > 1.0  # phi1 ~ +-pi
    probe = None
    err = None
    for cand in _PROBE_ANGLES:
        try:
            probe = _assemble_spherical_regular(v, cand)
            break
        except ClosureFailure as exc:  # rare degenerate probe angle
            err = exc
    if probe is None:
        raise ClosureFailure(f"no usable probe pose for the aligned layout: {err}")

    def signed_arc(circle: OrientedGreatCircle, a: SpherePoint, b: SpherePoint) -> float:
        return float(
            np.arctan2(np.dot(np.cross(a.v, b.v), circle.n), np.dot(a.v, b.v))
        )

    ez = np.array([0.0, 0.0, 1.0])
    sign_g, sign_h = _collapse_signs(flipped)

    angles: dict[str, float] = {f"R0{j}": v.u[j - 1] for j in (1, 2, 3)}
    for j in (1, 2, 3):
        for i in range(4):
            if i in (0, j):
                continue
            key = f"R{i}{j}"
            arc = signed_arc(probe.h[j], probe.joints[f"R0{j}"], probe.joints[key])
            angles[key] = v.u[j - 1] + sign_h[j] * arc
    for i in (1, 2, 3):
        anchor = next(f"R{i}{j}" for j in (1, 2, 3) if j != i)
        arc = signed_arc(probe.g[i], probe.joints[anchor], probe.joints[f"R{i}0"])
        angles[f"R{i}0"] = angles[anchor] + sign_g[i] * arc

    joints = {k: _base_point(a) for k, a in sorted(angles.items())}
    g = tuple(OrientedGreatCircle(sign_g[i] * ez) for i in range(4))
    h = tuple(OrientedGreatCircle(sign_h[j] * ez) for j in range(4))
    return EightBarPose(
        spec=v,
        phi=_phis(v, phi1),
        g=g,
        h=h,
        joints=joints,
        centers=None,
        n_circle=None,
        n_pole=None,
        t1=None,
        t2=None,
        aligned=True,
        closure_residual=0.0,
    )


# ---------------------------------------------------------------------------
# Reports (spherical)
# ---------------------------------------------------------------------------


def _rho_axis_vs(r: SphericalRotation, p: SpherePoint) -> float:
    axis = r.q[1:] / np.linalg.norm(r.q[1:])
    return float(min(np.linalg.norm(axis - p.v), np.linalg.norm(axis + p.v)))


def _point_pair_mirror(t: OrientedGreatCircle, x: SpherePoint, y: SpherePoint) -> float:
    img = sphere.reflect_in_circle(t, x)
    return float(min(np.linalg.norm(img.v - y.v), np.linalg.norm(img.v + y.v)))


def halfturn_products_report(pose: EightBarPose) -> dict[str, float]:
    """Residuals of the half-turn product identities and the derived
    symmetry statements at a non-collapsed pose. All entries are distances
    (quaternion distances up to sign for displacement identities)."""
    if pose.aligned:
        raise CollapsedPose("half-turn products are undefined at the aligned pose")
    sig = [sphere.halfturn_about(s) for s in pose.centers]
    g, h = pose.g, pose.h
    comp = sphere.compose
    rep: dict[str, float] = {}

    mapping_table = (
        ("sigma1_swaps_g0_g3", sig[0], g[0], g[3]),
        ("sigma1_swaps_h1_h2", sig[0], h[1], h[2]),
        ("sigma2_swaps_g0_g1", sig[1], g[0], g[1]),
        ("sigma2_swaps_h2_h3", sig[1], h[2], h[3]),
        ("sigma3_swaps_g0_g2", sig[2], g[0], g[2]),
        ("sigma3_swaps_h3_h1", sig[2], h[3], h[1]),
        ("sigma4_swaps_g1_g2", sig[3], g[1], g[2]),
        ("sigma5_swaps_g2_g3", sig[4], g[2], g[3]),
        ("sigma6_swaps_g3_g1", sig[5], g[3], g[1]),
    )
    for key, s, src, dst in mapping_table:
        rep[key] = sphere.circle_distance(sphere.apply(s, src), dst.reversed())

    tau321 = comp(sig[2], comp(sig[1], sig[0]))
    tau654 = comp(sig[5], comp(sig[4], sig[3]))
    rep["sigma3_conjugates_rho21"] = sphere.rotation_distance(
        comp(sig[2], comp(comp(sig[1], sig[0]), sig[2])), comp(sig[0], sig[1])
    )
    rep["tau321_involutive"] = sphere.rotation_distance(tau321, sphere.inverse(tau321))
    rep["tau321_halfturn"] = float(abs(tau321.q[0]))
    rep["tau321_axis_in_h1"] = float(abs(np.dot(tau321.axis().v, h[1].n)))
    rep["tau321_axis_in_n"] = float(abs(np.dot(tau321.axis().v, pose.n_circle.n)))
    rep["tau654_halfturn"] = float(abs(tau654.q[0]))
    rep["tau654_axis_in_g1"] = float(abs(np.dot(tau654.axis().v, g[1].n)))
    rep["tau654_axis_in_n"] = float(abs(np.dot(tau654.axis().v, pose.n_circle.n)))
    rep["tau_axes_mirror_t1"] = _point_pair_mirror(pose.t1, tau321.axis(), tau654.axis())
    rep["tau_axes_mirror_t2"] = _point_pair_mirror(pose.t2, tau321.axis(), tau654.axis())

    rho61 = comp(sig[5], sig[0])
    rho42 = comp(sig[3], sig[1])
    rho53 = comp(sig[4], sig[2])
    rep["rho42_eq_rho51"] = sphere.rotation_distance(rho42, comp(sig[4], sig[0]))
    rep["rho62_eq_rho53"] = sphere.rotation_distance(comp(sig[5], sig[1]), comp(sig[4], sig[2]))
    rep["rho61_eq_rho43"] = sphere.rotation_distance(comp(sig[5], sig[0]), comp(sig[3], sig[2]))
    for key, rho, gi, hi in (
        ("rho61", rho61, g[1], h[1]),
        ("rho42", rho42, g[2], h[2]),
        ("rho53", rho53, g[3], h[3]),
    ):
        rep[f"{key}_maps_g0"] = sphere.circle_distance(sphere.apply(rho, g[0]), gi)
        rep[f"{key}_maps_h"] = sphere.circle_distance(sphere.apply(rho, hi), h[0])
        rep[f"{key}_axis_on_N"] = _rho_axis_vs(rho, pose.n_pole)

    rep["rho54_eq_rho12"] = sphere.rotation_distance(comp(sig[4], sig[3]), comp(sig[0], sig[1]))
    rep["rho65_eq_rho23"] = sphere.rotation_distance(comp(sig[5], sig[4]), comp(sig[1], sig[2]))
    rep["rho46_eq_rho31"] = sphere.rotation_distance(comp(sig[3], sig[5]), comp(sig[2], sig[0]))

    for t_key, t in (("t1", pose.t1), ("t2", pose.t2)):
        rep[f"{t_key}_swaps_S1S4"] = _point_pair_mirror(t, pose.centers[0], pose.centers[3])
        rep[f"{t_key}_swaps_S2S5"] = _point_pair_mirror(t, pose.centers[1], pose.centers[4])
        rep[f"{t_key}_swaps_S3S6"] = _point_pair_mirror(t, pose.centers[2], pose.centers[5])
    n = pose.n_circle
    for i in range(4):
        xg = SpherePoint(np.cross(n.n, pose.g[i].n))
        xh = SpherePoint(np.cross(n.n, pose.h[i].n))
        rep[f"bisector_t1_g{i}h{i}"] = _point_pair_mirror(pose.t1, xg, xh)
        rep[f"bisector_t2_g{i}h{i}"] = _point_pair_mirror(pose.t2, xg, xh)

    stack = np.array([c.v for c in pose.centers])
    rep["centers_on_n"] = float(np.max(np.abs(stack @ n.n)))
    for quad_key, quad in (
        ("joint_band_10", ("R10", "R01", "R23", "R32")),
        ("joint_band_20", ("R20", "R02", "R31", "R13")),
        ("joint_band_30", ("R30", "R03", "R12", "R21")),
    ):
        ds = [abs(float(np.dot(pose.joints[k].v, n.n))) for k in quad]
        rep[quad_key] = max(ds) - min(ds)
    g_angles = [sphere.circle_angle(n, c) for c in pose.g]
    h_angles = [sphere.circle_angle(n, c) for c in pose.h]
    rep["cohort_angles_g"] = max(g_angles) - min(g_angles)
    rep["cohort_angles_h"] = max(h_angles) - min(h_angles)
    return rep


# ---------------------------------------------------------------------------
# Spatial assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpatialEightBarPose:
    spec: ValidatedSpatial
    phi: tuple[float, float, float]
    g: tuple[OrientedLine, ...]
    h: tuple[OrientedLine, ...]
    hinges: Mapping[str, OrientedLine]
    vertices: Mapping[str, np.ndarray]
    axes: tuple[OrientedLine, ...] | None
    n_line: OrientedLine | None
    t_line: OrientedLine | None
    aligned: bool
    closure_residual: float
    cell_residuals: tuple[float, ...] | None

    def bar(self, key: str) -> OrientedLine:
        return self.g[int(key[1])] if key[0] == "g" else self.h[int(key[1])]


def _base_hinge(u: float, x: float) -> OrientedLine:
    return OrientedLine.from_point_direction(
        np.array([0.0, 0.0, x]), np.array([np.cos(u), np.sin(u), 0.0])
    )


def assemble_spatial(spec, phi1: float) -> SpatialEightBarPose:
    """Pose of the spatial 8-bar at hinge angle phi1; the aligned poses
    (phi1 = 0 or pi) return the collapsed layout on the base line."""
    v = spec if isinstance(spec, ValidatedSpatial) else validate_spec(spec)
    if not isinstance(v, ValidatedSpatial):
        raise TypeError("assemble_spatial needs a spatial spec")
    if _is_aligned_angle(phi1):
        return _assemble_spatial_aligned(v, phi1)
    return _assemble_spatial_regular(v, phi1)


def _assemble_spatial_regular(v: ValidatedSpatial, phi1: float) -> SpatialEightBarPose:
    ang = v.angular
    phi = _phis(ang, phi1)
    g0 = OrientedLine.from_point_direction(np.zeros(3), np.array([0.0, 0.0, 1.0]))
    xs = (0.0, v.a[0], v.a[0] + v.a[1])
    hinge = {f"I0{j}": _base_hinge(ang.u[j - 1], xs[j - 1]) for j in (1, 2, 3)}

    h = [None, None, None, None]
    for j in (1, 2, 3):
        h[j] = screws.apply(screws.rotation_about_line(hinge[f"I0{j}"], phi[j - 1]), g0)

    def axis_between(l1: OrientedLine, l2: OrientedLine) -> OrientedLine:
        try:
            return screws.midline_symmetry_axis(l1, l2.reversed())
        except Exception as exc:
            raise ClosureFailure(f"symmetry axis degenerate away from the aligned pose: {exc}") from exc

    s_axes = [axis_between(h[1], h[2]), axis_between(h[2], h[3]), axis_between(h[3], h[1])]
    sig = [screws.line_reflection(s) for s in s_axes]

    g = [g0, None, None, None]
    g[3] = screws.apply(sig[0], g0).reversed()
    g[1] = screws.apply(sig[1], g0).reversed()
    g[2] = screws.apply(sig[2], g0).reversed()

    hinge["I32"] = screws.apply(sig[0], hinge["I01"])
    hinge["I31"] = screws.apply(sig[0], hinge["I02"])
    hinge["I13"] = screws.apply(sig[1], hinge["I02"])
    hinge["I12"] = screws.apply(sig[1], hinge["I03"])
    hinge["I21"] = screws.apply(sig[2], hinge["I03"])
    hinge["I23"] = screws.apply(sig[2], hinge["I01"])

    s_axes += [axis_between(g[1], g[2]), axis_between(g[2], g[3]), axis_between(g[3], g[1])]
    sig += [screws.line_reflection(s) for s in s_axes[3:]]

    h0_a = screws.apply(sig[3], h[3]).reversed()
    h0_b = screws.apply(sig[4], h[1]).reversed()
    h0_c = screws.apply(sig[5], h[2]).reversed()
    coupler_resid = max(screws.line_distance(h0_a, h0_b), screws.line_distance(h0_a, h0_c))
    h[0] = h0_a

    hinge["I20"] = screws.apply(sig[3], hinge["I13"])
    hinge["I10"] = screws.apply(sig[3], hinge["I23"])
    hinge["I30"] = screws.apply(sig[4], hinge["I21"])
    hinge_resid = max(
        screws.line_distance(screws.apply(sig[4], hinge["I31"]), hinge["I20"]),
        screws.line_distance(screws.apply(sig[5], hinge["I32"]), hinge["I10"]),
        screws.line_distance(screws.apply(sig[5], hinge["I12"]), hinge["I30"]),
    )

    vertices: dict[str, np.ndarray] = {}
    meet_resid = 0.0
    for key in HINGE_KEYS:
        i, j = int(key[1]), int(key[2])
        cp = screws.common_perpendicular(g[i] if i else g0, h[j])
        meet_resid = max(meet_resid, cp.distance)
        vtx = (cp.foot1 + cp.foot2) / 2
        line = hinge[key]
        off = vtx - line.foot()
        meet_resid = max(meet_resid, float(np.linalg.norm(off - np.dot(off, line.d) * line.d)))
        vertices[key] = vtx

    cell_residuals = tuple(_spatial_cell_residual(g, h, hinge, vertices, cell) for cell in CELLS)
    closure = max(coupler_resid, hinge_resid, meet_resid, max(cell_residuals))
    if closure > _CLOSURE_TOL:
        raise ClosureFailure(f"spatial 8-bar failed to close (residual {closure:.3e})")

    cp_n = screws.common_perpendicular(s_axes[0], s_axes[1])
    n_line = cp_n.axis
    s4 = s_axes[3] if np.dot(s_axes[0].d, s_axes[3].d) >= 0 else s_axes[3].reversed()
    t_line = screws.midline_symmetry_axis(s_axes[0], s4)

    return SpatialEightBarPose(
        spec=v,
        phi=phi,
        g=tuple(g),
        h=tuple(h),
        hinges=dict(sorted(hinge.items())),
        vertices=dict(sorted(vertices.items())),
        axes=tuple(s_axes),
        n_line=n_line,
        t_line=t_line,
        aligned=False,
        closure_residual=closure,
        cell_residuals=cell_residuals,
    )


def _spatial_cell_residual(g, h, hinge, vertices, cell) -> float:
    """Bennett-cell closure: sides are common perpendiculars of adjacent
    hinges (orthogonality + incidence) and opposite dual angles agree."""
    (ka, kb, kc, kd), sides = cell
    bars = {k: (g[int(k[1])] if k[0] == "g" else h[int(k[1])]) for k in sides}
    quads = [hinge[f"I{k[1]}{k[2]}"] for k in (ka, kb, kc, kd)]
    verts = [vertices[f"I{k[1]}{k[2]}"] for k in (ka, kb, kc, kd)]
    resid = 0.0
    for idx, side_key in enumerate(sides):
        bar = bars[side_key]
        h1, h2 = quads[idx], quads[(idx + 1) % 4]
        v1, v2 = verts[idx], verts[(idx + 1) % 4]
        resid = max(resid, abs(float(np.dot(bar.d, h1.d))), abs(float(np.dot(bar.d, h2.d))))
        for vv in (v1, v2):
            off = vv - bar.foot()
            resid = max(resid, float(np.linalg.norm(off - np.dot(off, bar.d) * bar.d)))
    ang_ab, off_ab = screws.dual_angle(quads[0], quads[1])
    ang_cd, off_cd = screws.dual_angle(quads[2], quads[3])
    ang_bc, off_bc = screws.dual_angle(quads[1], quads[2])
    ang_da, off_da = screws.dual_angle(quads[3], quads[0])
    resid = max(
        resid,
        abs(ang_ab - ang_cd),
        abs(off_ab - off_cd),
        abs(ang_bc - ang_da),
        abs(off_bc - off_da),
    )
    return resid


def _assemble_spatial_aligned(v: ValidatedSpatial, phi1: float) -> SpatialEightBarPose:
    flipped = abs(phi1) > 1.0
    probe = None
    err = None
    for cand in _PROBE_ANGLES:
        try:
            probe = _assemble_spatial_regular(v, cand)
            break
        except ClosureFailure as exc:
            err = exc
    if probe is None:
        raise ClosureFailure(f"no usable probe pose for the aligned layout: {err}")

    ez = np.array([0.0, 0.0, 1.0])
    sign_g, sign_h = _collapse_signs(flipped)

    ang = v.angular
    xs = (0.0, v.a[0], v.a[0] + v.a[1])
    pos: dict[str, tuple[float, float]] = {
        f"I0{j}": (ang.u[j - 1], xs[j - 1]) for j in (1, 2, 3)
    }
    for j in (1, 2, 3):
        for i in range(4):
            if i in (0, j):
                continue
            key = f"I{i}{j}"
            d_ang, d_off = screws.signed_dual_position(
                probe.h[j], probe.hinges[f"I0{j}"], probe.hinges[key]
            )
            base_u, base_x = pos[f"I0{j}"]
            pos[key] = (base_u + sign_h[j] * d_ang, base_x + sign_h[j] * d_off)
    for i in (1, 2, 3):
        anchor = next(f"I{i}{j}" for j in (1, 2, 3) if j != i)
        d_ang, d_off = screws.signed_dual_position(
            probe.g[i], probe.hinges[anchor], probe.hinges[f"I{i}0"]
        )
        au, ax = pos[anchor]
        pos[f"I{i}0"] = (au + sign_g[i] * d_ang, ax + sign_g[i] * d_off)

    hinges = {
        k: OrientedLine.from_point_direction(
            np.array([0.0, 0.0, z]), np.array([np.cos(u), np.sin(u), 0.0])
        )
        for k, (u, z) in sorted(pos.items())
    }
    vertices = {k: np.array([0.0, 0.0, pos[k][1]]) for k in sorted(pos)}
    g = tuple(OrientedLine(sign_g[i] * ez, np.zeros(3)) for i in range(4))
    h = tuple(OrientedLine(sign_h[j] * ez, np.zeros(3)) for j in range(4))
    return SpatialEightBarPose(
        spec=v,
        phi=_phis(ang, phi1),
        g=g,
        h=h,
        hinges=hinges,
        vertices=vertices,
        axes=None,
        n_line=None,
        t_line=None,
        aligned=True,
        closure_residual=0.0,
        cell_residuals=None,
    )


# ---------------------------------------------------------------------------
# Reports (spatial)
# ---------------------------------------------------------------------------


def _line_mirror(t_refl, a: OrientedLine, b: OrientedLine) -> float:
    return screws.unoriented_line_distance(screws.apply(t_refl, a), b)


def symmetry_report_spatial(pose: SpatialEightBarPose) -> dict[str, float]:
    """Residuals of the spatial symmetry statements: the six cell axes meet a
    common line n orthogonally, helical displacements about n exchange the
    bar cohorts, and the axis t swaps the paired cell axes."""
    if pose.aligned:
        raise CollapsedPose("symmetry elements are undefined at the aligned pose")
    rep: dict[str, float] = {}
    n = pose.n_line
    for k, s in enumerate(pose.axes, start=1):
        cp = screws.common_perpendicular(s, n)
        rep[f"s{k}_meets_n"] = cp.distance
        rep[f"s{k}_orth_n"] = abs(cp.angle - np.pi / 2)

    cp_t = screws.common_perpendicular(pose.t_line, n)
    rep["t_meets_n"] = cp_t.distance
    rep["t_orth_n"] = abs(cp_t.angle - np.pi / 2)
    t_refl = screws.line_reflection(pose.t_line)
    rep["t_swaps_s1s4"] = _line_mirror(t_refl, pose.axes[0], pose.axes[3])
    rep["t_swaps_s2s5"] = _line_mirror(t_refl, pose.axes[1], pose.axes[4])
    rep["t_swaps_s3s6"] = _line_mirror(t_refl, pose.axes[2], pose.axes[5])

    def cyl(line: OrientedLine) -> tuple[float, np.ndarray, float, float]:
        cp = screws.common_perpendicular(n, line)
        z = float(np.dot(cp.foot1 - n.foot(), n.d))
        fold = min(cp.angle, np.pi - cp.angle)
        return z, cp.axis.d, cp.distance, fold

    z0, w0, r0, a0 = cyl(pose.g[0])
    for i in (1, 2, 3):
        zi, wi, _, _ = cyl(pose.g[i])
        theta = float(np.arctan2(np.dot(np.cross(w0, wi), n.d), np.dot(w0, wi)))
        helix = screws.screw_displacement(n, theta, zi - z0)
        rep[f"helix_g0g{i}"] = screws.line_distance(screws.apply(helix, pose.g[0]), pose.g[i])
        rep[f"helix_h{i}h0"] = screws.line_distance(screws.apply(helix, pose.h[i]), pose.h[0])

    g_cyl = [cyl(b) for b in pose.g]
    h_cyl = [cyl(b) for b in pose.h]
    rep["g_dists_to_n"] = max(c[2] for c in g_cyl) - min(c[2] for c in g_cyl)
    rep["h_dists_to_n"] = max(c[2] for c in h_cyl) - min(c[2] for c in h_cyl)
    rep["g_angles_to_n"] = max(c[3] for c in g_cyl) - min(c[3] for c in g_cyl)
    rep["h_angles_to_n"] = max(c[3] for c in h_cyl) - min(c[3] for c in h_cyl)
    for i in range(4):
        cg = screws.common_perpendicular(n, pose.g[i]).axis
        ch = screws.common_perpendicular(n, pose.h[i]).axis
        rep[f"cp_mirror_g{i}h{i}"] = _line_mirror(t_refl, cg, ch)

    rep["cells"] = max(pose.cell_residuals)

    spherical = assemble_spherical(pose.spec.angular, pose.phi[0])
    image = max(
        max(float(np.linalg.norm(pose.g[i].d - spherical.g[i].n)) for i in range(4)),
        max(float(np.linalg.norm(pose.h[j].d - spherical.h[j].n)) for j in range(4)),
        max(
            float(np.linalg.norm(pose.hinges[f"I{k[1]}{k[2]}"].d - spherical.joints[k].v))
            for k in JOINT_KEYS
        ),
    )
    rep["spherical_image"] = image
    return rep


# ---------------------------------------------------------------------------
# Mobility
# ---------------------------------------------------------------------------

_BARS = ("g0", "g1", "g2", "g3", "h0", "h1", "h2", "h3")


def _cube_tree():
    """Deterministic BFS spanning tree of the linkgraph; returns the parent
    joint chain per bar and the chord joints."""
    edges = [(f"g{i}", f"h{j}", f"R{i}{j}") for i in range(4) for j in range(4) if i != j]
    adj: dict[str, list[tuple[str, str]]] = {b: [] for b in _BARS}
    for a, b, key in edges:
        adj[a].append((b, key))
        adj[b].append((a, key))
    for b in adj:
        adj[b].sort()
    parent: dict[str, tuple[str, str] | None] = {"g0": None}
    order = ["g0"]
    queue = ["g0"]
    tree_joints = set()
    while queue:
        cur = queue.pop(0)
        for nxt, key in adj[cur]:
            if nxt not in parent:
                parent[nxt] = (cur, key)
                tree_joints.add(key)
                order.append(nxt)
                queue.append(nxt)
    chords = [(a, b, key) for a, b, key in edges if key not in tree_joints]
    return parent, order, chords


@dataclass(frozen=True)
class MobilitySample:
    phi1: float
    status: str
    nullity: int | None


def _spherical_mobility_residual(pose: EightBarPose):
    parent, order, chords = _cube_tree()
    axes = {key: tuple(pose.joints[key].v) for key in JOINT_KEYS}
    joint_index = {key: idx for idx, key in enumerate(sorted(JOINT_KEYS))}
    from . import kernels

    def residual(theta: np.ndarray) -> np.ndarray:
        disp: dict[str, tuple] = {"g0": (1.0, 0.0, 0.0, 0.0)}
        for bar in order[1:]:
            par, key = parent[bar]
            ang = theta[joint_index[key]]
            ax = axes[key]
            c, s = np.cos(ang / 2), np.sin(ang / 2)
            q = (c, s * ax[0], s * ax[1], s * ax[2])
            disp[bar] = kernels.quat_mul(disp[par], q)
        out = np.empty(3 * len(chords))
        for idx, (a, b, key) in enumerate(chords):
            ang = theta[joint_index[key]]
            ax = axes[key]
            c, s = np.cos(ang / 2), np.sin(ang / 2)
            q = (c, s * ax[0], s * ax[1], s * ax[2])
            m = kernels.quat_mul(kernels.quat_mul(disp[a], q), kernels.quat_conj(disp[b]))
            sgn = 1.0 if m[0] >= 0 else -1.0
            out[3 * idx : 3 * idx + 3] = (sgn * m[1], sgn * m[2], sgn * m[3])
        return out

    return residual


def _spatial_mobility_residual(pose: SpatialEightBarPose):
    parent, order, chords = _cube_tree()
    joint_index = {key: idx for idx, key in enumerate(sorted(JOINT_KEYS))}
    hinge_of = {key: pose.hinges[f"I{key[1]}{key[2]}"] for key in JOINT_KEYS}

    def residual(theta: np.ndarray) -> np.ndarray:
        ident = screws.Displacement.identity()
        disp: dict[str, screws.Displacement] = {"g0": ident}
        for bar in order[1:]:
            par, key = parent[bar]
            rot = screws.rotation_about_line(hinge_of[key], theta[joint_index[key]])
            disp[bar] = screws.compose(disp[par], rot)
        out = np.empty(7 * len(chords))
        for idx, (a, b, key) in enumerate(chords):
            rot = screws.rotation_about_line(hinge_of[key], theta[joint_index[key]])
            m = screws.compose(screws.compose(disp[a], rot), screws.inverse(disp[b]))
            qr, qd = m.q_r, m.q_d
            sgn = 1.0 if qr[0] >= 0 else -1.0
            out[7 * idx : 7 * idx + 7] = (
                sgn * qr[1],
                sgn * qr[2],
                sgn * qr[3],
                sgn * qd[0],
                sgn * qd[1],
                sgn * qd[2],
                sgn * qd[3],
            )
        return out

    return residual


def mobility_check(spec, phi_samples) -> list[MobilitySample]:
    """Numeric Jacobian nullity of the full loop-closure system (all 12
    joint angles, base fixed) at each sampled pose; 1 at regular poses."""
    v = spec if isinstance(spec, (ValidatedSpherical, ValidatedSpatial)) else validate_spec(spec)
    spatial = isinstance(v, ValidatedSpatial)
    out: list[MobilitySample] = []
    for phi1 in phi_samples:
        if _is_aligned_angle(phi1):
            out.append(MobilitySample(phi1, "aligned-bifurcation", None))
            continue
        try:
            pose = assemble_spatial(v, phi1) if spatial else assemble_spherical(v, phi1)
        except ClosureFailure:
            out.append(MobilitySample(phi1, "assembly-failed", None))
            continue
        residual = (
            _spatial_mobility_residual(pose) if spatial else _spherical_mobility_residual(pose)
        )
        nullity = numeric_nullity(residual, np.zeros(len(JOINT_KEYS)))
        out.append(MobilitySample(phi1, "ok", nullity))
    return out


# ---------------------------------------------------------------------------
# Sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSample:
    phi1: float
    pose: EightBarPose | SpatialEightBarPose | None
    families: dict[str, float] | None
    error: str | None


FAMILY_KEYS_SPHERICAL = ("closure", "incidence", "centers", "products", "mapping", "bisector")
FAMILY_KEYS_SPATIAL = ("closure", "cells", "perpendicular", "helical", "axis_t", "cohorts")


def phi_grid(phi_from: float, phi_to: float, n: int, uniform_angle: bool = False) -> list[float]:
    """Sample grid in phi1. Default spacing is uniform in tan(phi/2); ranges
    that touch an odd multiple of pi (where the tangent is singular) fall
    back to uniform angle spacing, which stays regular through the flip."""
    if n < 2:
        raise ValueError("need at least two samples")
    lo, hi = min(phi_from, phi_to), max(phi_from, phi_to)
    k_lo = int(np.ceil((lo - np.pi) / (2 * np.pi)))
    k_hi = int(np.floor((hi - np.pi) / (2 * np.pi)))
    singular = k_lo <= k_hi
    if uniform_angle or singular:
        return [float(x) for x in np.linspace(phi_from, phi_to, n)]
    ts = np.linspace(np.tan(phi_from / 2), np.tan(phi_to / 2), n)
    return [float(2 * np.arctan(t)) for t in ts]


def _spherical_families(pose: EightBarPose, report: dict[str, float] | None) -> dict[str, float]:
    fam = {"closure": pose.closure_residual}
    fam["incidence"] = max(
        max(
            sphere.lies_on(pose.joints[k], pose.g[int(k[1])]),
            sphere.lies_on(pose.joints[k], pose.h[int(k[2])]),
        )
        for k in JOINT_KEYS
    )
    if report is None:
        return fam
    fam["centers"] = report["centers_on_n"]
    fam["products"] = max(
        report[k]
        for k in report
        if k.startswith(("sigma", "tau321_involutive")) or "_eq_" in k
    )
    fam["mapping"] = max(
        report[k] for k in report if "_maps_" in k or k.endswith("_axis_on_N")
    )
    fam["bisector"] = max(
        report[k] for k in report if k.startswith(("bisector", "t1_swaps", "t2_swaps"))
    )
    return fam


def _spatial_families(pose: SpatialEightBarPose, report: dict[str, float] | None) -> dict[str, float]:
    fam = {"closure": pose.closure_residual}
    if report is None:
        return fam
    fam["cells"] = report["cells"]
    fam["perpendicular"] = max(
        report[k] for k in report if k.startswith("s") and ("_meets_n" in k or "_orth_n" in k)
    )
    fam["helical"] = max(report[k] for k in report if k.startswith("helix"))
    fam["axis_t"] = max(
        report[k] for k in report if k.startswith(("t_meets_n", "t_orth_n", "t_swaps", "cp_mirror"))
    )
    fam["cohorts"] = max(
        report[k] for k in report if k.endswith(("dists_to_n", "angles_to_n"))
    )
    return fam


def sweep(spec, phi_from: float, phi_to: float, n: int, uniform_angle: bool = False) -> list[SweepSample]:
    """Pose summaries plus per-family residual maxima over an angle grid.

    Per-sample failures are recorded in the output and do not abort the sweep.
    """
    v = spec if isinstance(spec, (ValidatedSpherical, ValidatedSpatial)) else validate_spec(spec)
    spatial = isinstance(v, ValidatedSpatial)
    samples: list[SweepSample] = []
    for phi1 in phi_grid(phi_from, phi_to, n, uniform_angle):
        try:
            if spatial:
                pose = assemble_spatial(v, phi1)
                report = None if pose.aligned else symmetry_report_spatial(pose)
                fam = _spatial_families(pose, report)
            else:
                pose = assemble_spherical(v, phi1)
                report = None if pose.aligned else halfturn_products_report(pose)
                fam = _spherical_families(pose, report)
            samples.append(SweepSample(phi1, pose, fam, None))
        except (ClosureFailure, CollapsedPose) as exc:
            samples.append(SweepSample(phi1, None, None, f"{type(exc).__name__}: {exc}"))
    return samples
