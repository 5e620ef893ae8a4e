"""Independent numeric loop-closure verification.

Solves single-loop revolute chains by damped Newton on the closure map: the
product of joint rotations and fixed side transfers around the loop must be
the identity. Nothing here evaluates the half-angle transmission law; the
only inputs are side data and an initial guess, so agreement with the
analytic solvers is evidence, not circularity.

Closure map convention (shared with the problem builders): walking the loop,
each joint k contributes Rz(theta_k) about the current joint axis, each side
k a transfer Rx(arc_k) (spherical) or a screw about x with twist arc_k and
translation len_k (spatial). Joint axes are the local z, side directions the
local x of a Denavit-Hartenberg style frame chain.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels


@dataclass(frozen=True)
class LoopProblem:
    """Closed revolute loop: one side per joint, in cyclic order.

    ``angles`` is the full joint vector used as the initial guess; the entry
    at ``driving_index`` is held fixed at its given value during solving.
    """

    arcs: tuple[float, ...]
    driving_index: int
    angles: tuple[float, ...]
    offsets: tuple[float, ...] | None = None  # side lengths; None = spherical

    def __post_init__(self):
        n = len(self.arcs)
        if len(self.angles) != n:
            raise ValueError("cyclic consistency: need one joint angle per side")
        if self.offsets is not None and len(self.offsets) != n:
            raise ValueError("cyclic consistency: need one offset per side")
        if not 0 <= self.driving_index < n:
            raise ValueError("driving index out of range")

    @property
    def spatial(self) -> bool:
        return self.offsets is not None

    def residual(self, angles) -> np.ndarray:
        """Closure residual at a full joint vector (identity product = 0)."""
        if self.offsets is None:
            w, x, y, z = kernels.loop_closure_quat(list(angles), list(self.arcs))
            s = 1.0 if w >= 0 else -1.0
            return np.array([s * x, s * y, s * z])
        m = kernels.loop_closure_dq(list(angles), list(self.arcs), list(self.offsets))
        s = 1.0 if m[0] >= 0 else -1.0
        return np.array([s * m[1], s * m[2], s * m[3], s * m[4], s * m[5], s * m[6], s * m[7]])


@dataclass(frozen=True)
class LoopSolution:
    angles: tuple[float, ...]
    residual_norm: float
    converged: bool
    iterations: int
    residual_history: tuple[float, ...] = field(default=())


def _fd_jacobian(fn, x: np.ndarray, step: float = 1e-6) -> np.ndarray:
    """Central finite differences, column per variable."""
    r0 = fn(x)
    jac = np.empty((r0.size, x.size))
    for k in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[k] += step
        xm[k] -= step
        jac[:, k] = (fn(xp) - fn(xm)) / (2 * step)
    return jac


def solve_loop(problem: LoopProblem, tol: float = 1e-11, max_iter: int = 100) -> LoopSolution:
    """Damped Newton on the loop-closure map with the driving joint fixed.

    Steps are halved (up to 30 times) until the residual norm decreases.
    Non-convergence is reported, not raised: the solution carries the last
    iterate and a converged flag.
    """
    free = [k for k in range(len(problem.arcs)) if k != problem.driving_index]
    full = np.array(problem.angles, dtype=float)

    def fn(x: np.ndarray) -> np.ndarray:
        v = full.copy()
        v[free] = x
        return problem.residual(v)

    x = full[free].copy()
    history: list[float] = []
    it = 0
    for it in range(1, max_iter + 1):
        r = fn(x)
        rn = float(np.linalg.norm(r))
        history.append(rn)
        if rn < tol:
            full[free] = x
            return LoopSolution(tuple(full), rn, True, it, tuple(history))
        jac = _fd_jacobian(fn, x)
        try:
            step = np.linalg.solve(jac, r) if jac.shape[0] == jac.shape[1] else None
        except np.linalg.LinAlgError:
            step = None
        if step is None:
            step = np.linalg.lstsq(jac, r, rcond=None)[0]
        lam = 1.0
        for _ in range(30):
            if float(np.linalg.norm(fn(x - lam * step))) < rn:
                break
            lam /= 2
        x = x - lam * step
    r = fn(x)
    rn = float(np.linalg.norm(r))
    history.append(rn)
    full[free] = x
    return LoopSolution(tuple(full), rn, rn < tol, it, tuple(history))


def numeric_nullity(
    residual_fn,
    x0: np.ndarray,
    fd_step: float = 1e-6,
    sv_ratio: float = 1e-7,
) -> int:
    """Nullity of the finite-difference Jacobian of residual_fn at x0.

    Singular values below sv_ratio times the largest count as zero; for a
    wide Jacobian the missing rows count toward the nullity as well, so this
    is the dimension of the null space in all shapes.
    """
    x0 = np.asarray(x0, dtype=float)
    jac = _fd_jacobian(residual_fn, x0, fd_step)
    sv = np.linalg.svd(jac, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return int(x0.size)
    rank = int(np.sum(sv >= sv_ratio * sv[0]))
    return int(x0.size) - rank


def jacobian_nullity(
    problem: LoopProblem,
    solution: LoopSolution,
    fd_step: float = 1e-6,
    sv_ratio: float = 1e-7,
) -> int:
    """Closure-Jacobian nullity at a solved pose, driving joint included as
    an unknown. 1 means a one-parameter motion through the pose."""
    if solution.residual_norm > 1e-9:
        raise ValueError("jacobian_nullity needs a solved pose (residual < 1e-9)")

    def fn(x: np.ndarray) -> np.ndarray:
        return problem.residual(x)

    return numeric_nullity(fn, np.array(solution.angles), fd_step, sv_ratio)


# ---------------------------------------------------------------------------
# Problem builders: turn pose data (vertices / hinge lines) into loop problems.
# These extract Denavit-Hartenberg style parameters geometrically.
# ---------------------------------------------------------------------------


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def dh_from_spherical_vertices(vertices) -> tuple[np.ndarray, np.ndarray]:
    """(thetas, arcs) of a closed spherical polygon given its vertices.

    Joint axes are the vertex radials z_k; side frames use
    x_k = unit(z_k x z_{k+1}); theta_k is the signed angle about z_k from
    x_{k-1} to x_k, arc_k the positive arc from vertex k to k+1.
    """
    vs = [np.asarray(v, dtype=float) for v in vertices]
    n = len(vs)
    xs = [_unit(np.cross(vs[k], vs[(k + 1) % n])) for k in range(n)]
    thetas = np.empty(n)
    arcs = np.empty(n)
    for k in range(n):
        xin, xout = xs[k - 1], xs[k]
        thetas[k] = np.arctan2(np.dot(np.cross(xin, xout), vs[k]), np.dot(xin, xout))
        nxt = vs[(k + 1) % n]
        arcs[k] = np.arctan2(np.dot(np.cross(vs[k], nxt), xs[k]), np.dot(vs[k], nxt))
    return thetas, arcs


def problem_from_spherical_vertices(vertices, driving_index: int = 0) -> LoopProblem:
    """Loop problem whose exact solution is the given closed polygon."""
    thetas, arcs = dh_from_spherical_vertices(vertices)
    return LoopProblem(tuple(arcs), driving_index, tuple(thetas))


def dh_from_spatial_joints(axes, vertices) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(thetas, twists, lengths) of a closed spatial revolute loop.

    ``axes`` are unit hinge directions z_k, ``vertices`` the loop points V_k
    where consecutive sides meet their shared hinge (zero joint offsets).
    """
    zs = [_unit(np.asarray(a, dtype=float)) for a in axes]
    vs = [np.asarray(v, dtype=float) for v in vertices]
    n = len(zs)
    xs = []
    lens = np.empty(n)
    for k in range(n):
        dv = vs[(k + 1) % n] - vs[k]
        ln = np.linalg.norm(dv)
        lens[k] = ln
        xs.append(dv / ln if ln > 1e-12 else _unit(np.cross(zs[k], zs[(k + 1) % n])))
    thetas = np.empty(n)
    twists = np.empty(n)
    for k in range(n):
        xin, xout = xs[k - 1], xs[k]
        thetas[k] = np.arctan2(np.dot(np.cross(xin, xout), zs[k]), np.dot(xin, xout))
        nz = zs[(k + 1) % n]
        twists[k] = np.arctan2(np.dot(np.cross(zs[k], nz), xs[k]), np.dot(zs[k], nz))
    return thetas, twists, lens


def problem_from_spatial_joints(axes, vertices, driving_index: int = 0) -> LoopProblem:
    thetas, twists, lens = dh_from_spatial_joints(axes, vertices)
    return LoopProblem(tuple(twists), driving_index, tuple(thetas), tuple(lens))
