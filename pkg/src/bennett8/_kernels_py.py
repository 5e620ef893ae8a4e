"""Pure-Python kernel backend.

Scalar quaternion / dual-quaternion primitives used in the closure solver's
inner loop. Quaternions are (w, x, y, z) tuples, dual quaternions flat
8-tuples (real part first). The compiled backend in ``_kernels_cy`` exports
the same names; keep the two implementations in lockstep.
"""
from math import cos, sin, sqrt

BACKEND = "python"


def quat_mul(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def quat_conj(a):
    return (a[0], -a[1], -a[2], -a[3])


def quat_normalize(a):
    n = sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3])
    return (a[0] / n, a[1] / n, a[2] / n, a[3] / n)


def quat_rotate(q, v):
    """Rotate 3-vector v by unit quaternion q (sandwich product)."""
    w, x, y, z = q
    vx, vy, vz = v
    # t = 2 * (u x v), v' = v + w*t + u x t
    tx = 2.0 * (y * vz - z * vy)
    ty = 2.0 * (z * vx - x * vz)
    tz = 2.0 * (x * vy - y * vx)
    return (
        vx + w * tx + y * tz - z * ty,
        vy + w * ty + z * tx - x * tz,
        vz + w * tz + x * ty - y * tx,
    )


def dq_mul(a, b):
    ar = a[:4]
    ad = a[4:]
    br = b[:4]
    bd = b[4:]
    r = quat_mul(ar, br)
    d1 = quat_mul(ar, bd)
    d2 = quat_mul(ad, br)
    return r + (d1[0] + d2[0], d1[1] + d2[1], d1[2] + d2[2], d1[3] + d2[3])


def loop_closure_quat(thetas, arcs):
    """Product over the loop of Rz(theta_k) * Rx(arc_k), as one quaternion.

    This is the spherical joint-rotation / side-transfer chain; it equals
    +-identity exactly when the loop closes.
    """
    w, x, y, z = 1.0, 0.0, 0.0, 0.0
    for th, al in zip(thetas, arcs):
        ch, sh = cos(0.5 * th), sin(0.5 * th)
        # M *= Rz(th)
        w, x, y, z = (w * ch - z * sh, x * ch + y * sh, y * ch - x * sh, z * ch + w * sh)
        ca, sa = cos(0.5 * al), sin(0.5 * al)
        # M *= Rx(al)
        w, x, y, z = (w * ca - x * sa, x * ca + w * sa, y * ca + z * sa, z * ca - y * sa)
    return (w, x, y, z)


def loop_closure_dq(thetas, arcs, lens):
    """Spatial analogue of loop_closure_quat: Rz(theta) followed by a screw
    about x with twist arc_k and translation len_k, multiplied around the loop.
    """
    m = (1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    for th, al, ln in zip(thetas, arcs, lens):
        ch, sh = cos(0.5 * th), sin(0.5 * th)
        rz = (ch, 0.0, 0.0, sh, 0.0, 0.0, 0.0, 0.0)
        ca, sa = cos(0.5 * al), sin(0.5 * al)
        hl = 0.5 * ln
        sx = (ca, sa, 0.0, 0.0, -hl * sa, hl * ca, 0.0, 0.0)
        m = dq_mul(m, dq_mul(rz, sx))
    return m
