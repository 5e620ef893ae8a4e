# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend; mirrors _kernels_py exactly."""
from libc.math cimport cos, sin, sqrt

BACKEND = "cython"


def quat_mul(a, b):
    cdef double aw = a[0], ax = a[1], ay = a[2], az = a[3]
    cdef double bw = b[0], bx = b[1], by = b[2], bz = b[3]
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def quat_conj(a):
    return (a[0], -a[1], -a[2], -a[3])


def quat_normalize(a):
    cdef double w = a[0], x = a[1], y = a[2], z = a[3]
    cdef double n = sqrt(w * w + x * x + y * y + z * z)
    return (w / n, x / n, y / n, z / n)


def quat_rotate(q, v):
    cdef double w = q[0], x = q[1], y = q[2], z = q[3]
    cdef double vx = v[0], vy = v[1], vz = v[2]
    cdef double tx = 2.0 * (y * vz - z * vy)
    cdef double ty = 2.0 * (z * vx - x * vz)
    cdef double tz = 2.0 * (x * vy - y * vx)
    return (
        vx + w * tx + y * tz - z * ty,
        vy + w * ty + z * tx - x * tz,
        vz + w * tz + x * ty - y * tx,
    )


cdef inline void _qmul8(double* o, double* a, double* b) nogil:
    # full dual quaternion product into o[0..7]
    o[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    o[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2]
    o[2] = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1]
    o[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]
    o[4] = a[0] * b[4] - a[1] * b[5] - a[2] * b[6] - a[3] * b[7] \
         + a[4] * b[0] - a[5] * b[1] - a[6] * b[2] - a[7] * b[3]
    o[5] = a[0] * b[5] + a[1] * b[4] + a[2] * b[7] - a[3] * b[6] \
         + a[4] * b[1] + a[5] * b[0] + a[6] * b[3] - a[7] * b[2]
    o[6] = a[0] * b[6] - a[1] * b[7] + a[2] * b[4] + a[3] * b[5] \
         + a[4] * b[2] - a[5] * b[3] + a[6] * b[0] + a[7] * b[1]
    o[7] = a[0] * b[7] + a[1] * b[6] - a[2] * b[5] + a[3] * b[4] \
         + a[4] * b[3] + a[5] * b[2] - a[6] * b[1] + a[7] * b[0]


def dq_mul(a, b):
    cdef double aa[8]
    cdef double bb[8]
    cdef double oo[8]
    cdef int k
    for k in range(8):
        aa[k] = a[k]
        bb[k] = b[k]
    _qmul8(oo, aa, bb)
    return (oo[0], oo[1], oo[2], oo[3], oo[4], oo[5], oo[6], oo[7])


def loop_closure_quat(thetas, arcs):
    cdef double w = 1.0, x = 0.0, y = 0.0, z = 0.0
    cdef double ch, sh, ca, sa, nw, nx, ny, nz
    cdef double th, al
    cdef Py_ssize_t k, n = len(thetas)
    for k in range(n):
        th = thetas[k]
        al = arcs[k]
        ch = cos(0.5 * th)
        sh = sin(0.5 * th)
        nw = w * ch - z * sh
        nx = x * ch + y * sh
        ny = y * ch - x * sh
        nz = z * ch + w * sh
        w, x, y, z = nw, nx, ny, nz
        ca = cos(0.5 * al)
        sa = sin(0.5 * al)
        nw = w * ca - x * sa
        nx = x * ca + w * sa
        ny = y * ca + z * sa
        nz = z * ca - y * sa
        w, x, y, z = nw, nx, ny, nz
    return (w, x, y, z)


def loop_closure_dq(thetas, arcs, lens):
    cdef double m[8]
    cdef double rz[8]
    cdef double sx[8]
    cdef double tmp[8]
    cdef double out[8]
    cdef double ch, sh, ca, sa, hl
    cdef Py_ssize_t k, j, n = len(thetas)
    for j in range(8):
        m[j] = 0.0
        rz[j] = 0.0
        sx[j] = 0.0
    m[0] = 1.0
    for k in range(n):
        ch = cos(0.5 * <double> thetas[k])
        sh = sin(0.5 * <double> thetas[k])
        rz[0] = ch
        rz[3] = sh
        ca = cos(0.5 * <double> arcs[k])
        sa = sin(0.5 * <double> arcs[k])
        hl = 0.5 * <double> lens[k]
        sx[0] = ca
        sx[1] = sa
        sx[4] = -hl * sa
        sx[5] = hl * ca
        _qmul8(tmp, rz, sx)
        _qmul8(out, m, tmp)
        for j in range(8):
            m[j] = out[j]
    return (m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7])
