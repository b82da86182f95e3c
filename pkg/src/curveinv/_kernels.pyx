# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise kernels: strict row-major traversal, Kahan compensated
summation inside each row and across rows, so results are deterministic."""

from libc.math cimport sqrt, INFINITY

import numpy as np


cdef inline double _det3(double a0, double a1, double a2,
                         double b0, double b1, double b2,
                         double c0, double c1, double c2) nogil:
    return (a0 * (b1 * c2 - b2 * c1)
            - a1 * (b0 * c2 - b2 * c0)
            + a2 * (b0 * c1 - b1 * c0))


def writhe_sum(double[:, ::1] pos, double[:, ::1] vel, double[::1] weights):
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i, j, prev, nxt
    cdef double total = 0.0, comp = 0.0, row, rowc, y, t
    cdef double c0, c1, c2, d2, term, min_d2 = INFINITY
    with nogil:
        for i in range(n):
            row = 0.0
            rowc = 0.0
            prev = i - 1 if i > 0 else n - 1
            nxt = i + 1 if i < n - 1 else 0
            for j in range(n):
                if j == i:
                    continue
                c0 = pos[i, 0] - pos[j, 0]
                c1 = pos[i, 1] - pos[j, 1]
                c2 = pos[i, 2] - pos[j, 2]
                d2 = c0 * c0 + c1 * c1 + c2 * c2
                if j != prev and j != nxt and d2 < min_d2:
                    min_d2 = d2
                term = weights[j] * _det3(vel[i, 0], vel[i, 1], vel[i, 2],
                                          vel[j, 0], vel[j, 1], vel[j, 2],
                                          c0, c1, c2) / (d2 * sqrt(d2))
                y = term - rowc
                t = row + y
                rowc = (t - row) - y
                row = t
            y = weights[i] * row - comp
            t = total + y
            comp = (t - total) - y
            total = t
    return total, sqrt(min_d2)


def linking_sum(double[:, ::1] pos1, double[:, ::1] vel1,
                double[:, ::1] pos2, double[:, ::1] vel2,
                double[::1] w1, double[::1] w2):
    cdef Py_ssize_t n1 = pos1.shape[0], n2 = pos2.shape[0]
    cdef Py_ssize_t i, j
    cdef double total = 0.0, comp = 0.0, row, rowc, y, t
    cdef double c0, c1, c2, d2, term, min_d2 = INFINITY
    with nogil:
        for i in range(n1):
            row = 0.0
            rowc = 0.0
            for j in range(n2):
                c0 = pos1[i, 0] - pos2[j, 0]
                c1 = pos1[i, 1] - pos2[j, 1]
                c2 = pos1[i, 2] - pos2[j, 2]
                d2 = c0 * c0 + c1 * c1 + c2 * c2
                if d2 < min_d2:
                    min_d2 = d2
                term = w2[j] * _det3(vel1[i, 0], vel1[i, 1], vel1[i, 2],
                                     vel2[j, 0], vel2[j, 1], vel2[j, 2],
                                     c0, c1, c2) / (d2 * sqrt(d2))
                y = term - rowc
                t = row + y
                rowc = (t - row) - y
                row = t
            y = w1[i] * row - comp
            t = total + y
            comp = (t - total) - y
            total = t
    return total, sqrt(min_d2)


def gauss_area_sum(double[:, ::1] pos, double[:, ::1] vel, double[::1] weights):
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i, j, prev, nxt
    cdef double total = 0.0, comp = 0.0, row, rowc, y, t
    cdef double c0, c1, c2, d2, d, term, min_d2 = INFINITY
    cdef double p0, p1, p2, vs0, vs1, vs2, vt0, vt1, vt2
    cdef double ps0, ps1, ps2, pt0, pt1, pt2, dots, dott
    with nogil:
        for i in range(n):
            row = 0.0
            rowc = 0.0
            prev = i - 1 if i > 0 else n - 1
            nxt = i + 1 if i < n - 1 else 0
            vs0 = vel[i, 0]
            vs1 = vel[i, 1]
            vs2 = vel[i, 2]
            for j in range(n):
                if j == i:
                    continue
                c0 = pos[i, 0] - pos[j, 0]
                c1 = pos[i, 1] - pos[j, 1]
                c2 = pos[i, 2] - pos[j, 2]
                d2 = c0 * c0 + c1 * c1 + c2 * c2
                if j != prev and j != nxt and d2 < min_d2:
                    min_d2 = d2
                d = sqrt(d2)
                p0 = c0 / d
                p1 = c1 / d
                p2 = c2 / d
                vt0 = -vel[j, 0]
                vt1 = -vel[j, 1]
                vt2 = -vel[j, 2]
                dots = p0 * vs0 + p1 * vs1 + p2 * vs2
                dott = p0 * vt0 + p1 * vt1 + p2 * vt2
                ps0 = (vs0 - p0 * dots) / d
                ps1 = (vs1 - p1 * dots) / d
                ps2 = (vs2 - p2 * dots) / d
                pt0 = (vt0 - p0 * dott) / d
                pt1 = (vt1 - p1 * dott) / d
                pt2 = (vt2 - p2 * dott) / d
                term = weights[j] * _det3(p0, p1, p2, pt0, pt1, pt2, ps0, ps1, ps2)
                y = term - rowc
                t = row + y
                rowc = (t - row) - y
                row = t
            y = weights[i] * row - comp
            t = total + y
            comp = (t - total) - y
            total = t
    return total, sqrt(min_d2)


def min_distance_offdiag(double[:, ::1] pos, bint exclude_neighbors=True):
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i, j, prev, nxt
    cdef double c0, c1, c2, d2, min_d2 = INFINITY
    with nogil:
        for i in range(n):
            prev = i - 1 if i > 0 else n - 1
            nxt = i + 1 if i < n - 1 else 0
            for j in range(i + 1, n):
                if exclude_neighbors and (j == prev or j == nxt):
                    continue
                c0 = pos[i, 0] - pos[j, 0]
                c1 = pos[i, 1] - pos[j, 1]
                c2 = pos[i, 2] - pos[j, 2]
                d2 = c0 * c0 + c1 * c1 + c2 * c2
                if d2 < min_d2:
                    min_d2 = d2
    return sqrt(min_d2)


def doubly_critical_distance(double[:, ::1] pos, double[:, ::1] tangents,
                             double cos_tol=0.2):
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i, j, sep
    cdef double c0, c1, c2, d2, d, a1, a2
    cdef double best = INFINITY, fallback = INFINITY
    cdef Py_ssize_t quarter = n / 4
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                sep = j - i
                if n - sep < sep:
                    sep = n - sep
                if sep <= 1:
                    continue
                c0 = pos[i, 0] - pos[j, 0]
                c1 = pos[i, 1] - pos[j, 1]
                c2 = pos[i, 2] - pos[j, 2]
                d2 = c0 * c0 + c1 * c1 + c2 * c2
                d = sqrt(d2)
                if sep > quarter and d < fallback:
                    fallback = d
                if d >= best:
                    continue
                a1 = c0 * tangents[i, 0] + c1 * tangents[i, 1] + c2 * tangents[i, 2]
                if a1 < 0:
                    a1 = -a1
                a2 = c0 * tangents[j, 0] + c1 * tangents[j, 1] + c2 * tangents[j, 2]
                if a2 < 0:
                    a2 = -a2
                if a1 < cos_tol * d and a2 < cos_tol * d:
                    best = d
    if best == INFINITY:
        return fallback
    return best
