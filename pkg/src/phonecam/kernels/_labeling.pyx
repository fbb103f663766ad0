# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled labeling kernel: stack-based flood fill over the bin plane."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def label_components(bins):
    """Label maximal 4-connected equal-bin regions (raster-canonical ids)."""
    bins_arr = np.ascontiguousarray(bins, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] b = bins_arr
    cdef Py_ssize_t h = b.shape[0]
    cdef Py_ssize_t w = b.shape[1]
    cdef Py_ssize_t n = h * w

    labels_arr = np.full((h, w), -1, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] lab = labels_arr
    stack_arr = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t[::1] stack = stack_arr
    # worst case: every pixel is its own segment
    areas_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] areas = areas_arr
    bins_of_arr = np.zeros(n, dtype=np.int32)
    cdef cnp.int32_t[::1] bin_of = bins_of_arr

    cdef Py_ssize_t y, x, idx, cy, cx, top
    cdef cnp.int32_t value
    cdef cnp.int32_t next_label = 0
    cdef cnp.int64_t area

    for y in range(h):
        for x in range(w):
            if lab[y, x] >= 0:
                continue
            value = b[y, x]
            lab[y, x] = next_label
            stack[0] = y * w + x
            top = 0
            area = 0
            while top >= 0:
                idx = stack[top]
                top -= 1
                area += 1
                cy = idx // w
                cx = idx - cy * w
                if cy > 0 and lab[cy - 1, cx] < 0 and b[cy - 1, cx] == value:
                    lab[cy - 1, cx] = next_label
                    top += 1
                    stack[top] = idx - w
                if cy + 1 < h and lab[cy + 1, cx] < 0 and b[cy + 1, cx] == value:
                    lab[cy + 1, cx] = next_label
                    top += 1
                    stack[top] = idx + w
                if cx > 0 and lab[cy, cx - 1] < 0 and b[cy, cx - 1] == value:
                    lab[cy, cx - 1] = next_label
                    top += 1
                    stack[top] = idx - 1
                if cx + 1 < w and lab[cy, cx + 1] < 0 and b[cy, cx + 1] == value:
                    lab[cy, cx + 1] = next_label
                    top += 1
                    stack[top] = idx + 1
            areas[next_label] = area
            bin_of[next_label] = value
            next_label += 1

    return labels_arr, areas_arr[:next_label].copy(), bins_of_arr[:next_label].copy()
