"""Pure numpy/scipy labeling backend."""

import numpy as np
from scipy import ndimage

_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def label_components(bins):
    """Label maximal 4-connected equal-bin regions.

    Labels are canonical: segment i is the i-th component encountered in
    a raster scan of the plane.
    """
    bins = np.ascontiguousarray(bins, dtype=np.int32)
    raw = np.zeros(bins.shape, dtype=np.int64)
    offset = 1
    for value in np.unique(bins):
        mask = bins == value
        lab, n = ndimage.label(mask, structure=_FOUR_CONNECTED)
        raw[mask] = lab[mask] + offset
        offset += n

    flat = raw.ravel()
    _, first, inverse = np.unique(flat, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty(order.size, dtype=np.int32)
    rank[order] = np.arange(order.size, dtype=np.int32)
    labels = rank[inverse].reshape(bins.shape)

    areas = np.bincount(labels.ravel(), minlength=order.size).astype(np.int64)
    bin_of_segment = bins.ravel()[np.sort(first)].astype(np.int32)
    return labels, areas, bin_of_segment
