"""Connected-component labeling backends.

The compiled Cython kernel is preferred; the numpy/scipy fallback is
selected when the extension is unavailable or when the environment
variable PHONECAM_PURE_KERNELS is set (useful for benchmarking and for
verifying that both backends agree).

Both expose the same contract:

    label_components(bins) -> (labels, areas, bin_of_segment)

where bins is a 2-D integer plane, labels assigns segment ids in
raster-scan order of each 4-connected component's first pixel, areas[i]
is the pixel count of segment i and bin_of_segment[i] its bin value.
"""

import os

if os.environ.get("PHONECAM_PURE_KERNELS"):
    from ._fallback import label_components

    BACKEND = "fallback"
else:
    try:
        from ._labeling import label_components

        BACKEND = "cython"
    except ImportError:
        from ._fallback import label_components

        BACKEND = "fallback"

__all__ = ["label_components", "BACKEND"]
