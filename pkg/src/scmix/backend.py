"""Pixel-kernel backend selection.

The compiled extension is preferred when it imported cleanly; otherwise the
NumPy implementations take over. Both produce bit-identical output, so the
choice only affects speed. Set ``SCMIX_BACKEND=pure`` or
``SCMIX_BACKEND=compiled`` to force one (forcing the compiled backend without
the built extension raises at import time).
"""

from __future__ import annotations

import os

from . import _pure

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built; NumPy fallback still works
    _compiled = None


def available_backends() -> dict[str, object]:
    impls = {"pure": _pure}
    if _compiled is not None:
        impls["compiled"] = _compiled
    return impls


def _select():
    requested = os.environ.get("SCMIX_BACKEND", "").strip().lower()
    if requested == "pure":
        return _pure
    if requested == "compiled":
        if _compiled is None:
            raise ImportError(
                "SCMIX_BACKEND=compiled but the scmix._kernels extension "
                "is not built; install the package normally or unset the "
                "variable"
            )
        return _compiled
    if requested:
        raise ValueError(
            f"SCMIX_BACKEND={requested!r} not recognised (use 'pure' or "
            "'compiled')"
        )
    return _compiled if _compiled is not None else _pure


_impl = _select()

ACTIVE_BACKEND: str = _impl.NAME

bilinear_resize = _impl.bilinear_resize
area_downscale = _impl.area_downscale
box_blur = _impl.box_blur
scmix_1 = _impl.scmix_1
scmix_3b = _impl.scmix_3b
scmix_6 = _impl.scmix_6
ostwald_checker = _impl.ostwald_checker
ostwald_random = _impl.ostwald_random
ostwald_rgb = _impl.ostwald_rgb
