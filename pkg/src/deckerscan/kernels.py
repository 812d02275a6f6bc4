"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``DECKERSCAN_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("DECKERSCAN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def disjoint_pairs(arc_masks, straight_masks):
    if _impl is not _pykernels:
        try:
            return _impl.disjoint_pairs(arc_masks, straight_masks)
        except OverflowError:
            pass
    return _pykernels.disjoint_pairs(arc_masks, straight_masks)


def reduce_bilinear(vectors, pairs):
    if _impl is not _pykernels:
        try:
            return _impl.reduce_bilinear(vectors, pairs)
        except OverflowError:
            pass
    return _pykernels.reduce_bilinear(vectors, pairs)


def search(rank, genus, rows, required):
    if _impl is not _pykernels:
        try:
            return _impl.search(rank, genus, rows, required)
        except OverflowError:
            pass
    return _pykernels.search(rank, genus, rows, required)
