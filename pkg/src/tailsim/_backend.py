"""Kernel backend selection.

The compiled extension (``tailsim._kernels``) is preferred when built;
otherwise the pure-numpy kernels take over transparently.  Set
``TAILSIM_BACKEND=pure`` or ``TAILSIM_BACKEND=compiled`` to force one.
"""

from __future__ import annotations

import os

from . import _kernels_py as _pure

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

_forced = os.environ.get("TAILSIM_BACKEND")
if _forced == "pure":
    _default = _pure
elif _forced == "compiled":
    if _compiled is None:
        raise ImportError(
            "TAILSIM_BACKEND=compiled, but the compiled extension is not built; "
            "run `pip install -e . --no-build-isolation`"
        )
    _default = _compiled
elif _forced is None:
    _default = _compiled if _compiled is not None else _pure
else:
    raise ValueError(f"TAILSIM_BACKEND must be 'pure' or 'compiled', got {_forced!r}")


def default_kernels():
    """Module providing make_forward / make_backprop for new workspaces."""
    return _default


def backend_name() -> str:
    return _default.BACKEND_NAME


def available_backends() -> dict:
    """Name -> kernels module for every importable backend."""
    out = {"pure": _pure}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out


def get_backend(name: str):
    try:
        return available_backends()[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available") from None
