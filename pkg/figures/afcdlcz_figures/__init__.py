"""Figure rendering for the CSV bundles written by ``afcdlcz reproduce``.

This package never recomputes statistics: every number it draws comes from
the documented CSV columns or the preset report JSON.  Rendering is a pure
function of those files, so repeated runs produce byte-identical images.
"""

__version__ = "0.1.0"

from .render import PRESETS, RenderError, render_preset

__all__ = ["PRESETS", "RenderError", "render_preset", "__version__"]
