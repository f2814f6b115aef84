"""plotkit: render casimir-lab CSV artifacts into deterministic figures.

This package consumes only the delimited output files (and their JSON
manifests) emitted by the simulation CLI; it never recomputes physics.
SVG output is byte-reproducible: rendering the same inputs twice yields
identical files, which the test suite asserts.
"""

__version__ = "0.1.0"

from .spec import FigureSpec, load_figure_spec
from .render import render
