# coding: utf-8

# # Drawing the planar charts
#
# Iso-coordinate curves of the four planar charts in the Klein and Poincare
# disks, written as SVG files next to this script.

# In[1]:

from pathlib import Path

from hyperatlas.render import RenderSpec, curves, write_svg

out = Path(__file__).with_name("figures")
out.mkdir(exist_ok=True)

# In[2]:

for chart in ("polar2", "hyperbolic2", "exponential2", "symmetric2"):
    for projection in ("klein", "poincare"):
        path = write_svg(RenderSpec(chart, projection), out / f"{chart}-{projection}.svg")
        print(path)

# In the Klein disk geodesics are straight chords. The iso-rho curves of the
# hyperbolic chart are geodesics, so each polyline is a straight segment.

# In[3]:

import numpy as np

for axis, value, pts in curves(RenderSpec("hyperbolic2", "klein", iso=((), (0.0, 1.0)))):
    d = pts[-1] - pts[0]
    dev = np.abs(np.cross(d, pts - pts[0])) / np.hypot(*d)
    print(f"iso value {value}: max distance from chord {dev.max():.2e} px")
