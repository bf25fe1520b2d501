# coding: utf-8

# # A tour of the charts
#
# Every chart maps a box of coordinates onto the upper sheet of the
# hyperboloid x.x = -1 in Minkowski space. Here we list the catalogue, push a
# point through one chart and pull it back through another.

# In[1]:

import numpy as np

from hyperatlas import charts
from hyperatlas.ambient import constraint_residual, horolation, rotation

# In[2]:

for desc in charts.list_charts():
    print(f"{desc.id:24s} dim={desc.dim} coords={desc.coord_names} separable={desc.separable}")

# A point in geodesic polar coordinates, then the same point in the
# horocyclic (exponential) chart.

# In[3]:

p = charts.to_ambient(charts.ChartPoint("polar2", np.array([1.2, 0.7])))
print("ambient", p.coords, "residual", constraint_residual(p.coords))
q = charts.from_ambient("exponential2", p)
print("exponential2 coords", q.coords)
back = charts.forward("exponential2", q.coords)
print("round trip error", np.abs(back - p.coords).max())

# Rotations and horolations are Lorentz transformations: they keep the
# Minkowski form and compose additively in their parameter.

# In[4]:

R = rotation(2, 0.3) @ rotation(2, 0.4)
print("R(0.3)R(0.4) - R(0.7):", np.abs(R.matrix - rotation(2, 0.7).matrix).max())
M = horolation(0.5, 2)
x = M.matrix @ p.coords
print("horolated point stays on the sheet:", constraint_residual(x))

# Sampling the interior of every chart and checking the constraint.

# In[5]:

rng = np.random.default_rng(0)
for desc in charts.list_charts():
    x = charts.forward(desc, charts.sample_interior(desc, 1000, rng))
    print(f"{desc.id:24s} max |x.x + 1| = {np.abs(constraint_residual(x)).max():.1e}")
