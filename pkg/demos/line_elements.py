# coding: utf-8

# # Certifying line elements
#
# Each chart carries a closed-form diagonal metric. We compare it against the
# numerical pullback J^T eta J of the Minkowski form through the chart map.

# In[1]:

import numpy as np

from hyperatlas import charts, diffops

rng = np.random.default_rng(1)

# In[2]:

desc = charts.get_chart("spherical-polar")
pts = charts.sample_interior(desc, 5, rng)
print("closed form diagonal:\n", desc.metric(pts))
print("numerical pullback diagonal:\n", np.diagonal(diffops.pullback_matrix(desc, pts), axis1=-2, axis2=-1))

# The worst relative deviation and off-diagonal term per chart.

# In[3]:

for desc in charts.list_charts():
    rel, off = diffops.metric_deviation(desc, charts.sample_interior(desc, 200, rng))
    print(f"{desc.id:24s} rel={rel.max():.1e} off={off.max():.1e}")

# A deliberately wrong line element is caught.

# In[4]:

desc = charts.get_chart("polar2")


def wrong(c, a=1.0):
    g = desc.metric(c, a)
    g[..., 1] = np.sinh(c[..., 0])
    return g


rel, _ = diffops.metric_deviation(desc, charts.sample_interior(desc, 50, rng), metric=wrong)
print("corrupted metric, max relative deviation:", rel.max())
