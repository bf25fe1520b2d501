# coding: utf-8

# # Helmholtz product modes
#
# On separable charts the Helmholtz equation splits into one ordinary
# equation per coordinate. A product of factor solutions then solves the
# full equation; we measure that with a finite-difference Laplace-Beltrami
# operator on a grid.

# In[1]:

import numpy as np

from hyperatlas.helmholtz import ModeSpec, build_mode, draw_spec, separated_odes, verify_mode

# In[2]:

spec = ModeSpec("exponential2", 0.0, lam=1.0)
for ode in separated_odes(spec):
    print(ode)

# The sigma factor has a closed form in modified Bessel functions of order
# one half, which are elementary.

# In[3]:

mode = build_mode(spec)
s = np.linspace(-1, 1, 5)
print([f.method for f in mode.factors])
print(mode.factors[0](s))

# Residual of the product mode, closed form and fully integrated.

# In[4]:

for closed in (True, False):
    rep = verify_mode(spec, closed_form=closed)
    print("closed form" if closed else "integrated", rep.pde.relative_max, rep.passed)

# Random admissible modes on every separable chart.

# In[5]:

rng = np.random.default_rng(2)
for chart in ("spherical-polar", "elliptic-exponential", "parabolic-exponential", "symmetric3"):
    spec = draw_spec(chart, rng)
    rep = verify_mode(spec, closed_form=False)
    print(f"{chart:24s} k2={spec.k2:.2f} residual={rep.pde.relative_max:.1e}")

# The full report is JSON.

# In[6]:

print(verify_mode(ModeSpec("spherical-polar", 2.0, ell=1)).to_json())
