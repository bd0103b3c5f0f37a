"""Exact-arithmetic toolkit for K-moduli of quartic K3 surfaces.

Submodules: ``algebra`` (rational polynomials), ``kstability`` (beta and
thresholds), ``git_hm`` (limits, Shah strata), ``weierstrass`` (elliptic K3
pairs), ``toricdeform`` (cones and versal bases), ``walls`` (chambers and
divisor classes) and ``cli``.
"""

__version__ = "0.1.0"
