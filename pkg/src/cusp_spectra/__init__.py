"""cusp-spectra: eigenvalue asymptotics of Robin Laplacians on power-peak domains.

The toolkit verifies, at desk scale, the spectral picture of the Robin
Laplacian on domains with an outward power-like peak |x'| < m x1^p,
1 < p < 2: the effective one-dimensional comparison operator and its
scaling law, Weyl-type counting constants, exact Robin eigenvalues of
intervals and balls via Bessel secular equations, and a 2D finite-element
realization of the model peak through a rectangle change of variables.

Modules
-------
linalg_eig      sparse symmetric pencils: smallest eigenpairs, inertia counts
oned_effective  the 1D comparison operator: FEM, shooting oracle, counting
weyl_count      phase integral and counting-law constants
robin_ball      Robin interval/ball eigenvalues via Bessel secular equations
peak_fem        2D model-peak operators in transformed coordinates
asymptotics     parameter sweeps, power-law fits, experiment reports
cli             command-line front end (CSV + json-lines reports)
"""

__version__ = "0.1.0"

from . import linalg_eig  # noqa: F401

__all__ = ["linalg_eig", "__version__"]
