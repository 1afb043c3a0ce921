"""Space-time cut finite element solver for convection-diffusion equations
in evolving domains defined by level sets.

Subpackages cover the background mesh, 1D and implicit-domain quadrature,
tensor-product space-time finite element spaces, ghost-penalty stabilization
with macroelement partitions, the conservative and non-conservative slab
schemes for bulk and coupled bulk-surface problems, diagnostics, and the
experiment command line driver.
"""

__version__ = "0.1.0"
