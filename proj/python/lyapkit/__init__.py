"""Low-rank solvers for large-scale Lyapunov equations A X + X A^T + B B^T = 0.

The heavy lifting lives in the compiled extension; this package re-exports the
main entry points.  `solve` accepts a scipy.sparse matrix A and a dense B and
returns (Z, shifts, report) with Z Z^T ~= X.
"""

from ._lyapkit import (
    dense_lyap_residual,
    gen_convdiff3d,
    gen_laplacian2d,
    kron_lyap_solve,
    solve,
)

__all__ = [
    "solve",
    "gen_laplacian2d",
    "gen_convdiff3d",
    "kron_lyap_solve",
    "dense_lyap_residual",
]
