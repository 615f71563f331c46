"""Exact-arithmetic verification engine for the so(5) Yangian.

Submodules
----------
algebra_core  exact Gaussian-rational scalars and sparse matrices
so5_rep       Clifford set, spinor and vector generators, Cartan-Weyl map
rmatrix       braid R-matrix, Yang-Baxter and unitarity checks
rtt_engine    RTT relation extraction, Lax and monodromy representations
drinfeld      Drinfel'd relations, Serre relation, Cartan-Weyl tables
fock_chain    fermion chain realization of the level-1 and level-2 charges
report, cli   suite orchestration and command-line front end
"""

__version__ = "0.1.0"
