"""Exact computations for affine Weyl groups, GKM truncations and equivariant descent."""
from . import affine, descent, gkm, linalg, poly, rootdata
from .affine import (AffineElement, Alcove, StabilizerCertificate, alcove_walk, bruhat_interval,
                     compose, invert, act, length, locate_alcove, stabilizer)
from .descent import (EquivariantModule, FiniteReflectionGroup, cst_check, descends,
                      equivalence_witness, isotropy_trivial, molien_series)
from .gkm import (MomentGraph, adjacency_subalgebra, build_moment_graph, is_section,
                  kernel_equality_report, section_space, separates, verify_beta_section)
from .poly import Poly
from .rootdata import RootDatum, build_root_datum, enumerate_weyl, pi1_class, reflect

__version__ = "0.1.0"
