"""Aisles, truncations and tilting complexes over finite-dimensional algebras, in exact arithmetic."""

__version__ = "0.1.0"

from .linalg import QQ, Field, Matrix, kernel_basis, rank, rref, solve
from .algebra import (FDAlgebra, Quiver, Relation, beilinson_algebra, build_bound_quiver_algebra,
                      dual_numbers, field_algebra, graded_hom_dim, kronecker_algebra, radical)
from .rep import (FDModule, ModuleMap, hom_module, minimal_presentation, projective,
                  projective_resolution, simple_module)
from .complexes import (BoundedComplex, ChainMap, DirectedSystem, cone, hocolim_bicomplex,
                        hocolim_sequence, hom_complex, homotopy_class_basis, is_quasi_iso, shift)
from .tstruct import (AisleCertificate, NonTermination, ThickCertificate, TruncationResult,
                      heart_h0, is_compact_presentation, is_exceptional, tau_geq, tau_leq, truncate,
                      verify_generation, window_membership)
from .endo import EndomorphismRing, endomorphism_ring, real_functor_image
from .equivalence import EquivalenceReport, beilinson_pipeline, compare_hom_dims, heart_comparison
