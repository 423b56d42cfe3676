"""Covering arrays from finite geometry, with brute-force and rank verifiers."""

from ._backend import backend_name
from .construct import (CAFormatError, ConstructError, CoveringArray,
                        GeneratorMatrix, Provenance, build_ca3_projective,
                        build_ca4_full, build_ca4_half, default_ingredient,
                        generator_matrix, half_generators, read_ca,
                        read_rows_only, restrict_columns, span_array, write_ca)
from .fields import (FieldElement, FieldError, FieldTower, PrimePoly,
                     build_tower, find_primitive_poly, is_prime,
                     is_prime_power, is_primitive_poly, tower_for_q, trace)
from .geometry import (AntiCocircularReport, DifferenceSet, GeometryError,
                       LemmaResult, MobiusPlane, Ovoid, build_difference_set,
                       build_full_plane, build_ovoid, build_truncated_planes,
                       check_anti_cocircular, circles_through_zero,
                       dump_plane, plane_from_row_zeros, run_lemma_suite)
from .verify import (CoverageInfeasible, CoverageReport, CrossCheckReport,
                     RankCertificate, StructureReport, VerifyError,
                     auto_engine, cross_check, verify_coverage,
                     verify_rank_cphf, verify_recursive_structure)

__version__ = "0.1.0"
