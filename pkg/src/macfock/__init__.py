"""macfock: exact symbolic Macdonald processes through free-field operators.

Everything is exact: coefficients live in Q(q^(1/4), t^(1/4)) with big-integer
arithmetic, series are truncated polynomials with explicit cutoffs, and every
identity check is an equality of canonical forms, never a numerical
comparison.
"""

from .errors import (ArityMismatch, DenominatorVanishes, DivisionByZero,
                     MacfockError, NonPolynomialResult, NonzeroCharge,
                     NotSymmetric, PoleAtPoint, SingularGram, SingularSystem,
                     UnsupportedObservable, WindowTooSmall)
from .scalars import (ONE, Q, T, ZERO, PolyRing, RatFunc, TruncPoly,
                      q_pochhammer, qt)
from .partitions import (MayaDiagram, Partition, PartitionTuple,
                         dominance_leq, enumerate_partitions,
                         enumerate_tuples, maya_from_partition,
                         partition_from_maya, partitions_up_to,
                         tuple_dominance_leq, tuples_up_to, zlambda)
from .symfunc import (SymFunc, coproduct, from_e, from_g, from_h, from_m,
                      from_s, inner_product, multiply, specialize,
                      specialize_principal, to_m, to_p_basis)
from .macdonald import (DifferenceOperatorSpec, apply_difference_operator,
                        check_partial_fraction_identity,
                        difference_eigenvalue, eigencheck_difference,
                        macdonald_P, macdonald_Q, macdonald_norm, skew_PQ)
from .fock import (ETA, GAMMA_MINUS, GAMMA_PLUS, PHI_MINUS, PHI_PLUS, XI,
                   FockVector, VertexFactor, VertexSeries, cauchy_product,
                   free_field_operator, gamma_apply, heisenberg_apply,
                   kernel_constant_term, ope_scalar_series, pairing,
                   residue_D, schur_limit_checks, vertex_product_apply)
from .process import (KernelSpec, Observable, ProcessSpec,
                      correlation_direct, correlation_operator,
                      expectation_generating_series, fredholm_det,
                      measure_weight, multilevel_formula, observable_value,
                      process_weight, q_whittaker_limit_check)
from .dim import (TensorFockVector, dim_current_apply, dim_x0_apply,
                  expectation_identity_check, generalized_cauchy_sum,
                  generalized_eigenvalue, generalized_macdonald_P,
                  generalized_macdonald_Q, generalized_measure_weight,
                  phi_gamma_exchange_coeffs, regularized_expectation)

__version__ = "0.1.0"
