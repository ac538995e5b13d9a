"""Order, majorization and domination checks for matrices and maps between matrix algebras."""
from .core import (DEFAULT_CONFIG, NONCOMMUTATIVE_FUNCTION_SPACE, Certificate, Check,
                   SpaceConstants, ToleranceConfig, eig_hermitian, is_psd, jacobi_eigh,
                   partial_transpose)
from .corpus import ITEMS as CORPUS_ITEMS, PaulsenElement, corpus_run, sample_positive_level_k
from .errors import *  # noqa: F401,F403
from .hierarchy import (Verdict, check_cp, check_decomposable, check_k_positive, check_map,
                        check_positive, dominates)
from .majorization import (SingularSpectrum, TransferMatrix, mu_order_check,
                           order_submajorization_check, pinch, singular_spectrum, submajorizes,
                           symmetric_norm, transfer_certificate)
from .maps import (SuperOperator, conjugation_map, identity_map, make_builtin,
                   multiplication_operator, schur_map, stormer_U, stormer_V, stormer_W,
                   symmetrization_map, trace_times_identity, transpose_map, zero_map)
from .order import (OrderInterval, Truncation, interval_equals_ball_image, interval_member,
                    interval_parameterize, monotone_chain, psol_member, verify_offdiag_inequality)
from .schur import (ObstructionInstance, SchurSymbol, build_obstruction, dp_tail_score,
                    finite_domination_obstruction, formally_positive, obstruction_witness,
                    schur_apply)

__version__ = "0.1.0"
