"""EP-based turbo equalization for ISI channels.

Block (nuBEP) and filter-type (EP-F) expectation-propagation turbo
equalizers, with BCJR, block LMMSE, LMMSE-filter and BEP baselines,
plus the Monte-Carlo BER and EXIT-chart machinery to compare them.
"""

from .channel import (ChannelModel, WindowSpec, build_block_matrix,
                      build_window_matrix, default_window, make_channel,
                      transmit, PRESETS)
from .coding import Interleaver, LdpcCode, bp_decode, build_ldpc, encode
from .equalizers import (BEP_PARAMS, EpParams, EqualizerReport, bcjr_equalize,
                         bep_equalize, beta_schedule, block_lmmse_equalize,
                         epf_equalize, equalize, lmmse_filter_equalize,
                         moment_match_damp, nubep_equalize,
                         EQUALIZER_NAMES)
from .evaluation import (BerRecord, ExitRecord, ber_sweep, ber_threshold,
                         exit_decoder, exit_equalizer, j_function, j_inverse,
                         measure_mi, write_csv)
from .modem import (Constellation, SymbolPriors, build_constellation,
                    demap_extrinsic, hard_demap, map_bits, prior_from_llr,
                    uniform_priors)
from .numerics import (GaussianMsg, NonPositiveVarianceError,
                       SingularMatrixError, gaussian_divide, gaussian_product,
                       hermitian_solve)
from .turbo import FrameResult, LinkConfig, TurboLink, run_frame

__version__ = "0.1.0"
