"""Exact-arithmetic A_l / C_l Bailey transform matrices, pairs and lemma."""

from .bailey import (
    BaileyPair,
    LemmaParamsA,
    LemmaParamsC,
    SequenceOracle,
    a_from_b,
    b_from_a,
    chain,
    lemma_step_a,
    lemma_step_c,
    unit_pair,
)
from .errors import (
    BaileyLabError,
    DomainError,
    ExhaustedAttempts,
    Inadmissible,
    InvalidBase,
    PoleEncountered,
    RankMismatch,
)
from .lattice import Box, MultiIndex, box_enumerate, leq_componentwise
from .qfield import Rational, format_rational, parse_rational, qpoch, qpow
from .transforms import (
    Group,
    ParamsA,
    ParamsC,
    matrix_block,
    m_entry_a,
    m_entry_c,
    mstar_entry_a,
    mstar_entry_c,
)
from .verify import (
    Report,
    SamplerConfig,
    check_bailey_pair,
    check_classical_reduction,
    check_inversion,
    check_lemma,
    check_roundtrip,
    sample_params,
)

__version__ = "0.1.0"
