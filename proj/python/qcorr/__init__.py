"""Entropies, discord and entanglement measures for small bipartite quantum states."""

from ._qcorr import (
    DensityMatrix,
    DimSignature,
    IoError,
    ParseError,
    PureState,
    UnsupportedDimension,
    ValidationError,
    bell_state,
    binary_entropy,
    coherent_information,
    concurrence_2q,
    conditional_entropy,
    discord,
    dump_state,
    entanglement_report,
    eof_2q,
    eof_ensemble_oracle,
    eof_via_koashi_winter,
    example_family,
    irreversibility_conditions,
    is_ppt,
    lemma1_check,
    mutual_information,
    parse_state,
    purify,
    random_density_matrix,
    random_pure_state,
    ree_estimate,
    theorem2_report,
    von_neumann_entropy,
    zero_discord_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
