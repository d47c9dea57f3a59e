"""Set automata toolkit."""

from ._core import (
    ParseError,
    SakitError,
    SetAutomaton,
    check_protocol,
    cvp_eval,
    cvp_word,
    emptiness,
    member,
    membership_to_emptiness,
    nonprimes,
    normalize,
    nrr,
    parse_sa,
    per_k,
    remove_eps_loops,
    run,
    sacvp,
    sasat,
    to_anf,
)

__all__ = [
    "ParseError",
    "SakitError",
    "SetAutomaton",
    "check_protocol",
    "cvp_eval",
    "cvp_word",
    "emptiness",
    "member",
    "membership_to_emptiness",
    "nonprimes",
    "normalize",
    "nrr",
    "parse_sa",
    "per_k",
    "remove_eps_loops",
    "run",
    "sacvp",
    "sasat",
    "to_anf",
]
