"""Max-min gift allocation on a simulated CONGEST network."""

from ._core import (
    brute_force_opt,
    generate_mixed,
    generate_path,
    generate_random,
    generate_scn,
    lp_solve,
    solve,
    verify,
)

__all__ = [
    "brute_force_opt",
    "generate_mixed",
    "generate_path",
    "generate_random",
    "generate_scn",
    "lp_solve",
    "solve",
    "verify",
]
