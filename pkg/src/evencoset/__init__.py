"""Even-order cosets of involution centralizers in alternating groups, and related coset checks."""

__version__ = "0.1.0"

from .perm import (  # noqa: E402
    CycleType,
    Parity,
    Permutation,
    compose,
    cycle_decompose,
    cycle_type,
    from_cycles,
    identity,
    inverse,
    order,
    parity,
    parse_permutation,
    power,
)
from .centralizer import Ambient, CentralizerDesc, build_x, build_y, centralizer_order, x_centralizer_desc  # noqa: E402
from .cosets import CycleTypeCensus, Witness, coset_census  # noqa: E402
from .conjectures import Verdict, conj13_check, conj14_scan_small, verify_main_theorem  # noqa: E402
from .zappa import build_sylow, exhaustive_scan  # noqa: E402
