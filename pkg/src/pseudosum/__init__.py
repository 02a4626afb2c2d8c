"""Pseudo-summation on finite alphabets.

Associative lookup tables define a pseudo-sum x (+) y on a finite alphabet;
this package computes exact laws of i.i.d. pseudo-sums, classifies the
stable laws (fixed points of self-convolution), tests domains of attraction,
and decomposes infinitely divisible laws, with specializations for the
cyclic table (modular addition through a permutation) and the max table.
"""

from .errors import ValidityError
from .lut import (
    Alphabet,
    LutTable,
    apply,
    check_associative,
    check_commutative,
    degenerate_doa_necessary,
    find_idempotents,
    find_identity,
    is_associative,
    verify_left_subtraction,
)
from .dist import (
    CONVERGED,
    CYCLE,
    MAX_ITERATIONS,
    Distribution,
    LimitResult,
    convolve,
    is_stable,
    limit,
    power,
    tv_distance,
)
from .cyclic import (
    IdDecomposition,
    Permutation,
    Spectrum,
    StableLaw,
    classify_stable,
    construct_id,
    decompose_id,
    doa_attractor,
    enumerate_stable,
    from_spectrum,
    in_doa,
    is_infinitely_divisible,
    make_cyclic_lut,
    make_mod_lut,
    multiply_spectra,
    nth_root_oracle,
    relabel,
    spectrum,
    stable_distribution,
)
from .extremal import (
    Cdf,
    make_max_lut,
    max_convolve,
    max_doa,
    max_nth_root,
    max_stable_set,
)
from .montecarlo import SimConfig, empirical_fold, sample_index

__all__ = [
    "Alphabet",
    "Cdf",
    "CONVERGED",
    "CYCLE",
    "Distribution",
    "IdDecomposition",
    "LimitResult",
    "LutTable",
    "MAX_ITERATIONS",
    "Permutation",
    "SimConfig",
    "Spectrum",
    "StableLaw",
    "ValidityError",
    "apply",
    "check_associative",
    "check_commutative",
    "classify_stable",
    "construct_id",
    "convolve",
    "decompose_id",
    "degenerate_doa_necessary",
    "doa_attractor",
    "empirical_fold",
    "enumerate_stable",
    "find_idempotents",
    "find_identity",
    "from_spectrum",
    "in_doa",
    "is_associative",
    "is_infinitely_divisible",
    "is_stable",
    "limit",
    "make_cyclic_lut",
    "make_max_lut",
    "make_mod_lut",
    "max_convolve",
    "max_doa",
    "max_nth_root",
    "max_stable_set",
    "multiply_spectra",
    "nth_root_oracle",
    "power",
    "relabel",
    "sample_index",
    "spectrum",
    "stable_distribution",
    "tv_distance",
    "verify_left_subtraction",
]

__version__ = "0.1.0"
