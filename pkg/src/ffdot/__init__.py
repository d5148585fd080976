"""Dot product sets over F_q^d: characters, indicator-function Fourier
transforms, line-intersection statistics and the bounds built from them."""
from .field import Field, character, inv, make_field
from .geometry import (
    Variety,
    conjugate_paraboloid,
    dot,
    enumerate_lines,
    line_rep,
    norm,
    paraboloid,
    parse_variety,
    project,
    rank,
    sphere,
    unrank,
    variety_contains,
)
from .pointset import (
    PointSet,
    SampleSpec,
    construct_variety,
    paraboloid_split,
    project_set,
    read_set,
    sample,
    translate,
    write_set,
)
from .products import (
    BoundReport,
    NuHistogram,
    bounds,
    distance_set,
    dot_product_set,
    extract_E0,
    nu_histogram,
    pinned_product_set,
)
from .spectral import LineTable, Spectrum, dft, energy_B, line_table, plancherel_defect, salem_constant

__version__ = "0.1.0"
