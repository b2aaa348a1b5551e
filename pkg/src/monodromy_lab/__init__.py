"""Exact arithmetic for torsion towers over local function fields.

Library layout:

* ``fields`` / ``series``  -- finite fields and truncated Puiseux series;
* ``polynomials``          -- Weierstrass preparation, Newton polygons and a
                              Newton-Puiseux root oracle;
* ``formal_groups``        -- elliptic formal groups, [p]-decompositions and
                              torsion valuation ladders;
* ``monodromy``            -- multiplicative torsion towers, block Galois
                              groups and the reduction-type classification;
* ``clifford``             -- exact Clifford algebras and boundary weight
                              filtrations;
* ``scenarios`` / ``cli``  -- declarative scenario runner and reports.

All values are immutable after construction and all operations are pure,
so everything here is safe to share across threads.
"""

__version__ = "0.1.0"

from .errors import (
    ComputationError,
    GenericSupersingularError,
    LadderMismatchError,
    MonodromyLabError,
    NotHeightTwoError,
    PrecisionError,
    SchemaError,
)
from .fields import FiniteField, FiniteFieldElement
from .series import DEFAULT_TRUNCATION, INFINITY, PuiseuxSeries

__all__ = [
    "ComputationError",
    "DEFAULT_TRUNCATION",
    "FiniteField",
    "FiniteFieldElement",
    "GenericSupersingularError",
    "INFINITY",
    "LadderMismatchError",
    "MonodromyLabError",
    "NotHeightTwoError",
    "PrecisionError",
    "PuiseuxSeries",
    "SchemaError",
    "__version__",
]
