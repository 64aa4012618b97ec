"""Exact arithmetic for ordered Bratteli diagrams and their dynamics.

Submodules:
    diagram    -- construction, validation, incidence, telescoping
    paths      -- finite paths, rank/unrank, the Vershik successor
    ktheory    -- dimension groups, Smith normal form, finite-system oracle
    soe        -- strong orbit equivalence from intertwinings
    generators -- odometers, stationary diagrams, unions, tower systems
    cli        -- the `bratteli` command-line tool
"""

from .diagram import (DiagramError, InvalidDiagram, MalformedDiagram,
                      OrderedBratteliDiagram, check_fem_properties,
                      diagram_from_json, diagram_to_json, incidence_matrix,
                      load_diagram, make_diagram, save_diagram, telescope,
                      validate_diagram)
from .paths import (FinitePath, make_path, orbit_shift, path_rank,
                    path_unrank, vershik_predecessor, vershik_successor)

__version__ = "0.1.0"

__all__ = [
    "DiagramError", "InvalidDiagram", "MalformedDiagram",
    "OrderedBratteliDiagram", "FinitePath",
    "make_diagram", "validate_diagram", "check_fem_properties",
    "incidence_matrix", "telescope",
    "diagram_to_json", "diagram_from_json", "load_diagram", "save_diagram",
    "make_path", "path_rank", "path_unrank",
    "vershik_successor", "vershik_predecessor", "orbit_shift",
    "__version__",
]
