"""Triangulations, their relative handlebodies and doubles.

Core entry points are re-exported here; see the submodules for the rest.
"""

from .census import automorphisms, canonical_form, enumerate_census, is_isomorphic
from .geometry import V_OCTAHEDRON, certify, cusp_shapes, lobachevsky, volume_report
from .group_builder import realize_group
from .groups import FiniteGroupTable, group_from_spec
from .homology import abelianized_pi1, h1_double, h1_meridinal_filling
from .polyhedron import SpecialPolyhedron, dual_polyhedron, dual_triangulation
from .snf import AbelianGroup, smith_normal_form
from .triangulation import Triangulation, edge_classes, is_manifold, parse, serialize, vertex_links

__version__ = "0.1.0"
