"""Fisher-Rao geometry of positive probability densities on a quadrature mesh.

Closed-form geodesics, the distance ``ell = 2 arccos(Hellinger affinity)``,
exponential and logarithm maps, normalized means, exponential charts and a
sphere-embedding oracle that cross-checks all of it.
"""
from frgeom._backend import BACKEND
from frgeom.charts import (ChartVector, chart_forward, chart_inverse, chart_transition,
                           covariance_metric, geometric_mean_in_coords, mixture_arc_bounds,
                           positivity_radius)
from frgeom.errors import (DegenerateError, DomainError, GeometryError, InvalidDensityError,
                           MeshMismatchError)
from frgeom.geodesics import (GeodesicSegment, ThreeTermCoefficients, exp_domain_contains,
                              exp_map, extended_geodesic, gauss_orthogonality, geodesic_bvp,
                              geodesic_ivp, geodesic_ode_residual, geodesic_three_term, log_map,
                              midpoint, positivity_breakdown, relaxed_antipodal,
                              tangent_line_intersection, three_term_coeffs)
from frgeom.means import (alpha_power_mean, ell_continuity_gap, geometric_mean,
                          phi_continuity_gap)
from frgeom.measure import (Density, NonnegativeDensity, QuadratureMesh, TangentDensity,
                            build_mesh, integrate, make_density, make_tangent, radon_nikodym)
from frgeom.metric import (fisher_inner, fisher_norm, fisher_rao_distance, hellinger_affinity,
                           hellinger_distance, l2_embed, levi_civita)
from frgeom.smoothing import BumpKernel, make_kernel, mollify, mollify_tangent
from frgeom.sphere import (SpherePoint, diameter_witness, embed, oracle_distance,
                           oracle_geodesic, slerp, spherical_triangle_residual, unembed)

__version__ = "0.1.0"
