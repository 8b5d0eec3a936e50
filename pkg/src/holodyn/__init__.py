"""holodyn: rational-map dynamics on the Riemann sphere.

Cycle location and classification, hyperbolicity certificates, the
quadratic family and Mandelbrot set, Lattes maps with their invariant line
fields, external rays and Yoccoz puzzles, and deterministic renderers.
"""

from .cycles import Cycle, classify_multiplier, cycle_multiplier, find_cycles
from .errors import (BranchTrackError, DegenerateError, LandingError,
                     NumericError, PoleError, RootSolveError)
from .expansion import expansion_integral, sphere_sample
from .fileio import read_csv, read_image, write_csv, write_image
from .hyperbolic import (CriticalFate, HyperbolicityCertificate,
                         PostcriticalApprox, hyperbolicity_certificate,
                         postcritical_approx)
from .lattes import (Lattice, eisenstein_g, lattes_map, lattice_invariants,
                     line_field_residual, repelling_density_probe,
                     semiconjugacy_residual, wp, wp_pair, wp_prime, wp_sum)
from .orbits import (OrbitRecord, attracting_limit, iterate_orbit,
                     lyapunov_exponent, polynomial_escape_radius)
from .puzzle import (PuzzlePiece, PuzzleTree, piece_diameters, puzzle_build,
                     winding_number)
from .quad import (AttractorSample, CascadeResult, ChallengeReport,
                   MandelbrotVerdict, WindowRecord, attractor_sample,
                   bifurcation_scan, c_to_logistic, cardioid_or_disk,
                   challenge_report, cluster_points, component_centers,
                   logistic_param, mandelbrot_escape, mandelbrot_escape_grid,
                   quad_attracting_cycle, quad_certificate,
                   superstable_cascade, window_scan)
from .ratmap import (RationalMap, critical_points, degree, eval_map,
                     spherical_derivative)
from .rays import (BoettcherTracer, GreenValue, RayPolyline,
                   alpha_fixed_point, equipotential, external_angle,
                   green_dynamical, trace_ray)
from .render import (RasterImage, Viewport, boundary_pixels, box_dimension,
                     render_bifurcation, render_julia_escape,
                     render_julia_inverse, render_logview, render_mandelbrot)
from .roots import PolyRootResult, aberth_roots, poly_roots
from .sphere import (EQ_TOL, INF, Infinity, SpherePoint, as_point, chordal,
                     is_inf, points_equal, spherical_distance)

__version__ = "0.1.0"
