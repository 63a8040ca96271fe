"""Triangle quadrature for the cohesive interface integrals."""

import numpy as np

# 13-point rule, exact for bivariate polynomials of total degree <= 7
# (Cowper's tables).  Weights are normalized to sum to one on the reference
# triangle, so integral = area * sum(w_i f_i).  The centroid weight is
# negative; that is inherent to this rule.
_W_CENTROID = -0.149570044467670
_A1, _B1, _W1 = 0.479308067841923, 0.260345966079038, 0.175615257433204
_A2, _B2, _W2 = 0.869739794195568, 0.065130102902216, 0.053347235608839
_A3, _B3, _C3, _W3 = (0.638444188569809, 0.312865496004875,
                      0.048690315425316, 0.077113760890257)


def cowper_13() -> tuple:
    """Barycentric points (13, 3) and weights (13,) of the degree-7 rule."""
    points = [(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)]
    weights = [_W_CENTROID]
    for a, b, w in ((_A1, _B1, _W1), (_A2, _B2, _W2)):
        points += [(a, b, b), (b, a, b), (b, b, a)]
        weights += [w, w, w]
    for p in ((_A3, _B3, _C3), (_A3, _C3, _B3), (_B3, _A3, _C3),
              (_B3, _C3, _A3), (_C3, _A3, _B3), (_C3, _B3, _A3)):
        points.append(p)
        weights.append(_W3)
    return np.array(points), np.array(weights)


def physical_points(bary: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Map barycentric points onto a triangle given by its vertices (3, 2)."""
    return bary @ verts
