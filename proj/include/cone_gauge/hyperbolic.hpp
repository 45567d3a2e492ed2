#pragma once

// Planar hyperbolic geometry: Poincaré distances on the unit disc and on
// generalized discs, the cross-ratio distance on the extended real line,
// contraction factors, and two-sided distance brackets for domains that are
// finite intersections of generalized discs.
//
// Normalization: ds = 2|dz| / (1 - |z|^2) on the unit disc, so that
// d(0, z) = log((1 + |z|) / (1 - |z|)).

#include <span>
#include <vector>

#include "cone_gauge/types.hpp"

namespace cone_gauge::hyperbolic {

double disc_distance(Complex z1, Complex z2);

/// A round disc on the Riemann sphere, restricted to the finite plane:
/// a closed disc, the closed exterior of a disc, or a closed half-plane
/// {z : Re(normal * conj(z)) >= offset}.
struct GeneralizedDisc {
  enum class Kind { kDisc, kDiscComplement, kHalfPlane };

  Kind kind = Kind::kDisc;
  Complex center{0.0, 0.0};
  double radius = 1.0;
  Complex normal{1.0, 0.0};
  double offset = 0.0;

  static GeneralizedDisc disc(Complex center, double radius);
  static GeneralizedDisc disc_complement(Complex center, double radius);
  /// `normal` is normalized; `offset` is interpreted after normalization.
  static GeneralizedDisc half_plane(Complex normal, double offset);

  /// Signed Euclidean distance from z to the boundary, positive inside.
  double clearance(Complex z) const;
  bool contains_interior(Complex z) const { return clearance(z) > 0.0; }

  /// Conformal map of the interior onto the open unit disc.
  Complex to_unit_disc(Complex z) const;
};

double gdisc_distance(const GeneralizedDisc& region, Complex z1, Complex z2);

/// True when `inner` is a subset of `outer`, up to a relative tolerance.
bool contained_in(const GeneralizedDisc& inner, const GeneralizedDisc& outer,
                  double rel_tol = 1e-10);

/// Hilbert distance of -1 and 1 in the generalized disc whose real trace is
/// the arc [a, b] of the real projective line. `a` is the end reached from -1
/// moving left (it may wrap through infinity to a value above b), `b` the
/// end reached from 1 moving right.
double cross_ratio_distance(double a, double b);

/// Contraction factor of the punctured-disc estimate,
/// eta = sinh(delta) * log(coth(delta / 2)), in (0, 1).
double eta_punctured(double delta);
/// 1 - eta_punctured(delta), evaluated without cancellation. Stays positive
/// where eta_punctured itself rounds to 1.
double eta_punctured_complement(double delta);
/// Contraction factor tanh(R / 2) for a domain inside a hyperbolic ball.
double eta_ball(double radius);
/// Birkhoff contraction factor tanh(delta / 4); equals 1 for delta = inf.
double eta_real_cone(double delta);

/// {lambda : quad |lambda|^2 + Re(lin * lambda) + constant >= 0}.
struct ConstraintRegion {
  double quad = 0.0;
  Complex lin{0.0, 0.0};
  double constant = 0.0;

  double value(Complex z) const;
};

struct CanonicalRegion {
  enum class Kind { kProper, kWhole, kEmpty };
  Kind kind = Kind::kWhole;
  GeneralizedDisc disc;  // meaningful for kProper only
};

/// Reduces a quadratic constraint to a generalized disc, the whole plane or
/// the empty set. Coefficients below 1e-12 times the largest coefficient
/// count as zero.
CanonicalRegion canonicalize(const ConstraintRegion& region);

struct DistanceBracket {
  double lower = 0.0;
  double upper = kInf;

  bool collapsed(double tol = 1e-9) const {
    return upper - lower <= tol * std::max(1.0, lower);
  }
};

struct PathSearchOptions {
  int samples = 129;
  int rounds = 3;
  int max_subdivision = 30;
};

/// Signed clearance of z in the intersection: min over regions.
double clearance(std::span<const CanonicalRegion> regions, Complex z);

/// Rigorous upper bound of the hyperbolic length of a polyline lying in the
/// intersection, from the inscribed-disc density 2 / clearance. Returns inf
/// when the polyline cannot be certified to stay inside.
double polyline_upper_bound(std::span<const CanonicalRegion> regions,
                            std::span<const Complex> path,
                            int max_subdivision = 30);

/// Bracket on the hyperbolic distance between z1 and z2 inside the component
/// of the intersection of `regions` that contains them. The lower bound uses
/// single-region enlargements, the upper bound the best polyline found.
DistanceBracket domain_distance_bounds(std::span<const ConstraintRegion> regions,
                                       Complex z1, Complex z2,
                                       const PathSearchOptions& options = {});

}  // namespace cone_gauge::hyperbolic
