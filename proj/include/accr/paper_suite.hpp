#pragma once

#include <span>
#include <vector>

#include "accr/manifold.hpp"
#include "accr/report.hpp"

namespace accr {

// Constants of the cone example: c and ct scale the vertical potentials
// k = c t and k~ = ct t, kprime is the sectional curvature of the fiber.
struct ConeConstants {
  double c = 1.0;
  double ct = 1.0;
  double kprime = 0.0;
};

// Reads c, ct, kprime from the bindings, falling back to the defaults.
ConeConstants cone_constants_from(const ConstantBindings& bindings);

// Every closed form and identity of the cone example, one record per check.
// The structure must have a coordinate named "t" with xi = d/dt.
// Throws Error when c or ct is zero (the potential would vanish).
std::vector<CheckRecord> verify_paper_suite(const AccRStructure& s, const ConeConstants& constants,
                                            std::span<const Point> samples, double tol = 1e-9);

}  // namespace accr
