#pragma once

#include "flagvar/flag.hpp"

namespace flagvar {

/// gamma(t) = exp(tX) . o on [0, a].
struct HomogeneousCurve {
  FlagPtr flag;
  LieElement x;
  double a;
};

/// max over m-basis Z of |B(X_m, [X, Z]_m)|.
double geodesic_residual(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x);
bool is_geodesic_vector(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x,
                        double tol = 1e-10);

/// max over components i of |[X, X_{m_i}]_m|.
double equigeodesic_residual(const FlagSpace& flag, const LieElement& x);
bool is_equigeodesic_vector(const FlagSpace& flag, const LieElement& x, double tol = 1e-10);

double curve_energy(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x, double a);
double curve_energy(const InvariantMetric& lambda, const HomogeneousCurve& curve);

}  // namespace flagvar
