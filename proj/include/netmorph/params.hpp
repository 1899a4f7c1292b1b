#pragma once

namespace netmorph {

/// Scalar constants of the model and of its time discretization.
///
/// Defaults are the reference parameter set (alpha = 0.75, c = 5, D = 1e-2,
/// eps = 1e-3) with r = 1e-2, gamma = 1/2 and t_fin = 10. `dt` has no
/// meaningful default because it is tied to the mesh width; callers set it.
struct ModelParams {
  double r = 1e-2;       ///< isotropic background permeability
  double d_coef = 1e-2;  ///< diffusion D (the operator uses D^2)
  double c_act = 5.0;    ///< activation c (the forcing uses c^2)
  double alpha = 0.75;   ///< metabolic coefficient
  double gamma = 0.5;    ///< metabolic exponent
  double eps = 1e-3;     ///< stabilization of the metabolic term
  double dt = 1e-2;
  double t_fin = 10.0;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Gaussian bump exp(-sigma |x - x0|^2) from which the source is built.
struct SourceSpec {
  double x0 = 0.25;
  double y0 = 0.25;
  double sigma = 500.0;

  void validate() const;

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

}  // namespace netmorph
