#pragma once

#include "mcgl/graph_core.hpp"

#include <optional>

namespace mcgl {

/// Regularization weights of the learning objective.
///
/// `gamma_inv` is the reciprocal of the MC concavity parameter; zero turns
/// the MC penalty into the plain l1 norm.
struct PenaltyParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gamma_inv = 0.0;

  /// Throws std::invalid_argument unless all three are finite and >= 0.
  void validate() const;

  /// lambda2 >= gamma_inv * lambda1: the smooth part is convex.
  bool convex_mode() const { return lambda2 >= gamma_inv * lambda1; }
};

/// Huber function: Moreau envelope of ||.||_1 with index gamma.
double huber_envelope(const Vector& w, double gamma);

/// Minimax concave penalty ||w||_1 - huber_envelope(w, gamma), evaluated
/// componentwise in closed form.
double mc_penalty(const Vector& w, double gamma);

Vector soft_threshold(const Vector& w, const Vector& delta);
Vector soft_threshold(const Vector& w, double delta);

/// Projection onto the nonnegative orthant.
Vector project_nonneg(const Vector& w);

/// prox of tau * (indicator of w >= 0 + lambda1 ||w||_1 + <S, L(w)>), where
/// `Ls` holds the precomputed L*(S).
Vector prox_G(const Vector& w, double tau, double lambda1, const Vector& Ls);

/// prox of sigma^{-1} * (-logdet(. + J)) at a symmetric W.
///
/// The eigenvalues mu of W + J are mapped to (mu + sqrt(mu^2 + 4/sigma)) / 2,
/// which is positive for every real mu, so any symmetric W is accepted, not
/// only positive semidefinite ones.
Matrix prox_neg_logdet_shifted(const Matrix& W, double sigma);

/// prox of sigma * H^* for H = -logdet(. + J), via Moreau's decomposition.
Matrix prox_H_conjugate(const Matrix& U, double sigma);

/// Smooth part F(w) = -lambda1 * huber(w, 1/gamma_inv) + lambda2/2 ||w||^2.
double smooth_part(const Vector& w, const PenaltyParams& params);

/// Gradient of smooth_part:
///   gamma_inv*lambda1*soft_gamma(w) + (lambda2 - gamma_inv*lambda1) * w.
Vector grad_F(const Vector& w, const PenaltyParams& params);

/// log det(Theta + J), or nullopt when Theta + J is numerically singular
/// (smallest eigenvalue <= 1e-12 * largest).
std::optional<double> logdet_shifted(const Matrix& theta);

/// Full learning objective; +infinity outside the nonnegative orthant or
/// when the graph of w is disconnected.
double objective_P2(const Vector& w, const Matrix& S, const PenaltyParams& params);

} // namespace mcgl
