#pragma once

#include "mcgl/graph_core.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace mcgl {

/// sqrt(n) x sqrt(n) style lattice, row-major node order, 4-neighbour edges.
struct GridFamily {
  std::size_t rows = 10;
  std::size_t cols = 10;
};

/// Stochastic block model with contiguous equal blocks; remainder nodes
/// join the last block.
struct ModularFamily {
  std::size_t n = 100;
  double p_inter = 0.01;
  double p_intra = 0.3;
  std::size_t modules = 4;
};

struct ErdosRenyiFamily {
  std::size_t n = 100;
  double p = 0.1;
};

using GraphFamily = std::variant<GridFamily, ModularFamily, ErdosRenyiFamily>;

struct GraphSpec {
  GraphFamily family = GridFamily{};
  double weight_low = 0.1;
  double weight_high = 3.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on out-of-range probabilities, an empty
  /// or nonpositive weight range, or fewer than two nodes.
  void validate() const;
  std::size_t nodes() const;
};

std::string family_name(const GraphFamily& family);

class GenerationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Block label of node i in a modular graph.
std::size_t module_of(std::size_t node, const ModularFamily& family);

/// Samples a connected weighted graph. Disconnected draws are resampled
/// (up to 100 resamples) before GenerationError is thrown.
WeightVector generate_weights(const GraphSpec& spec);

/// Ground-truth Laplacian: apply_L(generate_weights(spec)).
Matrix generate_graph(const GraphSpec& spec);

/// m i.i.d. rows from N(0, pinv(theta)). theta must be a connected CGL
/// (exactly one eigenvalue below 1e-10 * largest).
Matrix sample_gmrf(const Matrix& theta, std::size_t m, std::uint64_t seed);

/// (1/m) X^T X; no centering.
Matrix sample_covariance(const Matrix& data);

/// Same draws as sample_gmrf, accumulated into the covariance in blocks so
/// that the m x n data matrix is never held in memory.
Matrix sample_gmrf_covariance(const Matrix& theta, std::size_t m, std::uint64_t seed);

} // namespace mcgl
