#include "mcgl/synthetic.hpp"

#include "mcgl/eigen_sym.hpp"
#include "mcgl/rng.hpp"

#include <algorithm>
#include <cmath>

namespace mcgl {

namespace {

constexpr int kMaxResamples = 100;
constexpr std::size_t kBlockRows = 2048;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_probability(double p, const char* what)
{
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

// Edge presence for one draw, in flat (i < j) order.
std::vector<bool> draw_edges(const GraphSpec& spec, Rng& rng)
{
  const std::size_t n = spec.nodes();
  std::vector<bool> present(num_edges(n), false);
  std::visit(overloaded{
                 [&](const GridFamily& g) {
                   for (std::size_t r = 0; r < g.rows; ++r) {
                     for (std::size_t c = 0; c < g.cols; ++c) {
                       const std::size_t v = r * g.cols + c;
                       if (c + 1 < g.cols) {
                         present[edge_offset(v, v + 1, n)] = true;
                       }
                       if (r + 1 < g.rows) {
                         present[edge_offset(v, v + g.cols, n)] = true;
                       }
                     }
                   }
                 },
                 [&](const ModularFamily& m) {
                   std::size_t k = 0;
                   for (std::size_t i = 0; i < n; ++i) {
                     for (std::size_t j = i + 1; j < n; ++j, ++k) {
                       const bool same = module_of(i, m) == module_of(j, m);
                       present[k] = rng.bernoulli(same ? m.p_intra : m.p_inter);
                     }
                   }
                 },
                 [&](const ErdosRenyiFamily& e) {
                   for (std::size_t k = 0; k < present.size(); ++k) {
                     present[k] = rng.bernoulli(e.p);
                   }
                 },
             },
             spec.family);
  return present;
}

// Maps standard normal draws to N(0, pinv(theta)): x = T z.
Matrix pinv_sqrt_factor(const Matrix& theta)
{
  if (theta.rows() != theta.cols() || theta.rows() < 2) {
    throw std::invalid_argument("sample_gmrf: theta must be square with n >= 2");
  }
  const SymmetricEigen eig = eigen_symmetric(symmetrized(theta));
  const double top = eig.values.cwiseAbs().maxCoeff();
  const double cutoff = 1e-10 * top;
  const auto zero_count = (eig.values.array() < cutoff).count();
  if (zero_count != 1) {
    throw std::invalid_argument("sample_gmrf: theta must be a connected Laplacian with exactly one zero eigenvalue");
  }
  Vector scale = eig.values.unaryExpr([cutoff](double v) { return v < cutoff ? 0.0 : 1.0 / std::sqrt(v); });
  return eig.vectors * scale.asDiagonal();
}

// Next `rows` samples as a row block; draws consumed row by row.
Matrix sample_block(Rng& rng, const Matrix& factor, std::size_t rows)
{
  const Eigen::Index n = factor.rows();
  Matrix z(static_cast<Eigen::Index>(rows), n);
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      z(r, c) = rng.normal();
    }
  }
  return z * factor.transpose();
}

} // namespace

void GraphSpec::validate() const
{
  std::visit(overloaded{
                 [](const GridFamily& g) {
                   if (g.rows * g.cols < 2) {
                     throw std::invalid_argument("grid needs at least two nodes");
                   }
                 },
                 [](const ModularFamily& m) {
                   if (m.n < 2) {
                     throw std::invalid_argument("modular graph needs at least two nodes");
                   }
                   if (m.modules < 1 || m.modules > m.n) {
                     throw std::invalid_argument("modules must lie in [1, n]");
                   }
                   require_probability(m.p_inter, "p_inter");
                   require_probability(m.p_intra, "p_intra");
                 },
                 [](const ErdosRenyiFamily& e) {
                   if (e.n < 2) {
                     throw std::invalid_argument("Erdos-Renyi graph needs at least two nodes");
                   }
                   require_probability(e.p, "p");
                 },
             },
             family);
  if (!(weight_low > 0.0) || !(weight_high >= weight_low) || !std::isfinite(weight_high)) {
    throw std::invalid_argument("weight range must satisfy 0 < low <= high");
  }
}

std::size_t GraphSpec::nodes() const
{
  return std::visit(overloaded{
                        [](const GridFamily& g) { return g.rows * g.cols; },
                        [](const ModularFamily& m) { return m.n; },
                        [](const ErdosRenyiFamily& e) { return e.n; },
                    },
                    family);
}

std::string family_name(const GraphFamily& family)
{
  return std::visit(overloaded{
                        [](const GridFamily&) { return std::string("grid"); },
                        [](const ModularFamily&) { return std::string("modular"); },
                        [](const ErdosRenyiFamily&) { return std::string("erdos_renyi"); },
                    },
                    family);
}

std::size_t module_of(std::size_t node, const ModularFamily& family)
{
  const std::size_t block = family.n / family.modules;
  return std::min(node / std::max<std::size_t>(block, 1), family.modules - 1);
}

WeightVector generate_weights(const GraphSpec& spec)
{
  spec.validate();
  const std::size_t n = spec.nodes();
  Rng rng(spec.seed);
  for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
    const std::vector<bool> present = draw_edges(spec, rng);
    WeightVector w(n);
    for (std::size_t k = 0; k < present.size(); ++k) {
      if (present[k]) {
        w[k] = rng.uniform(spec.weight_low, spec.weight_high);
      }
    }
    if (connected_components(w) == 1) {
      return w;
    }
  }
  throw GenerationError("sampled " + family_name(spec.family) + " graph stayed disconnected after " +
                        std::to_string(kMaxResamples) + " resamples");
}

Matrix generate_graph(const GraphSpec& spec) { return apply_L(generate_weights(spec)); }

Matrix sample_gmrf(const Matrix& theta, std::size_t m, std::uint64_t seed)
{
  if (m < 1) {
    throw std::invalid_argument("sample_gmrf: m must be at least 1");
  }
  const Matrix factor = pinv_sqrt_factor(theta);
  Rng rng(seed);
  Matrix data(static_cast<Eigen::Index>(m), theta.rows());
  for (std::size_t start = 0; start < m; start += kBlockRows) {
    const std::size_t rows = std::min(kBlockRows, m - start);
    data.middleRows(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(rows)) = sample_block(rng, factor, rows);
  }
  return data;
}

Matrix sample_covariance(const Matrix& data)
{
  if (data.rows() < 1) {
    throw std::invalid_argument("sample_covariance: need at least one sample");
  }
  Matrix S = Matrix::Zero(data.cols(), data.cols());
  S.selfadjointView<Eigen::Lower>().rankUpdate(data.transpose());
  S = S.selfadjointView<Eigen::Lower>();
  return S / static_cast<double>(data.rows());
}

Matrix sample_gmrf_covariance(const Matrix& theta, std::size_t m, std::uint64_t seed)
{
  if (m < 1) {
    throw std::invalid_argument("sample_gmrf_covariance: m must be at least 1");
  }
  const Matrix factor = pinv_sqrt_factor(theta);
  Rng rng(seed);
  Matrix S = Matrix::Zero(theta.rows(), theta.rows());
  for (std::size_t start = 0; start < m; start += kBlockRows) {
    const std::size_t rows = std::min(kBlockRows, m - start);
    const Matrix block = sample_block(rng, factor, rows);
    S.selfadjointView<Eigen::Lower>().rankUpdate(block.transpose());
  }
  S = S.selfadjointView<Eigen::Lower>();
  return S / static_cast<double>(m);
}

} // namespace mcgl
