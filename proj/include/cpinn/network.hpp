#pragma once

// Residual MLP used as the PINN ansatz:
//   h_1     = tanh(A x + a)                 (first layer, d_in -> W)
//   h_{l+1} = h_l + relu3(W_l h_l + b_l)    (residual layers l = 2..L)
//   v(x)    = c . h_L + c_0                 (linear head)
//
// Flat parameter order: A (W x d_in, column-major), a, then for each
// residual layer W_l (W x W, column-major), b_l, then c, c_0.

#include "cpinn/jet.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cpinn {

struct Architecture {
  int d_in = 2;
  int layers = 3;  // L, including the tanh layer
  int width = 5;   // W

  Eigen::Index param_count() const {
    return static_cast<Eigen::Index>(d_in + 1) * width +
           static_cast<Eigen::Index>(layers - 1) * (width + 1) * width + (width + 1);
  }
  void validate() const;
  bool operator==(const Architecture&) const = default;
};

/// Offsets of the parameter blocks inside the flat vector.
struct ParameterLayout {
  explicit ParameterLayout(const Architecture& arch);

  Eigen::Index first_weight = 0;
  Eigen::Index first_bias = 0;
  std::vector<Eigen::Index> res_weight;
  std::vector<Eigen::Index> res_bias;
  Eigen::Index head_weight = 0;
  Eigen::Index head_bias = 0;
  Eigen::Index total = 0;
};

struct Network {
  Architecture arch;
  Eigen::VectorXd params;
  std::uint64_t seed = 0;

  ParameterLayout layout() const { return ParameterLayout(arch); }

  Eigen::Map<const Eigen::MatrixXd> first_weight() const;
  Eigen::Map<const Eigen::VectorXd> first_bias() const;
  Eigen::Map<const Eigen::MatrixXd> residual_weight(int l) const;  // l = 0 .. L-2
  Eigen::Map<const Eigen::VectorXd> residual_bias(int l) const;
  Eigen::Map<const Eigen::VectorXd> head_weight() const;
  double head_bias() const;
};

/// Standard deviation of the residual-layer entries: sqrt(2) (2/15)^{1/6} / sqrt(L W).
double residual_init_std(const Architecture& arch);
/// Standard deviation of the head entries, sqrt(1 / sqrt(W)).
double head_init_std(const Architecture& arch);

/// First-layer entries ~ N(0,1), residual entries ~ N(0, residual_init_std^2),
/// head entries ~ N(0, 1/sqrt(W)); filled in flat order from CounterRng(seed),
/// parameter j taking normal number j.
Network init(const Architecture& arch, std::uint64_t seed);

/// Network evaluated on any scalar type (double, Jet2, ...). Independent of
/// the batched path below; used to cross-check it.
template <typename T, std::size_t D>
T evaluate(const Network& net, const std::array<T, D>& x) {
  using std::tanh;
  const int W = net.arch.width;
  const auto A = net.first_weight();
  const auto a = net.first_bias();
  std::vector<T> h(W), pre(W);
  for (int i = 0; i < W; ++i) {
    T z = T(a(i));
    for (std::size_t k = 0; k < D; ++k) z += T(A(i, static_cast<Eigen::Index>(k))) * x[k];
    h[i] = tanh(z);
  }
  for (int l = 0; l + 1 < net.arch.layers; ++l) {
    const auto Wl = net.residual_weight(l);
    const auto bl = net.residual_bias(l);
    for (int i = 0; i < W; ++i) {
      T z = T(bl(i));
      for (int j = 0; j < W; ++j) z += T(Wl(i, j)) * h[j];
      pre[i] = z;
    }
    for (int i = 0; i < W; ++i) h[i] += relu3(pre[i]);
  }
  const auto c = net.head_weight();
  T out = T(net.head_bias());
  for (int i = 0; i < W; ++i) out += T(c(i)) * h[i];
  return out;
}

/// Forward pass over a batch of points (rows of X) carrying, per unit, the
/// value and the first and pure second derivatives in every input direction.
/// Keeps the intermediates needed for reverse accumulation.
struct JetTape {
  bool second_order = true;
  Eigen::MatrixXd X;  // m x d
  Eigen::MatrixXd T0, T1, T2, T3;  // tanh and its derivatives at the first pre-activation
  // state entering residual layer l (index l) and after the last layer (index L-1)
  std::vector<Eigen::MatrixXd> H;
  std::vector<std::vector<Eigen::MatrixXd>> G, Q;  // [layer][direction]
  // residual layer pre-activations and their directional jets
  std::vector<Eigen::MatrixXd> Apre;
  std::vector<std::vector<Eigen::MatrixXd>> Ak, Bk;

  Eigen::VectorXd value;
  Eigen::MatrixXd grad;  // m x d
  Eigen::VectorXd lap;

  Eigen::Index points() const { return X.rows(); }
};

/// second_order = false computes values only (no spatial jets).
JetTape forward(const Network& net, const Eigen::MatrixXd& X, bool second_order = true);

/// m x P matrix whose row i is the parameter gradient of
///   seed_value(i) * v(x_i) + seed_lap(i) * lap v(x_i),
/// by reverse accumulation through the jet computation.
Eigen::MatrixXd parameter_jacobian(const Network& net, const JetTape& tape,
                                   const Eigen::Ref<const Eigen::VectorXd>& seed_value,
                                   const Eigen::Ref<const Eigen::VectorXd>& seed_lap);

/// Value, gradient and Laplacian at a single point (batched path).
template <int Dim>
Jet2<double, Dim> eval_jet2(const Network& net, const Eigen::Matrix<double, Dim, 1>& p);

// Checkpoints: text, parameters as hexadecimal floating point so that a
// save/load round trip is bit-exact.
void save_checkpoint(const Network& net, std::ostream& out);
Network load_checkpoint(std::istream& in);
void save_checkpoint(const Network& net, const std::string& path);
Network load_checkpoint(const std::string& path);

}  // namespace cpinn
