#include "cpinn/network.hpp"

#include "cpinn/rng.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace cpinn {

void Architecture::validate() const {
  if (d_in < 1) throw std::invalid_argument("architecture: input dimension must be >= 1");
  if (layers < 1) throw std::invalid_argument("architecture: L must be >= 1");
  if (width < 1) throw std::invalid_argument("architecture: W must be >= 1");
}

ParameterLayout::ParameterLayout(const Architecture& arch) {
  const Eigen::Index W = arch.width;
  Eigen::Index off = 0;
  first_weight = off;
  off += W * arch.d_in;
  first_bias = off;
  off += W;
  for (int l = 0; l + 1 < arch.layers; ++l) {
    res_weight.push_back(off);
    off += W * W;
    res_bias.push_back(off);
    off += W;
  }
  head_weight = off;
  off += W;
  head_bias = off;
  off += 1;
  total = off;
}

Eigen::Map<const Eigen::MatrixXd> Network::first_weight() const {
  return {params.data() + layout().first_weight, arch.width, arch.d_in};
}
Eigen::Map<const Eigen::VectorXd> Network::first_bias() const {
  return {params.data() + layout().first_bias, arch.width};
}
Eigen::Map<const Eigen::MatrixXd> Network::residual_weight(int l) const {
  return {params.data() + layout().res_weight.at(static_cast<std::size_t>(l)), arch.width, arch.width};
}
Eigen::Map<const Eigen::VectorXd> Network::residual_bias(int l) const {
  return {params.data() + layout().res_bias.at(static_cast<std::size_t>(l)), arch.width};
}
Eigen::Map<const Eigen::VectorXd> Network::head_weight() const {
  return {params.data() + layout().head_weight, arch.width};
}
double Network::head_bias() const { return params(layout().head_bias); }

double residual_init_std(const Architecture& arch) {
  return std::sqrt(2.0) * std::pow(2.0 / 15.0, 1.0 / 6.0) / std::sqrt(static_cast<double>(arch.layers) * arch.width);
}

double head_init_std(const Architecture& arch) { return std::pow(static_cast<double>(arch.width), -0.25); }

Network init(const Architecture& arch, std::uint64_t seed) {
  arch.validate();
  Network net;
  net.arch = arch;
  net.seed = seed;
  const ParameterLayout lay(arch);
  net.params.resize(lay.total);
  const CounterRng rng(seed);
  const double res_std = residual_init_std(arch);
  const double head_std = head_init_std(arch);
  for (Eigen::Index j = 0; j < lay.total; ++j) {
    double scale = 1.0;
    if (j >= lay.head_weight)
      scale = head_std;
    else if (j >= lay.first_bias + arch.width)
      scale = res_std;
    net.params(j) = scale * rng.normal(static_cast<std::uint64_t>(j));
  }
  return net;
}

namespace {

Eigen::ArrayXXd relu3_d(const Eigen::MatrixXd& a, int order) {
  return a.array().unaryExpr([order](double x) {
    switch (order) {
      case 0: return Relu3<double>::f(x);
      case 1: return Relu3<double>::d1(x);
      case 2: return Relu3<double>::d2(x);
      default: return Relu3<double>::d3(x);
    }
  });
}

}  // namespace

JetTape forward(const Network& net, const Eigen::MatrixXd& X, bool second_order) {
  if (X.cols() != net.arch.d_in) throw std::invalid_argument("input dimension does not match the network");
  const int d = net.arch.d_in;
  const int L = net.arch.layers;
  JetTape t;
  t.second_order = second_order;
  t.X = X;
  const auto A = net.first_weight();
  const Eigen::MatrixXd Z = (X * A.transpose()).rowwise() + net.first_bias().transpose();
  t.T0 = Z.array().tanh().matrix();
  t.T1 = (1.0 - t.T0.array().square()).matrix();
  t.T2 = (-2.0 * t.T0.array() * t.T1.array()).matrix();
  t.T3 = (-2.0 * t.T1.array() * (1.0 - 3.0 * t.T0.array().square())).matrix();

  t.H.resize(L);
  t.G.resize(L);
  t.Q.resize(L);
  t.H[0] = t.T0;
  if (second_order) {
    for (int k = 0; k < d; ++k) {
      const Eigen::RowVectorXd ak = A.col(k).transpose();
      t.G[0].push_back((t.T1.array().rowwise() * ak.array()).matrix());
      t.Q[0].push_back((t.T2.array().rowwise() * ak.array().square()).matrix());
    }
  }

  t.Apre.resize(L > 1 ? L - 1 : 0);
  t.Ak.resize(t.Apre.size());
  t.Bk.resize(t.Apre.size());
  for (int l = 0; l + 1 < L; ++l) {
    const auto Wl = net.residual_weight(l);
    t.Apre[l] = (t.H[l] * Wl.transpose()).rowwise() + net.residual_bias(l).transpose();
    t.H[l + 1] = t.H[l] + relu3_d(t.Apre[l], 0).matrix();
    if (!second_order) continue;
    const Eigen::ArrayXXd S1 = relu3_d(t.Apre[l], 1);
    const Eigen::ArrayXXd S2 = relu3_d(t.Apre[l], 2);
    for (int k = 0; k < d; ++k) {
      t.Ak[l].push_back(t.G[l][k] * Wl.transpose());
      t.Bk[l].push_back(t.Q[l][k] * Wl.transpose());
      const Eigen::ArrayXXd& ak = t.Ak[l][k].array();
      t.G[l + 1].push_back((t.G[l][k].array() + S1 * ak).matrix());
      t.Q[l + 1].push_back((t.Q[l][k].array() + S2 * ak.square() + S1 * t.Bk[l][k].array()).matrix());
    }
  }

  const auto c = net.head_weight();
  t.value = (t.H[L - 1] * c).array() + net.head_bias();
  if (second_order) {
    t.grad.resize(X.rows(), d);
    t.lap = Eigen::VectorXd::Zero(X.rows());
    for (int k = 0; k < d; ++k) {
      t.grad.col(k) = t.G[L - 1][k] * c;
      t.lap += t.Q[L - 1][k] * c;
    }
  }
  return t;
}

Eigen::MatrixXd parameter_jacobian(const Network& net, const JetTape& t,
                                   const Eigen::Ref<const Eigen::VectorXd>& seed_value,
                                   const Eigen::Ref<const Eigen::VectorXd>& seed_lap) {
  const Eigen::Index m = t.points();
  if (seed_value.size() != m || seed_lap.size() != m) throw std::invalid_argument("seed length mismatch");
  if (!t.second_order && !seed_lap.isZero(0.0))
    throw std::invalid_argument("Laplacian seeds need a second-order tape");
  const int d = net.arch.d_in;
  const int L = net.arch.layers;
  const int W = net.arch.width;
  const ParameterLayout lay(net.arch);
  const int dirs = t.second_order ? d : 0;
  Eigen::MatrixXd J(m, lay.total);

  const auto c = net.head_weight();
  // adjoints of the state after the last layer
  Eigen::MatrixXd Hb = seed_value * c.transpose();
  std::vector<Eigen::MatrixXd> Gb(dirs, Eigen::MatrixXd::Zero(m, W));
  std::vector<Eigen::MatrixXd> Qb(dirs, seed_lap * c.transpose());

  for (int a = 0; a < W; ++a) {
    Eigen::ArrayXd col = seed_value.array() * t.H[L - 1].col(a).array();
    for (int k = 0; k < dirs; ++k) col += seed_lap.array() * t.Q[L - 1][k].col(a).array();
    J.col(lay.head_weight + a) = col.matrix();
  }
  J.col(lay.head_bias) = seed_value;

  for (int l = L - 2; l >= 0; --l) {
    const auto Wl = net.residual_weight(l);
    const Eigen::MatrixXd& H = t.H[l];
    const Eigen::ArrayXXd S1 = relu3_d(t.Apre[l], 1);
    const Eigen::ArrayXXd S2 = relu3_d(t.Apre[l], 2);
    const Eigen::ArrayXXd S3 = relu3_d(t.Apre[l], 3);

    Eigen::ArrayXXd S1b = Eigen::ArrayXXd::Zero(m, W);
    Eigen::ArrayXXd S2b = Eigen::ArrayXXd::Zero(m, W);
    std::vector<Eigen::MatrixXd> Akb(dirs), Bkb(dirs);
    for (int k = 0; k < dirs; ++k) {
      const Eigen::ArrayXXd ak = t.Ak[l][k].array();
      S1b += Gb[k].array() * ak + Qb[k].array() * t.Bk[l][k].array();
      S2b += Qb[k].array() * ak.square();
      Akb[k] = (Gb[k].array() * S1 + 2.0 * Qb[k].array() * S2 * ak).matrix();
      Bkb[k] = (Qb[k].array() * S1).matrix();
    }
    const Eigen::MatrixXd Ab = (Hb.array() * S1 + S1b * S2 + S2b * S3).matrix();

    for (int b = 0; b < W; ++b) {
      for (int a = 0; a < W; ++a) {
        Eigen::ArrayXd col = Ab.col(a).array() * H.col(b).array();
        for (int k = 0; k < dirs; ++k)
          col += Akb[k].col(a).array() * t.G[l][k].col(b).array() + Bkb[k].col(a).array() * t.Q[l][k].col(b).array();
        J.col(lay.res_weight[l] + a + static_cast<Eigen::Index>(b) * W) = col.matrix();
      }
    }
    for (int a = 0; a < W; ++a) J.col(lay.res_bias[l] + a) = Ab.col(a);

    Hb += Ab * Wl;
    for (int k = 0; k < dirs; ++k) {
      Gb[k] += Akb[k] * Wl;
      Qb[k] += Bkb[k] * Wl;
    }
  }

  const auto A = net.first_weight();
  Eigen::ArrayXXd Zb = Hb.array() * t.T1.array();
  for (int k = 0; k < dirs; ++k) {
    const Eigen::RowVectorXd ak = A.col(k).transpose();
    Zb += (Gb[k].array() * t.T2.array()).rowwise() * ak.array() +
          (Qb[k].array() * t.T3.array()).rowwise() * ak.array().square();
  }
  for (int k = 0; k < d; ++k) {
    for (int a = 0; a < W; ++a) {
      Eigen::ArrayXd col = Zb.col(a) * t.X.col(k).array();
      if (dirs > 0)
        col += Gb[k].col(a).array() * t.T1.col(a).array() + 2.0 * A(a, k) * Qb[k].col(a).array() * t.T2.col(a).array();
      J.col(lay.first_weight + a + static_cast<Eigen::Index>(k) * W) = col.matrix();
    }
  }
  for (int a = 0; a < W; ++a) J.col(lay.first_bias + a) = Zb.col(a).matrix();
  return J;
}

template <int Dim>
Jet2<double, Dim> eval_jet2(const Network& net, const Eigen::Matrix<double, Dim, 1>& p) {
  if (net.arch.d_in != Dim) throw std::invalid_argument("point dimension does not match the network");
  const JetTape t = forward(net, p.transpose(), true);
  Jet2<double, Dim> j;
  j.value = t.value(0);
  j.grad = t.grad.row(0).transpose();
  j.lap = t.lap(0);
  return j;
}

template Jet2<double, 2> eval_jet2<2>(const Network&, const Eigen::Matrix<double, 2, 1>&);
template Jet2<double, 3> eval_jet2<3>(const Network&, const Eigen::Matrix<double, 3, 1>&);

void save_checkpoint(const Network& net, std::ostream& out) {
  out << "cpinn-network 1\n";
  out << "arch " << net.arch.d_in << ' ' << net.arch.layers << ' ' << net.arch.width << '\n';
  out << "seed " << net.seed << '\n';
  out << "params " << net.params.size() << '\n';
  out << std::hexfloat;
  for (Eigen::Index i = 0; i < net.params.size(); ++i) out << net.params(i) << '\n';
  out << std::defaultfloat;
}

Network load_checkpoint(std::istream& in) {
  auto fail = [](const std::string& what) { return std::runtime_error("malformed checkpoint: " + what); };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "cpinn-network" || version != 1) throw fail("header");
  Network net;
  if (!(in >> tag >> net.arch.d_in >> net.arch.layers >> net.arch.width) || tag != "arch") throw fail("arch");
  net.arch.validate();
  if (!(in >> tag >> net.seed) || tag != "seed") throw fail("seed");
  Eigen::Index n = 0;
  if (!(in >> tag >> n) || tag != "params") throw fail("params");
  if (n != net.arch.param_count()) throw fail("parameter count does not match architecture");
  net.params.resize(n);
  std::string token;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(in >> token)) throw fail("truncated parameter list");
    // strtod parses hexadecimal floating point exactly
    char* end = nullptr;
    net.params(i) = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') throw fail("bad parameter value '" + token + "'");
  }
  return net;
}

void save_checkpoint(const Network& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_checkpoint(net, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Network load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return load_checkpoint(in);
}

}  // namespace cpinn
