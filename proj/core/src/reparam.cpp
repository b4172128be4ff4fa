#include "cforge/reparam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cforge/error.hpp"
#include "cforge/parallel.hpp"

namespace cforge {

namespace {

constexpr double kQuotientTol = 1e-13;

// z(t) and z'(t) in one pass.
std::pair<cplx, cplx> eval_with_derivative(const FourierCurve& curve, double t) {
  cplx z{};
  cplx dz{};
  for (const auto& [k, c] : curve.coeffs()) {
    const cplx term = c * std::polar(1.0, static_cast<double>(k) * t);
    z += term;
    dz += cplx(0.0, static_cast<double>(k)) * term;
  }
  return {z, dz};
}

double wrap_to_nearest(double raw, double ref) {
  return raw + kTwoPi * std::round((ref - raw) / kTwoPi);
}

}  // namespace

// ---------------------------------------------------------------------------
// Kernels

KernelEvaluator::KernelEvaluator(const FourierCurve& curve) {
  pos_.assign(static_cast<std::size_t>(curve.n()), cplx{});
  neg_.assign(static_cast<std::size_t>(curve.m()), cplx{});
  double scale = 0.0;
  for (const auto& [k, c] : curve.coeffs()) {
    if (k > 0) pos_[static_cast<std::size_t>(k - 1)] = c;
    if (k < 0) neg_[static_cast<std::size_t>(-k - 1)] = c;
    scale += std::abs(static_cast<double>(k)) * std::abs(c);
  }
  scale_ = scale > 0.0 ? scale : 1.0;
}

cplx KernelEvaluator::log_derivative(double tau, double t) const {
  // Quotient times e^{it}:
  //   Q = sum_k c_k e^{ikt} S_k(w) - sum_j c_{-j} e^{-ij tau} S_j(w),
  //   S_k(w) = sum_{l<k} w^l,  w = e^{i(tau - t)}.
  // dQ/dtau uses T_k(w) = sum_{l<k} i l w^l.
  const cplx w = std::polar(1.0, tau - t);
  cplx q{};
  cplx dq{};
  cplx wl{1.0, 0.0};
  cplx s{};
  cplx tsum{};
  const cplx ekt = std::polar(1.0, t);
  cplx ek = ekt;
  for (std::size_t k = 0; k < pos_.size(); ++k) {
    // add the l = k term (k counts from 0, so this is S_{k+1})
    s += wl;
    tsum += cplx(0.0, static_cast<double>(k)) * wl;
    wl *= w;
    const cplx ck = pos_[k] * ek;
    q += ck * s;
    dq += ck * tsum;
    ek *= ekt;
  }
  wl = {1.0, 0.0};
  s = {};
  tsum = {};
  const cplx emtau = std::polar(1.0, -tau);
  cplx ej = emtau;
  for (std::size_t j = 0; j < neg_.size(); ++j) {
    s += wl;
    tsum += cplx(0.0, static_cast<double>(j)) * wl;
    wl *= w;
    const double jj = static_cast<double>(j + 1);
    const cplx cj = neg_[j] * ej;
    q -= cj * s;
    dq -= cj * (cplx(0.0, -jj) * s + tsum);
    ej *= emtau;
  }
  if (std::abs(q) < kQuotientTol * scale_) {
    throw SolverError("kernel quotient vanishes at tau=" + std::to_string(tau) +
                      ", t=" + std::to_string(t) + " (self-intersecting or degenerate curve)");
  }
  return dq / q;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> KernelEvaluator::sample_grid(int P) const {
  Eigen::MatrixXd K(P, P);
  Eigen::MatrixXd L(P, P);
  const double h = kTwoPi / P;
  parallel_for(P, [&](int i) {
    for (int j = 0; j < P; ++j) {
      const cplx v = log_derivative(h * i, h * j);
      L(i, j) = v.real();
      K(i, j) = v.imag();
    }
  });
  return {std::move(K), std::move(L)};
}

double kernel_K(const FourierCurve& curve, double tau, double t) {
  return KernelEvaluator(curve).log_derivative(tau, t).imag();
}

double kernel_L(const FourierCurve& curve, double tau, double t) {
  return KernelEvaluator(curve).log_derivative(tau, t).real();
}

TrigCoeffs conjugate_periodic(const TrigCoeffs& f) {
  const std::size_t len = std::max(f.a.size(), f.b.size());
  TrigCoeffs out{std::vector<double>(len, 0.0), std::vector<double>(len, 0.0)};
  for (std::size_t p = 1; p < len; ++p) {
    const double a = p < f.a.size() ? f.a[p] : 0.0;
    const double b = p < f.b.size() ? f.b[p] : 0.0;
    out.a[p] = -b;
    out.b[p] = a;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block system

Eigen::MatrixXd BlockSystem::matrix() const {
  const int m = M();
  Eigen::MatrixXd A(2 * m, 2 * m);
  A << AA, AB, BA, BB;
  return A;
}

Eigen::VectorXd BlockSystem::rhs() const {
  Eigen::VectorXd r(2 * M());
  r << F, G;
  return r;
}

BlockSystem assemble_system(const FourierCurve& curve, int M, int P) {
  if (M < 1) throw InputError("truncation order M must be >= 1");
  if (P < 4 * M) {
    throw InputError("grid size P=" + std::to_string(P) + " must be at least 4M=" +
                     std::to_string(4 * M));
  }
  // Winding check doubles as the "encloses the origin" precondition.
  (void)unwrap_arg(curve, P);

  const KernelEvaluator kernel(curve);
  auto [K, L] = kernel.sample_grid(P);

  const double h = kTwoPi / P;
  Eigen::MatrixXd C(P, M);
  Eigen::MatrixXd S(P, M);
  for (int i = 0; i < P; ++i) {
    for (int p = 0; p < M; ++p) {
      const double arg = static_cast<double>((static_cast<long long>(p + 1) * i) % P) * h;
      C(i, p) = std::cos(arg);
      S(i, p) = std::sin(arg);
    }
  }

  // Row index of Kt is t_j, column index tau_i.
  const Eigen::MatrixXd Kt = K.transpose();
  const Eigen::MatrixXd X = Kt * C;  // sum_i K(tau_i, t_j) cos(n tau_i)
  const Eigen::MatrixXd Y = Kt * S;
  const double s = h * h / (kPi * kPi);

  BlockSystem sys;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(M, M);
  sys.AA = I - s * C.transpose() * X;
  sys.AB = -s * C.transpose() * Y;
  sys.BA = -s * S.transpose() * X;
  sys.BB = I - s * S.transpose() * Y;

  // Right-hand side: conjugate of -ln|z| (the cot((tau-t)/2) part, by the
  // Hilbert formula) plus the continuous-kernel integral of ln|z| against L.
  Eigen::VectorXd lnz(P);
  for (int i = 0; i < P; ++i) lnz(i) = std::log(std::abs(curve(h * i)));

  TrigCoeffs u{std::vector<double>(static_cast<std::size_t>(M + 1), 0.0),
               std::vector<double>(static_cast<std::size_t>(M + 1), 0.0)};
  const Eigen::VectorXd ua = -(h / kPi) * (C.transpose() * lnz);
  const Eigen::VectorXd ub = -(h / kPi) * (S.transpose() * lnz);
  for (int p = 0; p < M; ++p) {
    u.a[static_cast<std::size_t>(p + 1)] = ua(p);
    u.b[static_cast<std::size_t>(p + 1)] = ub(p);
  }
  const TrigCoeffs hilbert = conjugate_periodic(u);

  const Eigen::VectorXd lpart = (h / kPi) * (L.transpose() * lnz);  // function of t_j
  const Eigen::VectorXd la = (h / kPi) * (C.transpose() * lpart);
  const Eigen::VectorXd lb = (h / kPi) * (S.transpose() * lpart);

  sys.F.resize(M);
  sys.G.resize(M);
  for (int p = 0; p < M; ++p) {
    sys.F(p) = hilbert.a[static_cast<std::size_t>(p + 1)] + la(p);
    sys.G(p) = hilbert.b[static_cast<std::size_t>(p + 1)] + lb(p);
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Solution

double ReparamSolution::q(double t) const {
  const cplx step = std::polar(1.0, t);
  cplx e = step;
  double acc = 0.0;
  for (int p = 0; p < M; ++p) {
    acc += alpha[static_cast<std::size_t>(p)] * e.real() + beta[static_cast<std::size_t>(p)] * e.imag();
    e *= step;
  }
  return acc;
}

double ReparamSolution::dq(double t) const {
  const cplx step = std::polar(1.0, t);
  cplx e = step;
  double acc = 0.0;
  for (int p = 0; p < M; ++p) {
    const double pp = static_cast<double>(p + 1);
    acc += pp * (-alpha[static_cast<std::size_t>(p)] * e.imag() + beta[static_cast<std::size_t>(p)] * e.real());
    e *= step;
  }
  return acc;
}

double ReparamSolution::theta(double t) const {
  const double wraps = std::floor(t / kTwoPi);
  const double tr = t - wraps * kTwoPi;
  const double h = kTwoPi / grid_size;
  auto j = static_cast<long>(std::lround(tr / h));
  double ref = 0.0;
  if (j >= grid_size) {
    ref = arg_grid.front() + kTwoPi;
  } else {
    ref = arg_grid[static_cast<std::size_t>(j)];
  }
  const double arg = wrap_to_nearest(std::arg(curve(tr)), ref);
  return arg + q(tr) + wraps * kTwoPi;
}

double ReparamSolution::dtheta(double t) const {
  const auto [z, dz] = eval_with_derivative(curve, t);
  return (dz / z).imag() + dq(t);
}

ReparamSolution solve_reparam(const FourierCurve& curve, int M, int P) {
  const BlockSystem sys = assemble_system(curve, M, P);
  const Eigen::MatrixXd A = sys.matrix();
  const Eigen::VectorXd b = sys.rhs();

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    throw SolverError("block system is numerically singular (rcond=" + std::to_string(rcond) + ")",
                      rcond);
  }
  const Eigen::VectorXd x = lu.solve(b);
  if (!x.allFinite()) throw SolverError("block system solve produced non-finite values", rcond);

  ReparamSolution sol(curve);
  sol.M = M;
  sol.P = P;
  sol.rcond = rcond;
  const double bnorm = b.norm();
  const double rnorm = (A * x - b).norm();
  sol.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  sol.alpha.assign(x.data(), x.data() + M);
  sol.beta.assign(x.data() + M, x.data() + 2 * M);

  sol.grid_size = P;
  sol.arg_grid = unwrap_arg(curve, P);
  sol.theta_grid.resize(static_cast<std::size_t>(P));
  const double h = kTwoPi / P;
  bool monotone = true;
  for (int j = 0; j < P; ++j) {
    sol.theta_grid[static_cast<std::size_t>(j)] = sol.arg_grid[static_cast<std::size_t>(j)] + sol.q(h * j);
    if (j > 0 && !(sol.theta_grid[static_cast<std::size_t>(j)] > sol.theta_grid[static_cast<std::size_t>(j - 1)])) {
      monotone = false;
    }
  }
  if (!(sol.theta_grid.front() + kTwoPi > sol.theta_grid.back())) monotone = false;
  sol.accepted = monotone;
  return sol;
}

// ---------------------------------------------------------------------------
// Inversion

ThetaInverse::ThetaInverse(const ReparamSolution& sol) : sol_(sol) {
  if (!sol.accepted) {
    throw SolverError("cannot invert a rejected (non-monotone) reparametrization", sol.rcond);
  }
  const int G = sol.grid_size;
  t_nodes_.resize(static_cast<std::size_t>(G + 1));
  theta_nodes_.resize(static_cast<std::size_t>(G + 1));
  for (int j = 0; j < G; ++j) {
    t_nodes_[static_cast<std::size_t>(j)] = kTwoPi * j / G;
    theta_nodes_[static_cast<std::size_t>(j)] = sol.theta_grid[static_cast<std::size_t>(j)];
  }
  t_nodes_.back() = kTwoPi;
  theta_nodes_.back() = sol.theta_grid.front() + kTwoPi;
}

double ThetaInverse::operator()(double theta) const {
  const double base = theta_nodes_.front();
  const double wraps = std::floor((theta - base) / kTwoPi);
  const double target = theta - wraps * kTwoPi;

  auto it = std::upper_bound(theta_nodes_.begin(), theta_nodes_.end(), target);
  std::size_t j = it == theta_nodes_.begin() ? 0 : static_cast<std::size_t>(it - theta_nodes_.begin()) - 1;
  j = std::min(j, theta_nodes_.size() - 2);

  double lo = t_nodes_[j];
  double hi = t_nodes_[j + 1];
  const double flo = theta_nodes_[j] - target;
  const double fhi = theta_nodes_[j + 1] - target;
  double t = (fhi - flo) != 0.0 ? lo - flo * (hi - lo) / (fhi - flo) : 0.5 * (lo + hi);

  for (int iter = 0; iter < 100; ++iter) {
    const double f = sol_.theta(t) - target;
    if (std::abs(f) < 1e-14) break;
    if (f < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo < 1e-15) break;
    const double d = sol_.dtheta(t);
    double next = d > 0.0 ? t - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t + wraps * kTwoPi;
}

ThetaInverse invert_theta(const ReparamSolution& sol) { return ThetaInverse(sol); }

// ---------------------------------------------------------------------------
// Taylor coefficients

PolynomialMap taylor_coeffs(const ReparamSolution& sol, int D, int grid) {
  return taylor_coeffs(sol.curve, sol, D, grid);
}

PolynomialMap taylor_coeffs(const FourierCurve& curve, const ReparamSolution& sol, int D,
                            int grid) {
  if (D < 1) throw InputError("polynomial degree D must be >= 1");
  const int G = grid > 0 ? grid : 8 * D;
  if (G < 4 * D) throw InputError("Taylor quadrature grid must have at least 4D nodes");
  const ThetaInverse tinv(sol);

  std::vector<cplx> values(static_cast<std::size_t>(G));
  parallel_for(G, [&](int j) {
    values[static_cast<std::size_t>(j)] = curve(tinv(kTwoPi * j / G));
  });

  std::vector<cplx> twiddle(static_cast<std::size_t>(G));
  for (int r = 0; r < G; ++r) twiddle[static_cast<std::size_t>(r)] = std::polar(1.0, -kTwoPi * r / G);

  auto coefficient = [&](int k) {
    cplx acc{};
    const long long kk = ((k % G) + G) % G;
    for (int j = 0; j < G; ++j) {
      acc += values[static_cast<std::size_t>(j)] * twiddle[static_cast<std::size_t>((kk * j) % G)];
    }
    return acc / static_cast<double>(G);
  };

  std::vector<cplx> pos(static_cast<std::size_t>(D + 1));
  std::vector<cplx> neg(static_cast<std::size_t>(D));
  parallel_for(D + 1, [&](int k) { pos[static_cast<std::size_t>(k)] = coefficient(k); });
  parallel_for(D, [&](int k) { neg[static_cast<std::size_t>(k)] = coefficient(-(k + 1)); });

  PolynomialMap map;
  map.M = sol.M;
  map.P = sol.P;
  map.rotation = std::abs(pos[1]) > 0.0 ? std::arg(pos[1]) : 0.0;
  map.coeffs.resize(static_cast<std::size_t>(D + 1));
  for (int k = 0; k <= D; ++k) {
    map.coeffs[static_cast<std::size_t>(k)] =
        pos[static_cast<std::size_t>(k)] * std::polar(1.0, -map.rotation * k);
  }
  double neg_sq = 0.0;
  for (const auto& c : neg) neg_sq += std::norm(c);
  map.neg_residual = std::sqrt(neg_sq);
  return map;
}

}  // namespace cforge
