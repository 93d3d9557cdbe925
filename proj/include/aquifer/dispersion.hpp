#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <utility>

namespace aquifer {

/// Scheidegger dispersion coefficients. The constructor enforces
/// S_m > 0 and alpha_L > alpha_T >= 0 (throws InvalidArgument).
class DispersionParams {
 public:
  DispersionParams(double molecular, double alpha_longitudinal, double alpha_transverse);

  double molecular() const { return sm_; }
  double alpha_l() const { return al_; }
  double alpha_t() const { return at_; }

 private:
  double sm_, al_, at_;
};

/// Symmetric N x N tensor stored as its upper triangle, row by row.
template <int N>
class SymTensor {
  static_assert(N == 2 || N == 3);

 public:
  static constexpr int kSize = N * (N + 1) / 2;
  using Matrix = Eigen::Matrix<double, N, N>;
  using Vector = Eigen::Matrix<double, N, 1>;

  SymTensor() { data_.fill(0.0); }

  static SymTensor identity(double scale = 1.0) {
    SymTensor t;
    for (int i = 0; i < N; ++i) t(i, i) = scale;
    return t;
  }

  /// a * Id + b * u u^T
  static SymTensor rank_one_update(double a, double b, const Vector& u) {
    SymTensor t;
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) t(i, j) = (i == j ? a : 0.0) + b * u[i] * u[j];
    return t;
  }

  /// Symmetrized copy of a dense matrix.
  static SymTensor from_matrix(const Matrix& m) {
    SymTensor t;
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) t(i, j) = 0.5 * (m(i, j) + m(j, i));
    return t;
  }

  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& operator()(int i, int j) { return data_[index(i, j)]; }

  Matrix matrix() const {
    Matrix m;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  Vector operator*(const Vector& x) const { return matrix() * x; }

  SymTensor scaled(double s) const {
    SymTensor t = *this;
    for (auto& v : t.data_) v *= s;
    return t;
  }

  double trace() const {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += (*this)(i, i);
    return s;
  }

 private:
  static int index(int i, int j) {
    if (i > j) std::swap(i, j);
    return i * N - i * (i - 1) / 2 + (j - i);
  }

  std::array<double, kSize> data_;
};

/// Below this speed the tensor is the continuous extension S_m * Id.
inline constexpr double kZeroVelocity = 1e-14;

namespace detail {
/// f(|v|) * P_v + g(|v|) * (Id - P_v), with f, g the longitudinal and
/// transverse eigenvalue maps.
template <int N, class Long, class Trans>
SymTensor<N> spectral(const Eigen::Matrix<double, N, 1>& v, Long f, Trans g) {
  const double speed = v.norm();
  if (speed < kZeroVelocity) return SymTensor<N>::identity(g(0.0));
  const Eigen::Matrix<double, N, 1> dir = v / speed;
  const double lt = g(speed);
  return SymTensor<N>::rank_one_update(lt, f(speed) - lt, dir);
}
}  // namespace detail

/// S(v) = S_m Id + |v| (alpha_L P_v + alpha_T (Id - P_v)).
template <int N>
SymTensor<N> dispersion_tensor(const DispersionParams& p, const Eigen::Matrix<double, N, 1>& v) {
  return detail::spectral<N>(
      v, [&](double s) { return p.molecular() + p.alpha_l() * s; },
      [&](double s) { return p.molecular() + p.alpha_t() * s; });
}

/// Symmetric positive square root of S(v).
template <int N>
SymTensor<N> dispersion_sqrt(const DispersionParams& p, const Eigen::Matrix<double, N, 1>& v) {
  return detail::spectral<N>(
      v, [&](double s) { return std::sqrt(p.molecular() + p.alpha_l() * s); },
      [&](double s) { return std::sqrt(p.molecular() + p.alpha_t() * s); });
}

template <int N>
SymTensor<N> dispersion_inv(const DispersionParams& p, const Eigen::Matrix<double, N, 1>& v) {
  return detail::spectral<N>(
      v, [&](double s) { return 1.0 / (p.molecular() + p.alpha_l() * s); },
      [&](double s) { return 1.0 / (p.molecular() + p.alpha_t() * s); });
}

/// S(v)^{-1/2}
template <int N>
SymTensor<N> dispersion_inv_sqrt(const DispersionParams& p, const Eigen::Matrix<double, N, 1>& v) {
  return detail::spectral<N>(
      v, [&](double s) { return 1.0 / std::sqrt(p.molecular() + p.alpha_l() * s); },
      [&](double s) { return 1.0 / std::sqrt(p.molecular() + p.alpha_t() * s); });
}

/// S(v)^{-1} v. v is the longitudinal eigenvector, so this is v / (S_m + alpha_L |v|).
template <int N>
Eigen::Matrix<double, N, 1> dispersion_inv_times_v(const DispersionParams& p,
                                                   const Eigen::Matrix<double, N, 1>& v) {
  const double speed = v.norm();
  if (speed < kZeroVelocity) return Eigen::Matrix<double, N, 1>::Zero();
  return v / (p.molecular() + p.alpha_l() * speed);
}

/// Uniform spectral constants of S over the speed ball |v| <= v_max.
struct DispersionBounds {
  double lambda_min;  // S_m
  double lambda_max;  // S_m + alpha_L v_max
  double m_minus;     // smallest eigenvalue of S^{-1} over the ball
  double m_plus;      // sup |S(v)^{-1} v|
  double sqrt_growth; // C in |S^{1/2} xi| <= C (1 + |v|^{1/2}) |xi|
  double c_disp;      // m_plus * sqrt_growth
};

DispersionBounds bound_constants(const DispersionParams& p, double v_max);

}  // namespace aquifer
