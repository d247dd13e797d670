#pragma once
// Dense complex linear algebra for pure states and density matrices on small
// tensor-product spaces: tensor products, outer products, partial traces, and
// pure-state fidelity. Validity (normalization, hermiticity, unit trace,
// positive semidefiniteness) is enforced at construction; constructors reject
// invalid data instead of repairing it.

#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qdel {

using Complex = std::complex<double>;

// Shared validation tolerances.
inline constexpr double norm_tol = 1e-12;      // normalization, hermiticity, trace
inline constexpr double psd_tol = 1e-10;       // smallest-eigenvalue floor
inline constexpr double isometry_tol = 1e-12;  // Gram deviation from identity

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(std::span<const Complex> v, const char* what) {
  for (Complex z : v) {
    if (!is_finite(z)) {
      throw std::invalid_argument(std::string(what) + ": non-finite component");
    }
  }
}

// An ordered list of named tensor factors. Index convention is mixed-radix
// with the first factor most significant:
//   k = ((i_0 * d_1) + i_1) * d_2 + i_2 ...
class SystemLayout {
 public:
  SystemLayout(std::vector<int> dims, std::vector<std::string> names)
      : dims_(std::move(dims)), names_(std::move(names)) {
    if (dims_.empty() || dims_.size() != names_.size()) {
      throw std::invalid_argument("SystemLayout: dims/names must be non-empty and equal length");
    }
    total_ = 1;
    for (int d : dims_) {
      if (d < 1) throw std::invalid_argument("SystemLayout: factor dimension must be >= 1");
      total_ *= d;
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
      for (std::size_t j = i + 1; j < names_.size(); ++j) {
        if (names_[i] == names_[j]) {
          throw std::invalid_argument("SystemLayout: duplicate factor name '" + names_[i] + "'");
        }
      }
    }
    strides_.assign(dims_.size(), 1);
    for (int f = static_cast<int>(dims_.size()) - 2; f >= 0; --f) {
      strides_[f] = strides_[f + 1] * dims_[f + 1];
    }
  }

  // The machine's space: mode1(2) x mode2(2) x ancilla(3), total dimension 12.
  static const SystemLayout& machine() {
    static const SystemLayout layout({2, 2, 3}, {"mode1", "mode2", "ancilla"});
    return layout;
  }

  int factor_count() const { return static_cast<int>(dims_.size()); }
  int dim(int factor) const { return dims_.at(factor); }
  int total_dim() const { return total_; }
  int stride(int factor) const { return strides_.at(factor); }
  const std::string& name(int factor) const { return names_.at(factor); }

  int index_of(std::string_view name) const {
    for (std::size_t f = 0; f < names_.size(); ++f) {
      if (names_[f] == name) return static_cast<int>(f);
    }
    throw std::invalid_argument("SystemLayout: unknown factor name '" + std::string(name) + "'");
  }

  int flatten(std::initializer_list<int> digits) const {
    if (static_cast<int>(digits.size()) != factor_count()) {
      throw std::invalid_argument("SystemLayout::flatten: digit count mismatch");
    }
    int k = 0, f = 0;
    for (int d : digits) {
      if (d < 0 || d >= dims_[f]) throw std::invalid_argument("SystemLayout::flatten: digit out of range");
      k += d * strides_[f++];
    }
    return k;
  }

  bool operator==(const SystemLayout& other) const {
    return dims_ == other.dims_ && names_ == other.names_;
  }

 private:
  std::vector<int> dims_;
  std::vector<std::string> names_;
  std::vector<int> strides_;
  int total_ = 0;
};

// Kronecker product of two raw amplitude vectors: (u (x) v)[i*n + j] = u[i]*v[j].
// Operates on unnormalized vectors; normalization is the caller's concern.
inline std::vector<Complex> tensor(std::span<const Complex> u, std::span<const Complex> v) {
  require_finite(u, "tensor");
  require_finite(v, "tensor");
  std::vector<Complex> w;
  w.reserve(u.size() * v.size());
  for (Complex x : u) {
    for (Complex y : v) w.push_back(x * y);
  }
  return w;
}

// A normalized pure state over a layout. Construction enforces sum |amp|^2 = 1
// within norm_tol; unnormalized intermediates should stay raw vectors.
class PureState {
 public:
  PureState(SystemLayout layout, std::vector<Complex> amplitudes)
      : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (static_cast<int>(amps_.size()) != layout_.total_dim()) {
      throw std::invalid_argument("PureState: amplitude count does not match layout dimension");
    }
    require_finite(amps_, "PureState");
    double n2 = 0.0;
    for (Complex z : amps_) n2 += std::norm(z);
    if (std::abs(n2 - 1.0) > norm_tol) {
      throw std::invalid_argument("PureState: squared norm " + std::to_string(n2) +
                                  " deviates from 1 beyond tolerance");
    }
  }

  const SystemLayout& layout() const { return layout_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  Complex amplitude(int k) const { return amps_.at(k); }
  int dim() const { return layout_.total_dim(); }

 private:
  SystemLayout layout_;
  std::vector<Complex> amps_;
};

// A density matrix, stored row-major. Construction enforces hermiticity and
// unit trace within norm_tol and all eigenvalues >= -psd_tol.
class DensityMatrix {
 public:
  DensityMatrix(int dim, std::vector<Complex> entries) : dim_(dim), entries_(std::move(entries)) {
    if (dim_ < 1 || static_cast<int>(entries_.size()) != dim_ * dim_) {
      throw std::invalid_argument("DensityMatrix: entry count does not match dimension");
    }
    require_finite(entries_, "DensityMatrix");
    double trace_re = 0.0, trace_im = 0.0;
    for (int i = 0; i < dim_; ++i) {
      trace_re += at(i, i).real();
      trace_im += at(i, i).imag();
      for (int j = i; j < dim_; ++j) {
        if (std::abs(at(i, j) - std::conj(at(j, i))) > norm_tol) {
          throw std::invalid_argument("DensityMatrix: not hermitian within tolerance");
        }
      }
    }
    if (std::abs(trace_re - 1.0) > norm_tol || std::abs(trace_im) > norm_tol) {
      throw std::invalid_argument("DensityMatrix: trace deviates from 1 beyond tolerance");
    }
    if (min_eigenvalue() < -psd_tol) {
      throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
    }
  }

  int dim() const { return dim_; }
  Complex at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * dim_ + j]; }
  std::span<const Complex> entries() const { return entries_; }

  Complex trace() const {
    Complex t = 0.0;
    for (int i = 0; i < dim_; ++i) t += at(i, i);
    return t;
  }

  // Smallest eigenvalue via a symmetric-eigenvalue routine (the matrix has
  // already passed the hermiticity check when called from the constructor).
  double min_eigenvalue() const {
    Eigen::MatrixXcd m(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) m(i, j) = at(i, j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

 private:
  int dim_;
  std::vector<Complex> entries_;
};

// |psi><psi| as a density matrix.
inline DensityMatrix outer(const PureState& psi) {
  const int n = psi.dim();
  std::vector<Complex> m(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(i) * n + j] = psi.amplitude(i) * std::conj(psi.amplitude(j));
    }
  }
  return DensityMatrix(n, std::move(m));
}

// Trace out every factor except `keep` (a factor name of `layout`).
inline DensityMatrix partial_trace(const DensityMatrix& rho, const SystemLayout& layout,
                                   std::string_view keep) {
  if (rho.dim() != layout.total_dim()) {
    throw std::invalid_argument("partial_trace: density matrix does not match layout");
  }
  const int f = layout.index_of(keep);
  const int dk = layout.dim(f);
  const int stride = layout.stride(f);
  const int comp = layout.total_dim() / dk;

  // Enumerate the complement space by walking all global indices with digit 0
  // at the kept factor; global = base + i*stride re-inserts the kept digit.
  std::vector<int> bases;
  bases.reserve(comp);
  for (int g = 0; g < layout.total_dim(); ++g) {
    if ((g / stride) % dk == 0) bases.push_back(g);
  }

  std::vector<Complex> out(static_cast<std::size_t>(dk) * dk, Complex{0.0});
  for (int i = 0; i < dk; ++i) {
    for (int j = 0; j < dk; ++j) {
      Complex sum = 0.0;
      for (int base : bases) sum += rho.at(base + i * stride, base + j * stride);
      out[static_cast<std::size_t>(i) * dk + j] = sum;
    }
  }
  return DensityMatrix(dk, std::move(out));
}

// <psi| rho |psi> for a pure target state; the value must be real within
// norm_tol and is returned as a double.
inline double fidelity_pure(const PureState& psi, const DensityMatrix& rho) {
  if (psi.dim() != rho.dim()) {
    throw std::invalid_argument("fidelity_pure: dimension mismatch");
  }
  Complex v = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    for (int j = 0; j < rho.dim(); ++j) {
      v += std::conj(psi.amplitude(i)) * rho.at(i, j) * psi.amplitude(j);
    }
  }
  if (std::abs(v.imag()) > norm_tol) {
    throw std::invalid_argument("fidelity_pure: value has non-negligible imaginary part");
  }
  return v.real();
}

}  // namespace qdel
