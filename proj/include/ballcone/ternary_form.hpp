#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ballcone {

// Homogeneous polynomial in (u1, u2, u3) stored as a dense coefficient list.
// The monomial u1^i u2^j u3^(d-i-j) sits at index i*(2d+3-i)/2 + j.
// Scalar only needs ring operations, so the same code serves double and
// exact rationals.
template <class Scalar>
class TernaryForm {
 public:
  TernaryForm() = default;

  explicit TernaryForm(int degree) : degree_(degree), coeffs_(monomial_count(degree), Scalar(0)) {}

  static TernaryForm constant(const Scalar& value) {
    TernaryForm f(0);
    f.coeffs_[0] = value;
    return f;
  }

  // Coordinate form u_axis.
  static TernaryForm variable(int axis) {
    TernaryForm f(1);
    f.coefficient(axis == 0 ? 1 : 0, axis == 1 ? 1 : 0) = Scalar(1);
    return f;
  }

  // Quadratic form u^T M u for a symmetric 3x3 M given row-major.
  static TernaryForm quadratic(const std::array<Scalar, 9>& m) {
    TernaryForm f(2);
    f.coefficient(2, 0) = m[0];
    f.coefficient(0, 2) = m[4];
    f.coefficient(0, 0) = m[8];
    f.coefficient(1, 1) = m[1] + m[3];
    f.coefficient(1, 0) = m[2] + m[6];
    f.coefficient(0, 1) = m[5] + m[7];
    return f;
  }

  static std::size_t monomial_count(int degree) {
    return degree < 0 ? 0 : static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
  }

  int degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<Scalar>& coefficients() const { return coeffs_; }

  std::size_t index(int i, int j) const {
    assert(i >= 0 && j >= 0 && i + j <= degree_);
    return static_cast<std::size_t>(i * (2 * degree_ + 3 - i) / 2 + j);
  }

  Scalar& coefficient(int i, int j) { return coeffs_[index(i, j)]; }
  const Scalar& coefficient(int i, int j) const { return coeffs_[index(i, j)]; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (c != Scalar(0)) return false;
    return true;
  }

  TernaryForm& operator+=(const TernaryForm& other) {
    if (other.degree_ < 0) return *this;
    if (degree_ < 0) return *this = other;
    if (degree_ != other.degree_) throw std::invalid_argument("TernaryForm: adding forms of different degree");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
    return *this;
  }

  TernaryForm& operator-=(const TernaryForm& other) {
    TernaryForm neg = other;
    for (auto& c : neg.coeffs_) c = -c;
    return *this += neg;
  }

  TernaryForm& operator*=(const Scalar& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend TernaryForm operator+(TernaryForm a, const TernaryForm& b) { return a += b; }
  friend TernaryForm operator-(TernaryForm a, const TernaryForm& b) { return a -= b; }
  friend TernaryForm operator*(TernaryForm a, const Scalar& s) { return a *= s; }

  friend TernaryForm operator*(const TernaryForm& a, const TernaryForm& b) {
    if (a.degree_ < 0 || b.degree_ < 0) return TernaryForm();
    TernaryForm out(a.degree_ + b.degree_);
    for (int i = 0; i <= a.degree_; ++i)
      for (int j = 0; i + j <= a.degree_; ++j) {
        const Scalar& ca = a.coefficient(i, j);
        if (ca == Scalar(0)) continue;
        for (int k = 0; k <= b.degree_; ++k)
          for (int l = 0; k + l <= b.degree_; ++l) {
            const Scalar& cb = b.coefficient(k, l);
            if (cb == Scalar(0)) continue;
            out.coefficient(i + k, j + l) += ca * cb;
          }
      }
    return out;
  }

  // Partial derivative with respect to u_axis; degree drops by one.
  TernaryForm derivative(int axis) const {
    if (degree_ <= 0) return TernaryForm(0);
    TernaryForm out(degree_ - 1);
    for (int i = 0; i <= degree_; ++i)
      for (int j = 0; i + j <= degree_; ++j) {
        const int k = degree_ - i - j;
        const Scalar& c = coefficient(i, j);
        if (c == Scalar(0)) continue;
        if (axis == 0 && i > 0) out.coefficient(i - 1, j) += c * Scalar(i);
        if (axis == 1 && j > 0) out.coefficient(i, j - 1) += c * Scalar(j);
        if (axis == 2 && k > 0) out.coefficient(i, j) += c * Scalar(k);
      }
    return out;
  }

  // Horner-free direct evaluation with cached powers.
  Scalar operator()(const Scalar& u1, const Scalar& u2, const Scalar& u3) const {
    if (degree_ < 0) return Scalar(0);
    std::vector<Scalar> p1(degree_ + 1), p2(degree_ + 1), p3(degree_ + 1);
    p1[0] = p2[0] = p3[0] = Scalar(1);
    for (int e = 1; e <= degree_; ++e) {
      p1[e] = p1[e - 1] * u1;
      p2[e] = p2[e - 1] * u2;
      p3[e] = p3[e - 1] * u3;
    }
    Scalar sum(0);
    for (int i = 0; i <= degree_; ++i)
      for (int j = 0; i + j <= degree_; ++j) {
        const Scalar& c = coefficient(i, j);
        if (c == Scalar(0)) continue;
        sum += c * p1[i] * p2[j] * p3[degree_ - i - j];
      }
    return sum;
  }

 private:
  int degree_ = -1;  // -1 encodes the zero form of unspecified degree
  std::vector<Scalar> coeffs_;
};

// Determinant of a square matrix of forms by permutation expansion, skipping
// zero entries. Sized for the 5x5 Cayley matrix; fine up to ~7x7.
template <class Scalar, std::size_t N>
TernaryForm<Scalar> determinant(const std::array<std::array<TernaryForm<Scalar>, N>, N>& m) {
  std::array<int, N> perm;
  for (std::size_t k = 0; k < N; ++k) perm[k] = static_cast<int>(k);
  std::array<bool, N> used{};
  TernaryForm<Scalar> total;

  // Depth-first over partial permutations so zero prefixes prune whole subtrees.
  struct Frame {
    static void run(const std::array<std::array<TernaryForm<Scalar>, N>, N>& m, std::size_t row,
                    std::array<bool, N>& used, std::array<int, N>& perm, const TernaryForm<Scalar>& acc,
                    TernaryForm<Scalar>& total) {
      if (row == N) {
        int inversions = 0;
        for (std::size_t a = 0; a < N; ++a)
          for (std::size_t b = a + 1; b < N; ++b)
            if (perm[a] > perm[b]) ++inversions;
        if (inversions % 2 == 0)
          total += acc;
        else
          total -= acc;
        return;
      }
      for (std::size_t col = 0; col < N; ++col) {
        if (used[col]) continue;
        const auto& entry = m[row][col];
        if (entry.degree() < 0 || entry.is_zero()) continue;
        used[col] = true;
        perm[row] = static_cast<int>(col);
        run(m, row + 1, used, perm, acc * entry, total);
        used[col] = false;
      }
    }
  };
  Frame::run(m, 0, used, perm, TernaryForm<Scalar>::constant(Scalar(1)), total);
  return total;
}

}  // namespace ballcone
