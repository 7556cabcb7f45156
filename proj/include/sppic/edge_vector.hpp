#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sppic/error.hpp"

namespace sppic {

/// Integer vector indexed by edge position, either over all of E or over a
/// vertex star E_v. The domain is identified by its length.
class EdgeVector {
 public:
  EdgeVector() = default;
  explicit EdgeVector(std::size_t n, int fill = 0) : values_(n, fill) {}
  explicit EdgeVector(std::vector<int> values) : values_(std::move(values)) {}
  EdgeVector(std::initializer_list<int> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  int& operator[](std::size_t i) { return values_[i]; }
  int operator[](std::size_t i) const { return values_[i]; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  const std::vector<int>& values() const { return values_; }
  std::span<const int> span() const { return values_; }

  /// |x| = sum of absolute values.
  long total() const {
    long s = 0;
    for (int v : values_) s += v < 0 ? -v : v;
    return s;
  }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](int v) { return v == 0; });
  }

  /// Pointwise x <= y.
  bool dominated_by(const EdgeVector& y) const {
    require_same_domain(y);
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] > y.values_[i]) return false;
    return true;
  }

  EdgeVector& operator+=(const EdgeVector& y) {
    require_same_domain(y);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += y.values_[i];
    return *this;
  }
  EdgeVector& operator-=(const EdgeVector& y) {
    require_same_domain(y);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= y.values_[i];
    return *this;
  }
  friend EdgeVector operator+(EdgeVector x, const EdgeVector& y) { return x += y; }
  friend EdgeVector operator-(EdgeVector x, const EdgeVector& y) { return x -= y; }
  friend EdgeVector operator*(int k, EdgeVector x) {
    for (int& v : x.values_) v *= k;
    return x;
  }
  friend EdgeVector operator-(EdgeVector x) {
    for (int& v : x.values_) v = -v;
    return x;
  }

  friend bool operator==(const EdgeVector&, const EdgeVector&) = default;
  friend auto operator<=>(const EdgeVector& a, const EdgeVector& b) = default;

  void require_same_domain(const EdgeVector& y) const {
    if (y.size() != size())
      throw InputError("edge vector domain mismatch: " + std::to_string(size()) + " vs " +
                       std::to_string(y.size()));
  }

 private:
  std::vector<int> values_;
};

enum class VectorOp { join, meet, sum, diff };

/// Pointwise max / min / sum / difference. `diff` refuses to leave Z_+ unless
/// the caller declares a signed result.
inline EdgeVector vector_ops(const EdgeVector& x, const EdgeVector& y, VectorOp kind,
                             bool signed_result = false) {
  x.require_same_domain(y);
  EdgeVector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    switch (kind) {
      case VectorOp::join: r[i] = std::max(x[i], y[i]); break;
      case VectorOp::meet: r[i] = std::min(x[i], y[i]); break;
      case VectorOp::sum: r[i] = x[i] + y[i]; break;
      case VectorOp::diff:
        r[i] = x[i] - y[i];
        if (r[i] < 0 && !signed_result)
          throw InputError("vector difference leaves Z_+ at position " + std::to_string(i));
        break;
    }
  }
  return r;
}

inline EdgeVector join(const EdgeVector& x, const EdgeVector& y) {
  return vector_ops(x, y, VectorOp::join);
}
inline EdgeVector meet(const EdgeVector& x, const EdgeVector& y) {
  return vector_ops(x, y, VectorOp::meet);
}

/// Unit vector 1^e on a domain of size n.
inline EdgeVector unit(std::size_t n, std::size_t e) {
  EdgeVector u(n);
  u[e] = 1;
  return u;
}

struct EdgeVectorHash {
  std::size_t operator()(const EdgeVector& x) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (int v : x) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Mixed-radix enumeration of the integer box {z : 0 <= z <= cap}.
class Box {
 public:
  explicit Box(std::vector<int> caps) : caps_(std::move(caps)) {}

  const std::vector<int>& caps() const { return caps_; }
  std::size_t dimension() const { return caps_.size(); }

  /// Number of points, saturating at `limit + 1` so callers can compare to a budget.
  unsigned long long size(unsigned long long limit = ~0ull) const {
    unsigned long long n = 1;
    for (int c : caps_) {
      unsigned long long f = static_cast<unsigned long long>(c) + 1;
      if (n > limit / f) return limit == ~0ull ? limit : limit + 1;
      n *= f;
    }
    return n;
  }

  bool contains(const EdgeVector& z) const {
    if (z.size() != caps_.size()) return false;
    for (std::size_t i = 0; i < caps_.size(); ++i)
      if (z[i] < 0 || z[i] > caps_[i]) return false;
    return true;
  }

  std::size_t index_of(const EdgeVector& z) const {
    std::size_t idx = 0;
    for (std::size_t i = caps_.size(); i-- > 0;) idx = idx * (caps_[i] + 1) + z[i];
    return idx;
  }

  /// Visits every point in increasing index order; stop early by returning false.
  template <class F>
  void for_each(F&& visit) const {
    EdgeVector z(caps_.size());
    while (true) {
      if (!visit(static_cast<const EdgeVector&>(z))) return;
      std::size_t i = 0;
      while (i < caps_.size() && z[i] == caps_[i]) z[i++] = 0;
      if (i == caps_.size()) return;
      ++z[i];
    }
  }

  /// Visits every z' with 0 <= z' <= z.
  template <class F>
  static void for_each_below(const EdgeVector& z, F&& visit) {
    EdgeVector w(z.size());
    while (true) {
      if (!visit(static_cast<const EdgeVector&>(w))) return;
      std::size_t i = 0;
      while (i < z.size() && w[i] == z[i]) w[i++] = 0;
      if (i == z.size()) return;
      ++w[i];
    }
  }

 private:
  std::vector<int> caps_;
};

}  // namespace sppic
