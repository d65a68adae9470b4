#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lacuna {

/// Dense values over a rectangular block of nodes, addressed 1-based as
/// (spatial index, time index). Storage is spatial-major with the time index
/// varying fastest; this is also the flattening order fed to the network.
template <class T> class Field {
public:
  using value_type = T;

  Field() = default;
  Field(int nx, int nt, T fill = T{}) : nx_(nx), nt_(nt) {
    if (nx < 1 || nt < 1) {
      throw std::invalid_argument("field: dimensions must be positive");
    }
    values_.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt), fill);
  }
  Field(int nx, int nt, std::vector<T> values) : nx_(nx), nt_(nt), values_(std::move(values)) {
    if (nx < 1 || nt < 1 ||
        values_.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt)) {
      throw std::invalid_argument("field: value count " + std::to_string(values_.size()) +
                                  " does not match " + std::to_string(nx) + "x" +
                                  std::to_string(nt));
    }
  }

  int nx() const { return nx_; }
  int nt() const { return nt_; }
  std::size_t size() const { return values_.size(); }

  std::size_t offset(int i, int k) const {
    return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(nt_) +
           static_cast<std::size_t>(k - 1);
  }

  T &operator()(int i, int k) { return values_[offset(i, k)]; }
  const T &operator()(int i, int k) const { return values_[offset(i, k)]; }

  T &at(int i, int k) {
    check(i, k);
    return values_[offset(i, k)];
  }
  const T &at(int i, int k) const {
    check(i, k);
    return values_[offset(i, k)];
  }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  friend bool operator==(const Field &, const Field &) = default;

private:
  void check(int i, int k) const {
    if (i < 1 || i > nx_ || k < 1 || k > nt_) {
      throw std::out_of_range("field: index (" + std::to_string(i) + ", " + std::to_string(k) +
                              ") outside " + std::to_string(nx_) + "x" + std::to_string(nt_));
    }
  }

  int nx_ = 0;
  int nt_ = 0;
  std::vector<T> values_;
};

/// +1 on sub-grid nodes inside the source support, -1 elsewhere.
using PhiField = Field<std::int8_t>;
/// Reference lacuna indicator over the full grid: -1 in the lacuna, +1 outside.
using PsiField = Field<std::int8_t>;
/// Real-valued network output over the full grid, in (-1, 1).
using PsiPrediction = Field<double>;

} // namespace lacuna
