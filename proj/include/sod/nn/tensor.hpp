#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "sod/core/error.hpp"
#include "sod/core/rng.hpp"

namespace sod::nn {

// Dense row-major double tensor. Activations are laid out [N, C, H, W],
// token matrices [rows, cols].
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
    data_.assign(static_cast<size_t>(numel_of(shape_)), 0.0);
  }

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }

  static Tensor full(std::vector<int> shape, double v) {
    Tensor t(std::move(shape));
    t.fill(v);
    return t;
  }

  static Tensor randn(std::vector<int> shape, Rng& rng, double stddev = 1.0) {
    Tensor t(std::move(shape));
    for (double& x : t.data_) x = rng.normal(0.0, stddev);
    return t;
  }

  const std::vector<int>& shape() const { return shape_; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }

  double& at(int a, int b) { return data_[static_cast<size_t>(a) * shape_[1] + b]; }
  double at(int a, int b) const {
    return data_[static_cast<size_t>(a) * shape_[1] + b];
  }
  double& at(int a, int b, int c) {
    return data_[(static_cast<size_t>(a) * shape_[1] + b) * shape_[2] + c];
  }
  double at(int a, int b, int c) const {
    return data_[(static_cast<size_t>(a) * shape_[1] + b) * shape_[2] + c];
  }
  double& at(int a, int b, int c, int d) {
    return data_[((static_cast<size_t>(a) * shape_[1] + b) * shape_[2] + c) *
                     shape_[3] +
                 d];
  }
  double at(int a, int b, int c, int d) const {
    return data_[((static_cast<size_t>(a) * shape_[1] + b) * shape_[2] + c) *
                     shape_[3] +
                 d];
  }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
  void zero() { fill(0.0); }

  // Metadata-only reshape; element count must match.
  void set_shape(std::vector<int> shape) {
    if (numel_of(shape) != numel())
      throw ValueError("Tensor reshape changes element count");
    shape_ = std::move(shape);
  }

  Tensor reshaped(std::vector<int> shape) const& {
    Tensor t = *this;
    t.set_shape(std::move(shape));
    return t;
  }
  Tensor reshaped(std::vector<int> shape) && {
    set_shape(std::move(shape));
    return std::move(*this);
  }

  static int64_t numel_of(const std::vector<int>& shape) {
    int64_t n = 1;
    for (int d : shape) {
      if (d < 0) throw ValueError("Tensor: negative dimension");
      n *= d;
    }
    return n;
  }

  std::string shape_str() const {
    std::string s = "[";
    for (size_t i = 0; i < shape_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(shape_[i]);
    }
    return s + "]";
  }

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

struct Param {
  std::string name;
  Tensor value;
  Tensor grad;
  bool trainable = true;

  Param() = default;
  Param(std::string n, Tensor v, bool train = true)
      : name(std::move(n)), value(std::move(v)), grad(value.shape()), trainable(train) {}

  void zero_grad() { grad.zero(); }
};

}  // namespace sod::nn
