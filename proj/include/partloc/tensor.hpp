// Copyright 2026 The partloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace partloc {

/// Dense row-major tensor. Rank >= 1, every dim >= 1.
///
/// `Tensor` (32-bit float) is the exchange type used everywhere; the double
/// instantiation exists so gradient checks can run the same network code at
/// higher precision.
template <class T>
class BasicTensor {
 public:
  using value_type = T;

  BasicTensor() : dims_{1}, data_(1, T{0}) {}

  explicit BasicTensor(std::vector<std::size_t> dims, T fill = T{0})
      : dims_(std::move(dims)) {
    data_.assign(checked_size(dims_), fill);
  }

  BasicTensor(std::vector<std::size_t> dims, std::vector<T> data)
      : dims_(std::move(dims)), data_(std::move(data)) {
    if (data_.size() != checked_size(dims_))
      throw std::invalid_argument("tensor data length does not match dims");
  }

  static BasicTensor zeros(std::vector<std::size_t> dims) { return BasicTensor(std::move(dims)); }

  std::size_t rank() const { return dims_.size(); }
  std::size_t dim(std::size_t i) const { return dims_.at(i); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  T* raw() { return data_.data(); }
  const T* raw() const { return data_.data(); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T& at(std::size_t y, std::size_t x) { return data_[y * dims_[1] + x]; }
  const T& at(std::size_t y, std::size_t x) const { return data_[y * dims_[1] + x]; }
  T& at(std::size_t c, std::size_t y, std::size_t x) {
    return data_[(c * dims_[1] + y) * dims_[2] + x];
  }
  const T& at(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * dims_[1] + y) * dims_[2] + x];
  }

  void fill(T v) { data_.assign(data_.size(), v); }

  /// Same dims, same element values (== on T; -0 == +0).
  bool operator==(const BasicTensor&) const = default;

  static std::size_t checked_size(const std::vector<std::size_t>& dims) {
    if (dims.empty()) throw std::invalid_argument("tensor rank must be >= 1");
    std::size_t n = 1;
    for (std::size_t d : dims) {
      if (d == 0) throw std::invalid_argument("tensor dims must be >= 1");
      n *= d;
    }
    return n;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<T> data_;
};

using Tensor = BasicTensor<float>;

template <class To, class From>
BasicTensor<To> tensor_cast(const BasicTensor<From>& t) {
  std::vector<To> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = static_cast<To>(t[i]);
  return BasicTensor<To>(t.dims(), std::move(out));
}

/// Bitwise comparison of dims and payload; distinguishes -0 from +0 and
/// compares NaN payloads exactly.
bool bitwise_equal(const Tensor& a, const Tensor& b);

std::string shape_string(const std::vector<std::size_t>& dims);

}  // namespace partloc
