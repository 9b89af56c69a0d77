#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace alphavit::neural {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic>;

struct ParamSpec {
  std::string name;
  std::vector<int> shape;
  bool trainable = true;
  std::size_t offset = 0;

  std::size_t size() const;
  int rows() const { return shape.empty() ? 1 : shape.front(); }
  int cols() const { return static_cast<int>(size() / rows()); }
};

// Names, shapes and flat offsets of every array in a network. Arrays are
// packed back to back in declaration order.
class ParameterLayout {
 public:
  int add(std::string name, std::vector<int> shape, bool trainable = true);

  const std::vector<ParamSpec>& specs() const { return specs_; }
  const ParamSpec& spec(int id) const { return specs_[id]; }
  int find(const std::string& name) const;  // -1 when absent
  std::size_t total_size() const { return total_; }
  std::size_t trainable_size() const;

  bool operator==(const ParameterLayout& other) const;

 private:
  std::vector<ParamSpec> specs_;
  std::size_t total_ = 0;
};

// A flat buffer laid out by a ParameterLayout. Used both for the weights and
// for gradient / optimizer state of the same network.
// Storage is aligned to Eigen's widest packet, so buffers sharing a layout
// give bit-identical results.
template <typename T>
class ParameterBuffer {
 public:
  using Storage = std::vector<T, Eigen::aligned_allocator<T>>;
  using MatrixMap = Eigen::Map<Matrix<T>>;
  using ConstMatrixMap = Eigen::Map<const Matrix<T>>;

  ParameterBuffer() = default;
  explicit ParameterBuffer(const ParameterLayout* layout)
      : layout_(layout), values_(layout->total_size(), T(0)) {}

  const ParameterLayout& layout() const { return *layout_; }
  Storage& values() { return values_; }
  const Storage& values() const { return values_; }

  T* data(int id) { return values_.data() + layout_->spec(id).offset; }
  const T* data(int id) const { return values_.data() + layout_->spec(id).offset; }
  std::size_t size(int id) const { return layout_->spec(id).size(); }

  MatrixMap matrix(int id) {
    const auto& s = layout_->spec(id);
    return MatrixMap(data(id), s.rows(), s.cols());
  }
  ConstMatrixMap matrix(int id) const {
    const auto& s = layout_->spec(id);
    return ConstMatrixMap(data(id), s.rows(), s.cols());
  }
  // 1-D arrays viewed as a single row.
  Eigen::Map<RowVector<T>> row(int id) { return Eigen::Map<RowVector<T>>(data(id), size(id)); }
  Eigen::Map<const RowVector<T>> row(int id) const {
    return Eigen::Map<const RowVector<T>>(data(id), size(id));
  }

  void set_zero() { std::fill(values_.begin(), values_.end(), T(0)); }

  // Rebinds to an identical layout owned elsewhere (used after copying a
  // network, whose layout moves with it).
  void rebind(const ParameterLayout* layout) { layout_ = layout; }

 private:
  const ParameterLayout* layout_ = nullptr;
  Storage values_;
};

}  // namespace alphavit::neural
