#include "alphavit/neural/parameters.hpp"

#include <functional>
#include <numeric>
#include <stdexcept>

namespace alphavit::neural {

std::size_t ParamSpec::size() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); });
}

int ParameterLayout::add(std::string name, std::vector<int> shape, bool trainable) {
  if (find(name) >= 0) throw std::logic_error("duplicate parameter name " + name);
  ParamSpec spec{std::move(name), std::move(shape), trainable, total_};
  total_ += spec.size();
  specs_.push_back(std::move(spec));
  return static_cast<int>(specs_.size()) - 1;
}

int ParameterLayout::find(const std::string& name) const {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::size_t ParameterLayout::trainable_size() const {
  std::size_t n = 0;
  for (const auto& s : specs_) {
    if (s.trainable) n += s.size();
  }
  return n;
}

bool ParameterLayout::operator==(const ParameterLayout& other) const {
  if (specs_.size() != other.specs_.size()) return false;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& a = specs_[i];
    const auto& b = other.specs_[i];
    if (a.name != b.name || a.shape != b.shape || a.trainable != b.trainable) return false;
  }
  return true;
}

}  // namespace alphavit::neural
