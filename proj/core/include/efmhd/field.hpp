/// \file field.hpp
/// \brief Element-major storage of nodal conserved states.
#pragma once

#include <span>
#include <vector>

#include "efmhd/physics.hpp"

namespace efmhd {

class Field {
 public:
  Field() = default;
  Field(int num_elements, int nodes_per_element)
      : num_elements_(num_elements),
        nodes_per_element_(nodes_per_element),
        data_(static_cast<std::size_t>(num_elements) * static_cast<std::size_t>(nodes_per_element)) {}

  int num_elements() const { return num_elements_; }
  int nodes_per_element() const { return nodes_per_element_; }
  std::size_t size() const { return data_.size(); }

  std::span<ConservedState> element(int e) {
    return {data_.data() + offset(e), static_cast<std::size_t>(nodes_per_element_)};
  }
  std::span<const ConservedState> element(int e) const {
    return {data_.data() + offset(e), static_cast<std::size_t>(nodes_per_element_)};
  }
  ConservedState& at(int e, int i) { return data_[offset(e) + static_cast<std::size_t>(i)]; }
  const ConservedState& at(int e, int i) const { return data_[offset(e) + static_cast<std::size_t>(i)]; }

  std::vector<ConservedState>& data() { return data_; }
  const std::vector<ConservedState>& data() const { return data_; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::size_t offset(int e) const { return static_cast<std::size_t>(e) * static_cast<std::size_t>(nodes_per_element_); }

  int num_elements_ = 0;
  int nodes_per_element_ = 0;
  std::vector<ConservedState> data_;
};

}  // namespace efmhd
