#ifndef AMD_TYPE_SPACE_HPP
#define AMD_TYPE_SPACE_HPP

#include <cstdint>
#include <vector>

namespace amd {

using VectorIndex = std::int64_t;

// Row-major indexing of the product space of per-agent type sets, in
// declared agent order (the last agent varies fastest). All tables over
// type vectors in the toolkit use this flat order, so one index scheme
// defines cell order, serialization order, and lexicographic tie-breaks.
class TypeSpace {
 public:
  TypeSpace() = default;
  explicit TypeSpace(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    strides_.assign(sizes_.size(), 1);
    total_ = 1;
    for (int a = static_cast<int>(sizes_.size()) - 1; a >= 0; --a) {
      strides_[a] = total_;
      total_ *= sizes_[a];
    }
  }

  int num_agents() const { return static_cast<int>(sizes_.size()); }
  int size(int agent) const { return sizes_[agent]; }
  const std::vector<int>& sizes() const { return sizes_; }
  VectorIndex total() const { return total_; }

  VectorIndex encode(const std::vector<int>& types) const {
    VectorIndex v = 0;
    for (std::size_t a = 0; a < sizes_.size(); ++a) v += types[a] * strides_[a];
    return v;
  }

  std::vector<int> decode(VectorIndex v) const {
    std::vector<int> types(sizes_.size());
    for (std::size_t a = 0; a < sizes_.size(); ++a) {
      types[a] = static_cast<int>(v / strides_[a]);
      v %= strides_[a];
    }
    return types;
  }

  int type_of(VectorIndex v, int agent) const {
    return static_cast<int>((v / strides_[agent]) % sizes_[agent]);
  }

  // Index of the vector that differs from v only in `agent`'s coordinate.
  VectorIndex replace(VectorIndex v, int agent, int type) const {
    return v + (type - type_of(v, agent)) * strides_[agent];
  }

  // The product space of all agents except `agent`; an empty product
  // (one agent total) has exactly one opposing vector.
  TypeSpace opposing(int agent) const {
    std::vector<int> rest;
    rest.reserve(sizes_.size() - 1);
    for (std::size_t a = 0; a < sizes_.size(); ++a)
      if (static_cast<int>(a) != agent) rest.push_back(sizes_[a]);
    return TypeSpace(std::move(rest));
  }

  // Combines an opposing-space index with agent's own type into a full
  // vector index. `opp` is row-major over the remaining agents in order.
  VectorIndex combine(int agent, int own_type, VectorIndex opp) const {
    VectorIndex v = 0;
    for (int a = static_cast<int>(sizes_.size()) - 1; a >= 0; --a) {
      if (a == agent) continue;
      v += (opp % sizes_[a]) * strides_[a];
      opp /= sizes_[a];
    }
    return v + static_cast<VectorIndex>(own_type) * strides_[agent];
  }

 private:
  std::vector<int> sizes_;
  std::vector<VectorIndex> strides_;
  VectorIndex total_ = 1;
};

}  // namespace amd

#endif  // AMD_TYPE_SPACE_HPP
