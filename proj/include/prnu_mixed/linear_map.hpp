#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "prnu_mixed/error.hpp"
#include "prnu_mixed/rational.hpp"

namespace prnu {

template <typename W>
struct WeightEntry {
  std::uint32_t source = 0;
  W weight{};
  friend bool operator==(const WeightEntry&, const WeightEntry&) = default;
};

// Sparse row-compressed linear operator from `inputs` source values to
// rows() outputs. Entries of each row are sorted by source index with
// duplicates merged, so every consumer sums in the same order.
template <typename W>
class LinearMap {
 public:
  LinearMap() = default;
  explicit LinearMap(std::size_t inputs) : inputs_(inputs) {}

  static LinearMap identity(std::size_t n) {
    LinearMap m(n);
    m.entries_.reserve(n);
    m.offsets_.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      m.entries_.push_back({static_cast<std::uint32_t>(i), W(1)});
      m.offsets_.push_back(m.entries_.size());
    }
    return m;
  }

  std::size_t rows() const { return offsets_.size() - 1; }
  std::size_t inputs() const { return inputs_; }
  std::size_t nonzeros() const { return entries_.size(); }

  std::span<const WeightEntry<W>> row(std::size_t i) const {
    return {entries_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  // Appends a row; `scratch` is sorted and merged in place.
  void push_row(std::vector<WeightEntry<W>>& scratch) {
    std::sort(scratch.begin(), scratch.end(), [](const auto& a, const auto& b) { return a.source < b.source; });
    std::size_t start = entries_.size();
    for (const auto& e : scratch) {
      if (e.source >= inputs_) throw DimensionError("weight map source index out of range");
      if (entries_.size() > start && entries_.back().source == e.source) {
        entries_.back().weight += e.weight;
      } else {
        entries_.push_back(e);
      }
    }
    // Zero weights carry no alignment and are dropped.
    auto first = entries_.begin() + static_cast<std::ptrdiff_t>(start);
    entries_.erase(std::remove_if(first, entries_.end(), [](const auto& e) { return e.weight == W(0); }),
                   entries_.end());
    offsets_.push_back(entries_.size());
  }

  W row_sum(std::size_t i) const {
    W s(0);
    for (const auto& e : row(i)) s += e.weight;
    return s;
  }

  // out[i] = sum_j w_ij in[j], summed in source order.
  void apply(std::span<const double> in, std::span<double> out) const {
    if (in.size() != inputs_ || out.size() != rows()) throw DimensionError("LinearMap::apply: size mismatch");
    for (std::size_t i = 0; i < rows(); ++i) {
      double acc = 0.0;
      for (const auto& e : row(i)) acc += weight_to_double(e.weight) * in[e.source];
      out[i] = acc;
    }
  }

 private:
  std::size_t inputs_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<WeightEntry<W>> entries_;
};

// outer o inner: first apply `inner`, then `outer`.
template <typename W>
LinearMap<W> compose(const LinearMap<W>& outer, const LinearMap<W>& inner) {
  if (outer.inputs() != inner.rows()) throw DimensionError("compose: inner output count != outer input count");
  LinearMap<W> result(inner.inputs());
  std::vector<W> acc(inner.inputs(), W(0));
  std::vector<std::uint8_t> touched(inner.inputs(), 0);
  std::vector<std::uint32_t> touched_list;
  std::vector<WeightEntry<W>> scratch;
  for (std::size_t i = 0; i < outer.rows(); ++i) {
    touched_list.clear();
    for (const auto& o : outer.row(i)) {
      for (const auto& e : inner.row(o.source)) {
        if (!touched[e.source]) {
          touched[e.source] = 1;
          touched_list.push_back(e.source);
        }
        acc[e.source] += o.weight * e.weight;
      }
    }
    scratch.clear();
    for (std::uint32_t s : touched_list) {
      scratch.push_back({s, acc[s]});
      acc[s] = W(0);
      touched[s] = 0;
    }
    result.push_row(scratch);
  }
  return result;
}

}  // namespace prnu
