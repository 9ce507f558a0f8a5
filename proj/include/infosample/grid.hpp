#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace infosample {

struct GridIndex {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::uint32_t k = 0;
  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

/// Regular 3-D grid extents. Linearization is x-fastest.
class GridDims {
 public:
  GridDims() = default;
  GridDims(std::uint32_t nx, std::uint32_t ny, std::uint32_t nz);

  std::uint32_t nx() const noexcept { return n_[0]; }
  std::uint32_t ny() const noexcept { return n_[1]; }
  std::uint32_t nz() const noexcept { return n_[2]; }
  std::uint32_t extent(int axis) const noexcept { return n_[axis]; }
  std::uint64_t count() const noexcept {
    return std::uint64_t{n_[0]} * n_[1] * n_[2];
  }

  std::uint64_t linear(std::uint32_t i, std::uint32_t j, std::uint32_t k) const noexcept {
    return i + std::uint64_t{n_[0]} * (j + std::uint64_t{n_[1]} * k);
  }
  std::uint64_t linear(const GridIndex& g) const noexcept { return linear(g.i, g.j, g.k); }
  GridIndex delinearize(std::uint64_t index) const noexcept;

  friend bool operator==(const GridDims&, const GridDims&) = default;

 private:
  std::array<std::uint32_t, 3> n_{1, 1, 1};
};

struct Field {
  std::string name;
  GridDims dims;
  std::vector<double> values;

  Field() = default;
  Field(std::string name, GridDims dims, std::vector<double> values);
};

class MultiField {
 public:
  MultiField() = default;
  MultiField(GridDims dims, std::vector<Field> variables);

  const GridDims& dims() const noexcept { return dims_; }
  const std::vector<Field>& variables() const noexcept { return variables_; }
  std::size_t size() const noexcept { return variables_.size(); }

  /// Index of the named variable; throws UnknownVariable.
  std::size_t index_of(const std::string& name) const;
  std::optional<std::size_t> find(const std::string& name) const;
  const Field& variable(const std::string& name) const { return variables_[index_of(name)]; }
  std::vector<std::string> names() const;

 private:
  GridDims dims_;
  std::vector<Field> variables_;
};

/// Inclusive axis-aligned box in grid coordinates.
struct Box3 {
  std::array<std::uint32_t, 3> lo{0, 0, 0};
  std::array<std::uint32_t, 3> hi{0, 0, 0};

  bool contains(const GridIndex& g) const noexcept {
    return g.i >= lo[0] && g.i <= hi[0] && g.j >= lo[1] && g.j <= hi[1] && g.k >= lo[2] &&
           g.k <= hi[2];
  }
  std::uint64_t count() const noexcept {
    return std::uint64_t{hi[0] - lo[0] + 1} * (hi[1] - lo[1] + 1) * (hi[2] - lo[2] + 1);
  }
  static Box3 whole(const GridDims& d) noexcept {
    return {{0, 0, 0}, {d.nx() - 1, d.ny() - 1, d.nz() - 1}};
  }
};

/// Unstructured subset of grid points. Values are stored column-wise, one
/// column per variable; points are kept in ascending linear-index order.
class SampledPointSet {
 public:
  SampledPointSet() = default;
  SampledPointSet(GridDims dims, std::vector<std::string> variable_names);

  /// Builds a set from ascending, distinct indices by copying values out of mf.
  static SampledPointSet gather(const class MultiField& mf, std::span<const std::uint64_t> indices);

  const GridDims& dims() const noexcept { return dims_; }
  const std::vector<std::string>& variable_names() const noexcept { return names_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

  const std::vector<std::uint64_t>& indices() const noexcept { return indices_; }
  const std::vector<double>& column(std::size_t var) const { return columns_.at(var); }
  std::size_t index_of(const std::string& name) const;

  /// Appends a point; index must exceed the last one appended.
  void push_back(std::uint64_t linear_index, std::span<const double> values);

  /// Checks the container invariants; throws InvalidArgument on violation.
  void validate() const;

  friend bool operator==(const SampledPointSet&, const SampledPointSet&) = default;

 private:
  GridDims dims_;
  std::vector<std::string> names_;
  std::vector<std::uint64_t> indices_;
  std::vector<std::vector<double>> columns_;
};

}  // namespace infosample
