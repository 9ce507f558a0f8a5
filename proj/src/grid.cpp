#include "infosample/grid.hpp"

#include <set>

#include "infosample/error.hpp"

namespace infosample {

GridDims::GridDims(std::uint32_t nx, std::uint32_t ny, std::uint32_t nz) : n_{nx, ny, nz} {
  if (nx == 0 || ny == 0 || nz == 0) {
    throw Error(ErrorKind::InvalidArgument, "grid dimensions must be positive");
  }
}

GridIndex GridDims::delinearize(std::uint64_t index) const noexcept {
  const std::uint64_t plane = std::uint64_t{n_[0]} * n_[1];
  const auto k = static_cast<std::uint32_t>(index / plane);
  const std::uint64_t rem = index % plane;
  return {static_cast<std::uint32_t>(rem % n_[0]), static_cast<std::uint32_t>(rem / n_[0]), k};
}

Field::Field(std::string name_, GridDims dims_, std::vector<double> values_)
    : name(std::move(name_)), dims(dims_), values(std::move(values_)) {
  if (values.size() != dims.count()) {
    throw SizeMismatchError(dims.count(), values.size(), "field '" + name + "' value count");
  }
}

MultiField::MultiField(GridDims dims, std::vector<Field> variables)
    : dims_(dims), variables_(std::move(variables)) {
  if (variables_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "a multifield needs at least one variable");
  }
  std::set<std::string> seen;
  for (const auto& f : variables_) {
    if (!(f.dims == dims_)) {
      throw Error(ErrorKind::DimensionMismatch, "variable '" + f.name + "' has different dims");
    }
    if (!seen.insert(f.name).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate variable name '" + f.name + "'");
    }
  }
}

std::optional<std::size_t> MultiField::find(const std::string& name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t MultiField::index_of(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorKind::UnknownVariable, "'" + name + "'");
}

std::vector<std::string> MultiField::names() const {
  std::vector<std::string> out;
  out.reserve(variables_.size());
  for (const auto& f : variables_) out.push_back(f.name);
  return out;
}

SampledPointSet::SampledPointSet(GridDims dims, std::vector<std::string> variable_names)
    : dims_(dims), names_(std::move(variable_names)), columns_(names_.size()) {}

SampledPointSet SampledPointSet::gather(const MultiField& mf,
                                        std::span<const std::uint64_t> indices) {
  SampledPointSet ps(mf.dims(), mf.names());
  ps.indices_.assign(indices.begin(), indices.end());
  for (std::size_t v = 0; v < mf.size(); ++v) {
    const auto& src = mf.variables()[v].values;
    auto& col = ps.columns_[v];
    col.resize(indices.size());
    for (std::size_t p = 0; p < indices.size(); ++p) col[p] = src[indices[p]];
  }
  ps.validate();
  return ps;
}

std::size_t SampledPointSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw Error(ErrorKind::UnknownVariable, "'" + name + "'");
}

void SampledPointSet::push_back(std::uint64_t linear_index, std::span<const double> values) {
  if (values.size() != names_.size()) {
    throw SizeMismatchError(names_.size(), values.size(), "point value count");
  }
  if (linear_index >= dims_.count()) {
    throw Error(ErrorKind::IndexOutOfRange, "point index " + std::to_string(linear_index));
  }
  if (!indices_.empty() && linear_index <= indices_.back()) {
    throw Error(ErrorKind::InvalidArgument, "point indices must be strictly ascending");
  }
  indices_.push_back(linear_index);
  for (std::size_t v = 0; v < values.size(); ++v) columns_[v].push_back(values[v]);
}

void SampledPointSet::validate() const {
  const std::uint64_t n = dims_.count();
  for (std::size_t p = 0; p < indices_.size(); ++p) {
    if (indices_[p] >= n) {
      throw Error(ErrorKind::InvalidArgument, "point index out of grid");
    }
    if (p > 0 && indices_[p] <= indices_[p - 1]) {
      throw Error(ErrorKind::InvalidArgument, "point indices not strictly ascending");
    }
  }
  if (columns_.size() != names_.size()) {
    throw Error(ErrorKind::InvalidArgument, "column count does not match variable names");
  }
  for (const auto& c : columns_) {
    if (c.size() != indices_.size()) {
      throw Error(ErrorKind::InvalidArgument, "column length does not match point count");
    }
  }
}

}  // namespace infosample
