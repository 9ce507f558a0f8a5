#include "infosample/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "infosample/error.hpp"
#include "infosample/random.hpp"

namespace infosample::synth {
namespace {

std::uint64_t stream_for(std::size_t var, std::uint64_t purpose) {
  return static_cast<std::uint64_t>(rng::Stream::SyntheticBase) + 4 * var + purpose;
}

double background_value(const Background& bg, double u) {
  if (bg.levels == 0) return bg.lo + u * (bg.hi - bg.lo);
  const double level = std::min(std::floor(u * bg.levels), double(bg.levels - 1));
  return bg.lo + (level + 0.5) / bg.levels * (bg.hi - bg.lo);
}

}  // namespace

bool Feature::contains(double x, double y, double z) const noexcept {
  const double dx = (x - center[0]) / radii[0];
  const double dy = (y - center[1]) / radii[1];
  const double dz = (z - center[2]) / radii[2];
  return dx * dx + dy * dy + dz * dz <= 1.0;
}

Box3 Feature::core_box(const GridDims& dims, double scale) const {
  Box3 box;
  for (int a = 0; a < 3; ++a) {
    const auto half = static_cast<std::int64_t>(std::floor(scale * radii[a] / std::sqrt(3.0)));
    const auto c = static_cast<std::int64_t>(std::llround(center[a]));
    const std::int64_t last = std::int64_t{dims.extent(a)} - 1;
    box.lo[a] = static_cast<std::uint32_t>(std::clamp<std::int64_t>(c - half, 0, last));
    box.hi[a] = static_cast<std::uint32_t>(std::clamp<std::int64_t>(c + half, 0, last));
  }
  return box;
}

void SyntheticSpec::validate() const {
  if (variables.size() < 2) throw Error(ErrorKind::InvalidSpec, "need at least two variables");
  std::set<std::string> names;
  for (const auto& v : variables) {
    if (v.name.empty()) throw Error(ErrorKind::InvalidSpec, "empty variable name");
    if (!names.insert(v.name).second) {
      throw Error(ErrorKind::InvalidSpec, "duplicate variable '" + v.name + "'");
    }
    if (!(v.background.hi >= v.background.lo) || !std::isfinite(v.background.lo) ||
        !std::isfinite(v.background.hi)) {
      throw Error(ErrorKind::InvalidSpec, "background range of '" + v.name + "' is invalid");
    }
  }
  for (const auto& f : features) {
    if (f.variables.empty() || f.values.size() != f.variables.size()) {
      throw Error(ErrorKind::InvalidSpec, "feature values must match its variable list");
    }
    if (!f.phases.empty() && f.phases.size() != f.variables.size()) {
      throw Error(ErrorKind::InvalidSpec, "feature phases must match its variable list");
    }
    for (const auto& name : f.variables) {
      if (!names.count(name)) throw Error(ErrorKind::InvalidSpec, "feature names unknown '" + name + "'");
    }
    for (double r : f.radii) {
      if (!(r > 0)) throw Error(ErrorKind::InvalidSpec, "feature radii must be positive");
    }
    if (!(f.wavelength > 0) || !(f.amplitude >= 0) || !(f.noise >= 0)) {
      throw Error(ErrorKind::InvalidSpec, "feature wavelength/amplitude/noise out of range");
    }
  }
}

SyntheticSpec SyntheticSpec::feature_preset(std::uint32_t n) {
  const double s = n / 64.0;
  SyntheticSpec spec;
  spec.dims = GridDims(n, n, n);
  spec.variables = {{"v0", {0.0, 1.0, 32}}, {"v1", {0.0, 1.0, 32}}};
  Feature f;
  f.center = {n / 2.0, n / 2.0, n / 2.0};
  f.radii = {20 * s, 20 * s, 12 * s};
  f.variables = {"v0", "v1"};
  f.values = {1.2, -0.2};
  f.phases = {0.0, 1.0};
  f.amplitude = 0.002;
  f.wavelength = 16 * s;
  spec.features.push_back(f);
  return spec;
}

SyntheticSpec SyntheticSpec::independent_preset(std::uint32_t n, std::size_t n_vars) {
  SyntheticSpec spec;
  spec.dims = GridDims(n, n, n);
  for (std::size_t v = 0; v < n_vars; ++v) {
    spec.variables.push_back({"v" + std::to_string(v), {0.0, 1.0, 0}});
  }
  return spec;
}

MultiField make_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  const GridDims& dims = spec.dims;
  const std::uint64_t n = dims.count();

  std::vector<Field> fields;
  for (std::size_t v = 0; v < spec.variables.size(); ++v) {
    const rng::CounterRng gen(seed, stream_for(v, 0));
    std::vector<double> values(n);
    for (std::uint64_t p = 0; p < n; ++p) {
      values[p] = background_value(spec.variables[v].background, gen.uniform(p));
    }
    fields.emplace_back(spec.variables[v].name, dims, std::move(values));
  }

  auto var_index = [&](const std::string& name) {
    for (std::size_t v = 0; v < spec.variables.size(); ++v) {
      if (spec.variables[v].name == name) return v;
    }
    return spec.variables.size();
  };

  for (const auto& f : spec.features) {
    std::vector<std::size_t> targets;
    for (const auto& name : f.variables) targets.push_back(var_index(name));
    for (std::uint32_t k = 0; k < dims.nz(); ++k) {
      for (std::uint32_t j = 0; j < dims.ny(); ++j) {
        for (std::uint32_t i = 0; i < dims.nx(); ++i) {
          if (!f.contains(i, j, k)) continue;
          const std::uint64_t p = dims.linear(i, j, k);
          const double dx = i - f.center[0], dy = j - f.center[1], dz = k - f.center[2];
          const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
          for (std::size_t t = 0; t < targets.size(); ++t) {
            const double phase = f.phases.empty() ? 0.0 : f.phases[t];
            double value = f.values[t] +
                           f.amplitude * std::cos(2 * std::numbers::pi * dist / f.wavelength + phase);
            if (f.noise > 0) {
              const rng::CounterRng noise(seed, stream_for(targets[t], 1));
              value += f.noise * (2 * noise.uniform(p) - 1);
            }
            fields[targets[t]].values[p] = value;
          }
        }
      }
    }
  }

  for (auto& f : fields) {
    for (auto& v : f.values) v = static_cast<double>(static_cast<float>(v));
  }
  return MultiField(dims, std::move(fields));
}

std::vector<std::uint8_t> feature_mask(const SyntheticSpec& spec, std::size_t feature_index) {
  const auto& f = spec.features.at(feature_index);
  const GridDims& dims = spec.dims;
  std::vector<std::uint8_t> mask(dims.count(), 0);
  for (std::uint32_t k = 0; k < dims.nz(); ++k)
    for (std::uint32_t j = 0; j < dims.ny(); ++j)
      for (std::uint32_t i = 0; i < dims.nx(); ++i)
        if (f.contains(i, j, k)) mask[dims.linear(i, j, k)] = 1;
  return mask;
}

nlohmann::json to_json(const SyntheticSpec& spec) {
  nlohmann::json j;
  j["dims"] = {spec.dims.nx(), spec.dims.ny(), spec.dims.nz()};
  j["variables"] = nlohmann::json::array();
  for (const auto& v : spec.variables) {
    j["variables"].push_back(
        {{"name", v.name},
         {"background",
          {{"lo", v.background.lo}, {"hi", v.background.hi}, {"levels", v.background.levels}}}});
  }
  j["features"] = nlohmann::json::array();
  for (const auto& f : spec.features) {
    j["features"].push_back({{"center", f.center},
                             {"radii", f.radii},
                             {"variables", f.variables},
                             {"values", f.values},
                             {"phases", f.phases},
                             {"amplitude", f.amplitude},
                             {"wavelength", f.wavelength},
                             {"noise", f.noise}});
  }
  return j;
}

SyntheticSpec spec_from_json(const nlohmann::json& j) {
  try {
    SyntheticSpec spec;
    const auto d = j.at("dims").get<std::vector<std::int64_t>>();
    if (d.size() != 3 || d[0] <= 0 || d[1] <= 0 || d[2] <= 0) {
      throw Error(ErrorKind::InvalidSpec, "dims must be three positive integers");
    }
    spec.dims = GridDims(static_cast<std::uint32_t>(d[0]), static_cast<std::uint32_t>(d[1]),
                         static_cast<std::uint32_t>(d[2]));
    for (const auto& v : j.at("variables")) {
      VariableSpec vs;
      vs.name = v.at("name").get<std::string>();
      if (v.contains("background")) {
        const auto& b = v["background"];
        vs.background.lo = b.value("lo", 0.0);
        vs.background.hi = b.value("hi", 1.0);
        vs.background.levels = b.value("levels", 0u);
      }
      spec.variables.push_back(vs);
    }
    if (j.contains("features")) {
      for (const auto& fj : j["features"]) {
        Feature f;
        f.center = fj.at("center").get<std::array<double, 3>>();
        f.radii = fj.at("radii").get<std::array<double, 3>>();
        f.variables = fj.at("variables").get<std::vector<std::string>>();
        f.values = fj.at("values").get<std::vector<double>>();
        f.phases = fj.value("phases", std::vector<double>{});
        f.amplitude = fj.value("amplitude", 0.0);
        f.wavelength = fj.value("wavelength", 16.0);
        f.noise = fj.value("noise", 0.0);
        spec.features.push_back(f);
      }
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidSpec, e.what());
  }
}

}  // namespace infosample::synth
