#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "infosample/error.hpp"
#include "infosample/grid.hpp"

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("infosample_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Kind of the infosample::Error thrown by fn, or -1 when nothing was thrown.
template <typename Fn>
int error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const infosample::Error& e) {
    return static_cast<int>(e.kind());
  }
  return -1;
}

inline int kind(infosample::ErrorKind k) { return static_cast<int>(k); }

inline infosample::MultiField line_field(std::vector<std::vector<double>> columns,
                                         std::vector<std::string> names) {
  const auto n = static_cast<std::uint32_t>(columns.front().size());
  infosample::GridDims dims(n, 1, 1);
  std::vector<infosample::Field> fields;
  for (std::size_t v = 0; v < columns.size(); ++v) {
    fields.emplace_back(names[v], dims, std::move(columns[v]));
  }
  return infosample::MultiField(dims, std::move(fields));
}

}  // namespace testing
