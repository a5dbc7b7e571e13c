#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace test_util {

inline std::filesystem::path fixture_dir() {
  return std::filesystem::path(MASTERYSIM_FIXTURE_DIR);
}

// Fresh scratch directory under the system temp root, unique per tag.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("masterysim_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name,
                                        const std::string& contents) {
  const auto path = dir / name;
  std::ofstream out(path);
  out << contents;
  return path;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace test_util
