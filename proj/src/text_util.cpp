#include "text_util.hpp"

#include <array>
#include <cstdio>

namespace thermorisk::detail {

std::string format_exact(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string format_9g(double v) {
  std::array<char, 64> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.9g", v);
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

}  // namespace thermorisk::detail
