#include "ribaucour/grid.hpp"

#include <charconv>
#include <cstdio>

namespace ribaucour {

Domain Domain::parse(std::string_view text) {
  double vals[4];
  std::size_t pos = 0;
  for (int k = 0; k < 4; ++k) {
    const std::size_t end = k < 3 ? text.find(':', pos) : text.size();
    if (end == std::string_view::npos) throw std::invalid_argument("domain must be u0:u1:v0:v1");
    const std::string_view field = text.substr(pos, end - pos);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), vals[k]);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
      throw std::invalid_argument("bad domain component '" + std::string(field) + "'");
    pos = end + 1;
  }
  Domain d{vals[0], vals[1], vals[2], vals[3]};
  if (!(d.u1 > d.u0) || !(d.v1 > d.v0)) throw std::invalid_argument("domain must have u0 < u1 and v0 < v1");
  return d;
}

std::string Domain::to_string() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g:%.17g:%.17g:%.17g", u0, u1, v0, v1);
  return buf;
}

}  // namespace ribaucour
