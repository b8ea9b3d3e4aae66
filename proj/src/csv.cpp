#include "cohspin/csv.hpp"

#include <charconv>
#include <system_error>

namespace cohspin {

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // canonicalize -0
  char buf[64];
  const std::to_chars_result res =
      std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace cohspin
