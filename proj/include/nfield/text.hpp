#pragma once

#include <string>

namespace nfield {

/// Shortest decimal that round-trips to the same double; "nan"/"inf" spelled out.
std::string format_double(double v);

}  // namespace nfield
