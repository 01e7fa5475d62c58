#ifndef SAGUIN_VERSION_HPP
#define SAGUIN_VERSION_HPP

#include <string_view>

namespace saguin {

inline constexpr std::string_view version = "1.0.0";

}  // namespace saguin

#endif  // SAGUIN_VERSION_HPP
