#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>

namespace dslice {

/// Stable statement identity. Labels survive augmentation, inlining and
/// slicing; value 0 and the maximum value are reserved for ENTRY and EXIT.
struct Label {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const Label&) const = default;

  constexpr bool is_entry() const { return value == 0; }
  constexpr bool is_exit() const {
    return value == std::numeric_limits<std::uint32_t>::max();
  }

  std::string str() const;
};

inline constexpr Label kEntryLabel{0};
inline constexpr Label kExitLabel{std::numeric_limits<std::uint32_t>::max()};

inline std::ostream& operator<<(std::ostream& os, Label l) {
  return os << l.str();
}

/// Parses "L12", "12", "ENTRY" or "EXIT". Throws std::invalid_argument.
Label parse_label(const std::string& text);

struct SourcePos {
  int line = 0;
  int column = 0;
};

}  // namespace dslice

template <>
struct std::hash<dslice::Label> {
  std::size_t operator()(dslice::Label l) const noexcept {
    return std::hash<std::uint32_t>{}(l.value);
  }
};
