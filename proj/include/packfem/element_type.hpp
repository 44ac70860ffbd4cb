#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace packfem {

enum class ElementType { TRI03, QUAD04, TET04, PYR05, HEX08 };

inline constexpr std::array<ElementType, 5> kAllElementTypes = {
    ElementType::TRI03, ElementType::QUAD04, ElementType::TET04, ElementType::PYR05,
    ElementType::HEX08};

constexpr int num_nodes(ElementType t) {
  switch (t) {
    case ElementType::TRI03: return 3;
    case ElementType::QUAD04: return 4;
    case ElementType::TET04: return 4;
    case ElementType::PYR05: return 5;
    case ElementType::HEX08: return 8;
  }
  return 0;
}

constexpr int spatial_dim(ElementType t) {
  return (t == ElementType::TRI03 || t == ElementType::QUAD04) ? 2 : 3;
}

constexpr std::string_view name(ElementType t) {
  switch (t) {
    case ElementType::TRI03: return "TRI03";
    case ElementType::QUAD04: return "QUAD04";
    case ElementType::TET04: return "TET04";
    case ElementType::PYR05: return "PYR05";
    case ElementType::HEX08: return "HEX08";
  }
  return "?";
}

constexpr std::optional<ElementType> element_type_from_name(std::string_view s) {
  for (auto t : kAllElementTypes)
    if (name(t) == s) return t;
  return std::nullopt;
}

}  // namespace packfem
