#include "rulebench/color.hpp"

#include <algorithm>

namespace rulebench {

Color Color::name(std::string s) {
  Color c;
  c.value_ = std::move(s);
  return c;
}

Color Color::tuple(std::vector<Color> parts) {
  Color c;
  c.value_ = std::move(parts);
  return c;
}

std::string Color::to_string() const {
  switch (value_.index()) {
    case 0:
      return std::to_string(as_integer());
    case 1: {
      const std::string& s = as_name();
      bool plain = !s.empty() && !(s[0] >= '0' && s[0] <= '9') &&
                   std::all_of(s.begin(), s.end(), [](char c) {
                     return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                            (c >= '0' && c <= '9') || c == '_';
                   });
      if (plain) return s;
      std::string out = "\"";
      for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      return out + "\"";
    }
    default: {
      std::string out = "(";
      const auto& parts = as_tuple();
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(',');
        out.append(parts[i].to_string());
      }
      // A one-element tuple keeps a trailing comma to stay a tuple.
      if (parts.size() == 1) out.push_back(',');
      return out + ")";
    }
  }
}

std::strong_ordering operator<=>(const Color& a, const Color& b) {
  if (a.value_.index() != b.value_.index()) return a.value_.index() <=> b.value_.index();
  switch (a.value_.index()) {
    case 0:
      return a.as_integer() <=> b.as_integer();
    case 1: {
      int c = a.as_name().compare(b.as_name());
      return c < 0 ? std::strong_ordering::less
                   : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    default: {
      const auto& x = a.as_tuple();
      const auto& y = b.as_tuple();
      return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
    }
  }
}

}  // namespace rulebench
