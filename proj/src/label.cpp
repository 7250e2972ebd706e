#include "bcu/label.hpp"

#include <algorithm>
#include <charconv>

#include "bcu/error.hpp"

namespace bcu {

Label Label::set(std::vector<int> members) {
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw ValidationError("duplicate member in set label");
  }
  return {Kind::kSet, std::move(members)};
}

std::string Label::str() const {
  if (kind == Kind::kIndex) return std::to_string(parts.empty() ? 0 : parts.front());
  std::string out(1, kind == Kind::kSet ? '{' : '(');
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(parts[i]);
  }
  out += kind == Kind::kSet ? '}' : ')';
  return out;
}

namespace {

std::vector<int> parse_ints(std::string_view body, std::string_view whole) {
  std::vector<int> out;
  if (body.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = body.find(',', pos);
    const std::string_view tok = body.substr(pos, comma == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : comma - pos);
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw ValidationError("bad label '" + std::string(whole) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

Label Label::parse(std::string_view text) {
  if (text.empty()) throw ValidationError("empty label");
  const char open = text.front();
  if (open == '{' || open == '(') {
    const char close = open == '{' ? '}' : ')';
    if (text.size() < 2 || text.back() != close) {
      throw ValidationError("bad label '" + std::string(text) + "'");
    }
    auto ints = parse_ints(text.substr(1, text.size() - 2), text);
    return open == '{' ? Label::set(std::move(ints)) : Label::tuple(std::move(ints));
  }
  auto ints = parse_ints(text, text);
  if (ints.size() != 1) throw ValidationError("bad label '" + std::string(text) + "'");
  return Label::index(ints.front());
}

}  // namespace bcu
