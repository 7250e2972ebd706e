#include "bcu/pda.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bcu/combinatorics.hpp"
#include "bcu/error.hpp"

namespace bcu {

namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 26;

void check_size(std::uint64_t rows, std::uint64_t cols) {
  if (rows == 0 || cols == 0 || rows > kMaxCells / cols) {
    throw ParameterError("array with " + std::to_string(rows) + " x " + std::to_string(cols) +
                         " cells is outside the supported size");
  }
}

std::vector<Label> subset_labels(std::size_t n, std::size_t k) {
  std::vector<Label> out;
  for (Combinations c(n, k); c; c.next()) {
    std::vector<int> members;
    for (auto i : c.current()) members.push_back(static_cast<int>(i) + 1);
    out.push_back(Label{Label::Kind::kSet, std::move(members)});
  }
  return out;
}

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

}  // namespace

Pda pda_validate(RawGrid grid) {
  const std::size_t rows = grid.row_labels.size();
  const std::size_t cols = grid.col_labels.size();
  if (rows == 0 || cols == 0) throw ValidationError("PDA must have at least one row and column");
  if (grid.cells.size() != rows) {
    throw ValidationError("PDA has " + std::to_string(grid.cells.size()) + " rows, expected " +
                          std::to_string(rows));
  }
  for (std::size_t f = 0; f < rows; ++f) {
    if (grid.cells[f].size() != cols) {
      throw ValidationError("row " + grid.row_labels[f].str() + " has " +
                            std::to_string(grid.cells[f].size()) + " entries, expected " +
                            std::to_string(cols));
    }
  }
  if (std::set<Label>(grid.row_labels.begin(), grid.row_labels.end()).size() != rows) {
    throw ValidationError("duplicate row label");
  }
  if (std::set<Label>(grid.col_labels.begin(), grid.col_labels.end()).size() != cols) {
    throw ValidationError("duplicate column label");
  }

  Pda p;
  // Stars per column must agree.
  std::vector<std::size_t> col_stars(cols, 0);
  for (std::size_t f = 0; f < rows; ++f) {
    for (std::size_t k = 0; k < cols; ++k) col_stars[k] += grid.cells[f][k].is_star();
  }
  for (std::size_t k = 1; k < cols; ++k) {
    if (col_stars[k] != col_stars[0]) {
      throw ValidationError("column " + grid.col_labels[k].str() + " has " +
                            std::to_string(col_stars[k]) + " stars but column " +
                            grid.col_labels[0].str() + " has " + std::to_string(col_stars[0]));
    }
  }
  p.cache_size_ = col_stars[0];

  std::vector<std::size_t> row_stars(rows, 0);
  for (std::size_t f = 0; f < rows; ++f) {
    for (std::size_t k = 0; k < cols; ++k) row_stars[f] += grid.cells[f][k].is_star();
  }
  if (std::all_of(row_stars.begin(), row_stars.end(),
                  [&](std::size_t s) { return s == row_stars[0]; })) {
    p.replication_ = row_stars[0];
  } else {
    p.warnings_.push_back("rows hold different numbers of stars (KZ/F = " +
                          std::to_string(cols * p.cache_size_) + "/" + std::to_string(rows) +
                          "); the random Vandermonde construction does not apply");
  }

  bool any_unknown = false;
  bool any_int = false;
  int max_int = -1;
  for (const auto& row : grid.cells) {
    for (const auto& c : row) {
      if (c.kind == Cell::Kind::kUnknown) any_unknown = true;
      if (c.kind == Cell::Kind::kInt) {
        if (c.value < 0) throw ValidationError("negative delivery integer " + std::to_string(c.value));
        any_int = true;
        max_int = std::max(max_int, c.value);
      }
    }
  }
  if (!any_unknown) {
    const std::size_t symbols =
        grid.declared_symbols.value_or(static_cast<std::size_t>(max_int + 1));
    if (max_int >= 0 && static_cast<std::size_t>(max_int) >= symbols) {
      throw ValidationError("integer " + std::to_string(max_int) + " exceeds declared S = " +
                            std::to_string(symbols));
    }
    std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> where;
    for (std::size_t f = 0; f < rows; ++f) {
      for (std::size_t k = 0; k < cols; ++k) {
        if (grid.cells[f][k].kind == Cell::Kind::kInt) {
          where[grid.cells[f][k].value].emplace_back(f, k);
        }
      }
    }
    for (std::size_t s = 0; s < symbols; ++s) {
      if (!where.contains(static_cast<int>(s))) {
        throw ValidationError("integer " + std::to_string(s) + " never appears");
      }
    }
    for (const auto& [s, pos] : where) {
      for (std::size_t i = 0; i < pos.size(); ++i) {
        for (std::size_t j = i + 1; j < pos.size(); ++j) {
          const auto [f1, k1] = pos[i];
          const auto [f2, k2] = pos[j];
          if (f1 == f2 || k1 == k2 || !grid.cells[f1][k2].is_star() ||
              !grid.cells[f2][k1].is_star()) {
            throw ValidationError("integer " + std::to_string(s) + " at (" +
                                  grid.row_labels[f1].str() + ", " + grid.col_labels[k1].str() +
                                  ") and (" + grid.row_labels[f2].str() + ", " +
                                  grid.col_labels[k2].str() + ") violates the delivery condition");
          }
        }
      }
    }
    p.symbols_ = symbols;
  } else if (grid.declared_symbols) {
    p.warnings_.push_back("declared S ignored: array has unknown delivery entries");
  }
  (void)any_int;

  std::set<std::vector<bool>> supports;
  for (std::size_t f = 0; f < rows; ++f) {
    std::vector<bool> s(cols);
    for (std::size_t k = 0; k < cols; ++k) s[k] = grid.cells[f][k].is_star();
    supports.insert(std::move(s));
  }
  p.distinct_supports_ = supports.size() == rows;

  p.row_labels_ = std::move(grid.row_labels);
  p.col_labels_ = std::move(grid.col_labels);
  p.cells_ = std::move(grid.cells);
  return p;
}

Pda pda_mn(std::size_t nodes, std::size_t t) {
  if (t < 1 || t > nodes) {
    throw ParameterError("MN placement needs 1 <= t <= K, got K=" + std::to_string(nodes) +
                         " t=" + std::to_string(t));
  }
  check_size(binomial(static_cast<std::int64_t>(nodes), static_cast<std::int64_t>(t)), nodes);
  RawGrid g;
  g.row_labels = subset_labels(nodes, t);
  for (std::size_t k = 1; k <= nodes; ++k) g.col_labels.push_back(Label::index(static_cast<int>(k)));
  for (const auto& f : g.row_labels) {
    std::vector<Cell> row(nodes, Cell::unknown());
    for (int k : f.parts) row[static_cast<std::size_t>(k - 1)] = Cell::star();
    g.cells.push_back(std::move(row));
  }
  return pda_validate(std::move(g));
}

Pda pda_hypergraph(std::size_t n, std::size_t a, std::size_t b) {
  if (a < 1 || b < 1 || a + b > n) {
    throw ParameterError("hypergraph placement needs a, b >= 1 and a + b <= n, got n=" +
                         std::to_string(n) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
  }
  check_size(binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(a)),
             binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(b)));
  RawGrid g;
  g.row_labels = subset_labels(n, a);
  g.col_labels = subset_labels(n, b);
  for (const auto& f : g.row_labels) {
    std::vector<Cell> row;
    row.reserve(g.col_labels.size());
    for (const auto& k : g.col_labels) {
      row.push_back(intersects(f.parts, k.parts) ? Cell::star() : Cell::unknown());
    }
    g.cells.push_back(std::move(row));
  }
  return pda_validate(std::move(g));
}

Pda pda_grouping(std::size_t q, std::size_t m) {
  if (q < 2 || m < 2) {
    throw ParameterError("grouping placement needs q >= 2 and m >= 2, got q=" + std::to_string(q) +
                         " m=" + std::to_string(m));
  }
  const std::uint64_t f_count = ipow(q, static_cast<unsigned>(m));
  check_size(f_count, q * (m + 1));
  RawGrid g;
  std::vector<int> v(m, 0);
  for (std::uint64_t i = 0; i < f_count; ++i) {
    g.row_labels.push_back(Label::tuple(v));
    for (std::size_t pos = m; pos-- > 0;) {
      if (++v[pos] < static_cast<int>(q)) break;
      v[pos] = 0;
    }
  }
  for (std::size_t u = 1; u <= m + 1; ++u) {
    for (std::size_t val = 0; val < q; ++val) {
      g.col_labels.push_back(Label::tuple({static_cast<int>(u), static_cast<int>(val)}));
    }
  }
  for (const auto& f : g.row_labels) {
    int sum = 0;
    for (int s : f.parts) sum += s;
    sum %= static_cast<int>(q);
    std::vector<Cell> row;
    row.reserve(g.col_labels.size());
    for (const auto& k : g.col_labels) {
      const auto u = static_cast<std::size_t>(k.parts[0]);
      const int val = k.parts[1];
      const bool cached = u <= m ? f.parts[u - 1] == val : sum == val;
      row.push_back(cached ? Cell::star() : Cell::unknown());
    }
    g.cells.push_back(std::move(row));
  }
  return pda_validate(std::move(g));
}

std::size_t Placement::cache_size() const {
  if (cached.empty()) return 0;
  const std::size_t z = cached.front().size();
  for (std::size_t k = 1; k < cached.size(); ++k) {
    if (cached[k].size() != z) {
      throw ValidationError("node " + node_labels[k].str() + " caches " +
                            std::to_string(cached[k].size()) + " subfiles, node " +
                            node_labels[0].str() + " caches " + std::to_string(z));
    }
  }
  return z;
}

std::optional<std::size_t> Placement::replication() const {
  if (missing_at.empty()) return std::nullopt;
  const std::size_t miss = missing_at.front().size();
  for (const auto& i : missing_at) {
    if (i.size() != miss) return std::nullopt;
  }
  return nodes() - miss;
}

bool Placement::distinct_supports() const {
  std::set<std::vector<std::size_t>> seen(missing_at.begin(), missing_at.end());
  return seen.size() == missing_at.size();
}

Placement Placement::from_cached(std::vector<Label> subfile_labels,
                                 std::vector<Label> node_labels,
                                 std::vector<std::vector<std::size_t>> cached) {
  if (cached.size() != node_labels.size()) {
    throw ValidationError("placement needs one cache set per node");
  }
  Placement p;
  const std::size_t f_count = subfile_labels.size();
  p.missing_at.assign(f_count, {});
  for (std::size_t k = 0; k < cached.size(); ++k) {
    auto& x = cached[k];
    std::sort(x.begin(), x.end());
    if (std::adjacent_find(x.begin(), x.end()) != x.end() ||
        (!x.empty() && x.back() >= f_count)) {
      throw ValidationError("bad cache set for node " + node_labels[k].str());
    }
    std::vector<bool> in(f_count, false);
    for (auto f : x) in[f] = true;
    std::vector<std::size_t> y;
    for (std::size_t f = 0; f < f_count; ++f) {
      if (!in[f]) {
        y.push_back(f);
        p.missing_at[f].push_back(k);
      }
    }
    p.uncached.push_back(std::move(y));
  }
  p.cached = std::move(cached);
  p.subfile_labels = std::move(subfile_labels);
  p.node_labels = std::move(node_labels);
  return p;
}

Placement placement_of(const Pda& pda) {
  std::vector<std::vector<std::size_t>> cached(pda.nodes());
  for (std::size_t f = 0; f < pda.subfiles(); ++f) {
    for (std::size_t k = 0; k < pda.nodes(); ++k) {
      if (pda.is_star(f, k)) cached[k].push_back(f);
    }
  }
  return Placement::from_cached(pda.subfile_labels(), pda.node_labels(), std::move(cached));
}

std::string pda_to_text(const Pda& pda) {
  std::ostringstream os;
  os << "pda " << pda.subfiles() << ' ' << pda.nodes();
  if (pda.symbols()) os << ' ' << *pda.symbols();
  os << '\n';
  for (std::size_t f = 0; f < pda.subfiles(); ++f) {
    os << (f ? " " : "") << pda.subfile_labels()[f].str();
  }
  os << '\n';
  for (std::size_t k = 0; k < pda.nodes(); ++k) {
    os << (k ? " " : "") << pda.node_labels()[k].str();
  }
  os << '\n';
  for (std::size_t f = 0; f < pda.subfiles(); ++f) {
    for (std::size_t k = 0; k < pda.nodes(); ++k) {
      const Cell& c = pda.cell(f, k);
      if (k) os << ' ';
      switch (c.kind) {
        case Cell::Kind::kStar: os << '*'; break;
        case Cell::Kind::kUnknown: os << '?'; break;
        case Cell::Kind::kInt: os << c.value; break;
      }
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::size_t parse_count(const std::string& tok, const char* what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw ValidationError(std::string("bad ") + what + " '" + tok + "' in PDA header");
  }
  return v;
}

}  // namespace

Pda pda_from_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  auto next_line = [&](const char* what) {
    while (std::getline(is, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return tokens_of(line);
    }
    throw ValidationError(std::string("PDA file ends before ") + what);
  };
  auto header = next_line("header");
  if (header.size() < 3 || header.size() > 4 || header[0] != "pda") {
    throw ValidationError("PDA header must be 'pda <F> <K> [S]'");
  }
  const std::size_t rows = parse_count(header[1], "F");
  const std::size_t cols = parse_count(header[2], "K");
  RawGrid g;
  if (header.size() == 4) g.declared_symbols = parse_count(header[3], "S");

  auto row_tokens = next_line("row labels");
  if (row_tokens.size() != rows) throw ValidationError("expected " + std::to_string(rows) + " row labels");
  for (const auto& t : row_tokens) g.row_labels.push_back(Label::parse(t));
  auto col_tokens = next_line("column labels");
  if (col_tokens.size() != cols) throw ValidationError("expected " + std::to_string(cols) + " column labels");
  for (const auto& t : col_tokens) g.col_labels.push_back(Label::parse(t));

  for (std::size_t f = 0; f < rows; ++f) {
    auto toks = next_line("all rows are read");
    if (toks.size() != cols) {
      throw ValidationError("row " + g.row_labels[f].str() + " has " + std::to_string(toks.size()) +
                            " entries, expected " + std::to_string(cols));
    }
    std::vector<Cell> row;
    for (const auto& t : toks) {
      if (t == "*") {
        row.push_back(Cell::star());
      } else if (t == "?") {
        row.push_back(Cell::unknown());
      } else {
        row.push_back(Cell::integer(static_cast<int>(parse_count(t, "entry"))));
      }
    }
    g.cells.push_back(std::move(row));
  }
  return pda_validate(std::move(g));
}

void pda_to_file(const Pda& pda, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write " + path);
  os << pda_to_text(pda);
}

Pda pda_from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return pda_from_text(ss.str());
}

}  // namespace bcu
