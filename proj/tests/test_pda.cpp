#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <set>

#include "bcu/combinatorics.hpp"
#include "bcu/error.hpp"
#include "bcu/pda.hpp"
#include "fixtures.hpp"

using bcu::Label;
using bcu::Pda;

namespace {

std::set<Label> labels_of(const std::vector<std::size_t>& idx, const std::vector<Label>& names) {
  std::set<Label> out;
  for (auto i : idx) out.insert(names[i]);
  return out;
}

std::size_t index_of(const std::vector<Label>& names, const Label& l) {
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), l) - names.begin());
}

void check_counting(const Pda& p) {
  const bcu::Placement pl = bcu::placement_of(p);
  std::size_t total = 0;
  for (const auto& x : pl.cached) total += x.size();
  CHECK(total == p.nodes() * p.cache_size());
  REQUIRE(p.replication());
  CHECK(total == *p.replication() * p.subfiles());
  for (const auto& i : pl.missing_at) CHECK(i.size() == p.nodes() - *p.replication());
  for (std::size_t k = 0; k < pl.nodes(); ++k) {
    CHECK(pl.cached[k].size() + pl.uncached[k].size() == pl.subfiles());
  }
  CHECK(p.distinct_supports());
  CHECK(pl.distinct_supports());
}

}  // namespace

TEST_CASE("four-node array with integers validates") {
  const Pda p = bcu::pda_from_text(fixtures::kFourNodePda);
  CHECK(p.nodes() == 4);
  CHECK(p.subfiles() == 6);
  CHECK(p.cache_size() == 3);
  CHECK(p.symbols() == 4u);
  CHECK(p.replication() == 2u);
  CHECK(p.distinct_supports());
  const bcu::Placement pl = bcu::placement_of(p);
  CHECK(labels_of(pl.cached[0], pl.subfile_labels) ==
        std::set<Label>{Label::set({1, 2}), Label::set({1, 3}), Label::set({1, 4})});
}

TEST_CASE("grouping array with integers validates") {
  const Pda p = bcu::pda_from_text(fixtures::kGroupingPda);
  CHECK(p.nodes() == 9);
  CHECK(p.subfiles() == 9);
  CHECK(p.cache_size() == 3);
  CHECK(p.symbols() == 18u);
  CHECK(p.replication() == 3u);
  // Same star pattern as the constructor.
  const Pda g = bcu::pda_grouping(3, 2);
  for (std::size_t f = 0; f < 9; ++f) {
    for (std::size_t k = 0; k < 9; ++k) CHECK(p.is_star(f, k) == g.is_star(f, k));
  }
}

TEST_CASE("column star counts must agree") {
  std::string bad = fixtures::kFourNodePda;
  bad.replace(bad.find("* * 0 1"), 7, "* * * 1");
  try {
    bcu::pda_from_text(bad);
    FAIL("expected a validation error");
  } catch (const bcu::ValidationError& e) {
    CHECK(std::string(e.what()).find("column 3") != std::string::npos);
  }
}

TEST_CASE("missing integers and broken rectangles are rejected") {
  std::string gap = fixtures::kFourNodePda;
  gap.replace(gap.find("pda 6 4 4"), 9, "pda 6 4 5");
  CHECK_THROWS_AS(bcu::pda_from_text(gap), bcu::ValidationError);

  std::string rect = fixtures::kFourNodePda;
  rect.replace(rect.find("2 3 * *"), 7, "2 0 * *");  // 0 now repeats in column 2
  CHECK_THROWS_AS(bcu::pda_from_text(rect), bcu::ValidationError);

  std::string big = fixtures::kFourNodePda;
  big.replace(big.find("2 3 * *"), 7, "2 9 * *");
  CHECK_THROWS_AS(bcu::pda_from_text(big), bcu::ValidationError);
}

TEST_CASE("row-irregular arrays are accepted with a warning") {
  bcu::RawGrid g;
  g.row_labels = {Label::index(1), Label::index(2)};
  g.col_labels = {Label::index(1), Label::index(2)};
  g.cells = {{bcu::Cell::star(), bcu::Cell::star()}, {bcu::Cell::unknown(), bcu::Cell::unknown()}};
  const Pda p = bcu::pda_validate(g);
  CHECK_FALSE(p.row_regular());
  CHECK_FALSE(p.warnings().empty());
  CHECK(p.cache_size() == 1);
}

TEST_CASE("MN family") {
  const Pda p = bcu::pda_mn(4, 2);
  const Pda ex = bcu::pda_from_text(fixtures::kFourNodePda);
  CHECK(p.subfile_labels() == ex.subfile_labels());
  for (std::size_t f = 0; f < 6; ++f) {
    for (std::size_t k = 0; k < 4; ++k) CHECK(p.is_star(f, k) == ex.is_star(f, k));
  }
  CHECK(p.replication() == 2u);
  CHECK_FALSE(p.symbols());

  const Pda full = bcu::pda_mn(4, 4);
  CHECK(full.subfiles() == 1);
  CHECK(full.cache_size() == 1);

  for (std::size_t k = 1; k <= 7; ++k) {
    for (std::size_t t = 1; t <= k; ++t) {
      const Pda m = bcu::pda_mn(k, t);
      CHECK(m.subfiles() == bcu::binomial(k, t));
      CHECK(m.cache_size() == bcu::binomial(k - 1, t - 1));
      CHECK(m.replication() == t);
      check_counting(m);
    }
  }
  CHECK_THROWS_AS(bcu::pda_mn(3, 0), bcu::ParameterError);
  CHECK_THROWS_AS(bcu::pda_mn(3, 4), bcu::ParameterError);
}

TEST_CASE("hypergraph family") {
  const Pda p = bcu::pda_hypergraph(5, 2, 2);
  CHECK(p.subfiles() == 10);
  CHECK(p.nodes() == 10);
  CHECK(p.cache_size() == 7);
  const Pda q = bcu::pda_hypergraph(5, 1, 3);
  CHECK(q.subfiles() == 5);
  CHECK(q.cache_size() == 3);
  CHECK_NOTHROW(bcu::pda_hypergraph(6, 2, 4));
  CHECK_THROWS_AS(bcu::pda_hypergraph(5, 3, 3), bcu::ParameterError);
  CHECK_THROWS_AS(bcu::pda_hypergraph(5, 0, 3), bcu::ParameterError);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::size_t a = 1; a < n; ++a) {
      for (std::size_t b = 1; a + b <= n; ++b) {
        const Pda h = bcu::pda_hypergraph(n, a, b);
        CHECK(h.cache_size() == bcu::binomial(n, a) - bcu::binomial(n - b, a));
        check_counting(h);
      }
    }
  }
}

TEST_CASE("MN equals the hypergraph family with b = 1") {
  for (std::size_t k = 2; k <= 6; ++k) {
    for (std::size_t t = 1; t < k; ++t) {
      const Pda m = bcu::pda_mn(k, t);
      const Pda h = bcu::pda_hypergraph(k, t, 1);
      REQUIRE(m.subfiles() == h.subfiles());
      REQUIRE(m.nodes() == h.nodes());
      for (std::size_t f = 0; f < m.subfiles(); ++f) {
        for (std::size_t j = 0; j < m.nodes(); ++j) CHECK(m.is_star(f, j) == h.is_star(f, j));
      }
    }
  }
}

TEST_CASE("grouping family") {
  const Pda p = bcu::pda_grouping(2, 2);
  CHECK(p.nodes() == 6);
  CHECK(p.subfiles() == 4);
  CHECK(p.cache_size() == 2);
  const Pda g = bcu::pda_grouping(3, 2);
  const bcu::Placement pl = bcu::placement_of(g);
  const std::size_t node = index_of(pl.node_labels, Label::tuple({2, 0}));
  CHECK(labels_of(pl.cached[node], pl.subfile_labels) ==
        std::set<Label>{Label::tuple({0, 0}), Label::tuple({1, 0}), Label::tuple({2, 0})});
  const std::size_t f = index_of(pl.subfile_labels, Label::tuple({0, 2}));
  CHECK(labels_of(pl.missing_at[f], pl.node_labels) ==
        std::set<Label>{Label::tuple({1, 1}), Label::tuple({1, 2}), Label::tuple({2, 0}),
                        Label::tuple({2, 1}), Label::tuple({3, 0}), Label::tuple({3, 1})});
  for (std::size_t q = 2; q <= 4; ++q) {
    for (std::size_t m = 2; m <= 3; ++m) {
      const Pda x = bcu::pda_grouping(q, m);
      CHECK(x.nodes() == q * (m + 1));
      CHECK(x.replication() == m + 1);
      check_counting(x);
    }
  }
  CHECK_THROWS_AS(bcu::pda_grouping(1, 2), bcu::ParameterError);
  CHECK_THROWS_AS(bcu::pda_grouping(3, 1), bcu::ParameterError);
}

TEST_CASE("text and file round trips") {
  for (const Pda& p : {bcu::pda_mn(5, 2), bcu::pda_hypergraph(5, 2, 2), bcu::pda_grouping(3, 2),
                       bcu::pda_from_text(fixtures::kGroupingPda)}) {
    CHECK(bcu::pda_from_text(bcu::pda_to_text(p)) == p);
    const std::string path = "pda_roundtrip.tmp";
    bcu::pda_to_file(p, path);
    CHECK(bcu::pda_from_file(path) == p);
    std::remove(path.c_str());
  }
  CHECK_THROWS_AS(bcu::pda_from_text("pda 2 2\n1 2\n1 2\n* ?\n"), bcu::ValidationError);
  CHECK_THROWS_AS(bcu::pda_from_text("pdb 1 1\n1\n1\n*\n"), bcu::ValidationError);
  CHECK_THROWS_AS(bcu::pda_from_text("pda 1 1\n1\n1\nx\n"), bcu::ValidationError);
  CHECK_THROWS_AS(bcu::pda_from_file("/nonexistent/file.pda"), bcu::ValidationError);
}

TEST_CASE("placement from explicit cache sets") {
  const bcu::Placement pl = bcu::Placement::from_cached(
      {Label::index(1), Label::index(2), Label::index(3)}, {Label::index(1), Label::index(2)},
      {{2, 0}, {1, 2}});
  CHECK(pl.cached[0] == std::vector<std::size_t>{0, 2});
  CHECK(pl.uncached[1] == std::vector<std::size_t>{0});
  CHECK(pl.missing_at[0] == std::vector<std::size_t>{1});
  CHECK(pl.cache_size() == 2);
  CHECK_FALSE(pl.replication());
  CHECK_THROWS_AS(bcu::Placement::from_cached({Label::index(1)}, {Label::index(1)}, {{0, 0}}),
                  bcu::ValidationError);
  const bcu::Placement uneven = bcu::Placement::from_cached(
      {Label::index(1), Label::index(2)}, {Label::index(1), Label::index(2)}, {{0}, {0, 1}});
  CHECK_THROWS_AS(uneven.cache_size(), bcu::ValidationError);
}
