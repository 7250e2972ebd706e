// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bcu/bounds.hpp"
#include "bcu/combinatorics.hpp"
#include "bcu/error.hpp"
#include "bcu/update_code.hpp"
#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bcu;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failed expectation.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && pass_) {
      pass_ = false;
      first_ = what;
    }
  }
  Outcome done(const std::string& summary) const { return {pass_, pass_ ? summary : first_}; }

 private:
  bool pass_ = true;
  std::string first_;
};

Vector restrict_to(const Vector& v, const std::vector<std::size_t>& idx) {
  Vector out;
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

std::size_t weight(const Vector& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](auto x) { return x != 0; }));
}

Placement mn(std::size_t k, std::size_t t) { return placement_of(pda_mn(k, t)); }

Outcome criterion1() {
  Checker c;
  const UpdateProblem p(mn(4, 2), 1, Field(1));
  const Matrix h = fixtures::four_node_encoder();
  c.expect(validate_encoder(h, p).valid, "explicit binary encoder rejected");
  std::size_t cases = 0;
  for (unsigned wm = 0; wm < 64; ++wm) {
    for (int pos = -1; pos < 6; ++pos) {
      Vector w(6);
      for (std::size_t f = 0; f < 6; ++f) w[f] = (wm >> f) & 1u;
      Vector upd = w;
      if (pos >= 0) upd[static_cast<std::size_t>(pos)] ^= 1;
      const Vector cw = encode(h, p, upd);
      ++cases;
      for (std::size_t k = 0; k < 4; ++k) {
        const auto& x = p.placement().cached[k];
        Vector got;
        try {
          got = decode_user(h, cw, p, k, restrict_to(w, x));
        } catch (const DecodeError&) {
        }
        c.expect(got == restrict_to(upd, x), "decoding failed for w=" + std::to_string(wm) + " at node " +
                                                  std::to_string(k + 1));
      }
    }
  }
  return c.done(std::to_string(cases) + " cases, every user decoded");
}

Outcome criterion2() {
  Checker c;
  const UpdateProblem p(mn(4, 2), 1, Field(8));
  const auto e = encoder_mds(p);
  c.expect(e.length() == 5, "MN(4,2) length " + std::to_string(e.length()));
  c.expect(validate_encoder(e.h, p).valid, "MN(4,2) encoder invalid");
  const UpdateProblem h(placement_of(pda_hypergraph(5, 2, 2)), 1);
  const auto eh = encoder_mds(h);
  c.expect(eh.length() == 5, "hypergraph length " + std::to_string(eh.length()));
  c.expect(validate_encoder(eh.h, h).valid, "hypergraph encoder invalid");
  const auto r = report(h, FamilyHint::hypergraph(5, 2, 2));
  c.expect(r.exact == 5u, "hypergraph optimum not certified as 5");
  return c.done("l=5 on both; hypergraph optimum certified 5");
}

Outcome criterion3() {
  Checker c;
  struct Case {
    const char* name;
    Placement pl;
    std::size_t expect;
  };
  const std::vector<Case> cases = {{"MN(4,2)", mn(4, 2), 5}, {"MN(6,3)", mn(6, 3), 7},
                                   {"grouping(3,2)", placement_of(pda_grouping(3, 2)), 13}};
  std::ostringstream summary;
  for (const auto& cs : cases) {
    const UpdateProblem p(cs.pl, 1, Field(16));
    std::size_t first = 0, worst = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      try {
        const auto e = encoder_vandermonde(p, seed);
        c.expect(e.length() == cs.expect, std::string(cs.name) + " length " + std::to_string(e.length()));
        c.expect(validate_encoder(e.h, p).valid, std::string(cs.name) + " returned an invalid encoder");
        if (e.draws == 1) ++first;
        worst = std::max(worst, e.draws - 1);
      } catch (const RetryExhausted&) {
        c.expect(false, std::string(cs.name) + " seed " + std::to_string(seed) + " exhausted its retries");
      }
    }
    c.expect(worst <= 2, std::string(cs.name) + " needed " + std::to_string(worst) + " retries");
    summary << cs.name << " l=" << cs.expect << " first-draw " << first << "/100; ";
  }
  return c.done(summary.str());
}

Outcome criterion4() {
  Checker c;
  const std::size_t params[3][3] = {{4, 2, 1}, {6, 3, 1}, {8, 4, 2}};
  const std::uint64_t expect[3] = {5, 7, 17};
  for (int i = 0; i < 3; ++i) {
    const auto [k, t, eps] = std::tuple(params[i][0], params[i][1], params[i][2]);
    const auto b = bound_mn(k, t, eps);
    const std::string tag = "(" + std::to_string(k) + "," + std::to_string(t) + "," + std::to_string(eps) + ")";
    c.expect(b.exact, tag + " not flagged exact");
    c.expect(b.value == expect[i] && b.value == 2 * eps * (k - t) + 1, tag + " bound " + std::to_string(b.value));
    // GF(2^16) is too small for (8,4,2): ~4e5 subset determinants per node set.
    const UpdateProblem p(mn(k, t), eps, Field(32));
    const auto e = encoder_vandermonde(p, std::uint64_t{1});
    c.expect(e.length() == b.value, tag + " construction length " + std::to_string(e.length()));
  }
  return c.done("exact 5, 7, 17 met by the random construction over GF(2^32)");
}

Outcome criterion5() {
  Checker c;
  const auto u = bound_uv(3, 2, 1);
  c.expect(u.closed_form == 8, "closed form " + std::to_string(u.closed_form));
  c.expect(upper_bound_joint(9, 9, 3, 3, 1, true) == 8, "joint upper bound differs from 8");
  const UpdateProblem p(placement_of(pda_grouping(3, 2)), 1);
  c.expect(report(p, FamilyHint::grouping(3, 2)).exact == 8u, "report does not mark 8 exact");
  const auto e = encoder_mds(p);
  c.expect(e.length() == 8 && validate_encoder(e.h, p).valid, "MDS encoder does not achieve 8");
  return c.done("lower 8 = upper 8, MDS achieves 8");
}

Outcome criterion6() {
  Checker c;
  for (std::uint64_t eps = 1; eps <= 3; ++eps) {
    for (std::uint64_t f = 2 * eps + 3; f <= 20; ++f) {
      for (std::uint64_t z = 1; z <= 2 * eps; ++z) c.expect(exact_cases(f, z, eps) == f, "small cache");
      c.expect(exact_cases(f, f, eps) == 2 * eps, "Z = F");
      c.expect(exact_cases(f, f - 1, eps) == 2 * eps + 1, "Z = F - 1");
      c.expect(exact_cases(f, f - 2, eps) == 2 * eps + 2, "Z = F - 2");
    }
  }
  const Placement pl = mn(4, 3);
  const auto o = oracle_exhaustive_lopt(pl, 1, 4);
  c.expect(o && o->length == 3, "oracle did not return 3");
  // Literal check of every 2 x 4 binary matrix.
  const UpdateProblem p(pl, 1, Field(1));
  std::size_t valid = 0;
  for (unsigned bits = 0; bits < 256; ++bits) {
    std::vector<Field::Value> d(8);
    for (std::size_t i = 0; i < 8; ++i) d[i] = (bits >> i) & 1u;
    const Matrix h = Matrix(Field(1), 2, 4, std::move(d)).with_labels(pl.subfile_labels);
    const bool lit = oracles::brute_force_valid_gf2(h, pl, 1);
    c.expect(lit == validate_encoder(h, p).valid, "validator disagrees on a 2 x 4 matrix");
    valid += lit;
  }
  c.expect(valid == 0, std::to_string(valid) + " valid 2 x 4 matrices");
  return c.done("exact cases hold; F=4 Z=3 optimum 3, none of 256 l=2 matrices valid");
}

Outcome criterion7() {
  Checker c;
  std::mt19937_64 rng(7);
  const std::vector<Pda> pdas = {pda_mn(4, 1), pda_mn(4, 2), pda_mn(4, 3), pda_mn(5, 1), pda_mn(5, 4),
                                 pda_mn(8, 7), pda_grouping(2, 2), pda_grouping(2, 3)};
  std::size_t valid = 0;
  for (int i = 0; i < 200; ++i) {
    const Placement pl = placement_of(pdas[rng() % pdas.size()]);
    const std::size_t eps = 1 + rng() % 2;
    const std::size_t top = std::min<std::size_t>(6, pl.subfiles());
    // Odd instances sit near the top, where valid matrices are common.
    const std::size_t l = i % 2 ? std::max<std::size_t>(1, top - rng() % 2) : 1 + rng() % top;
    const Matrix h = oracles::random_gf2(l, pl.subfiles(), rng, pl.subfile_labels);
    const bool fast = validate_encoder(h, UpdateProblem(pl, eps, Field(1))).valid;
    c.expect(fast == oracles::brute_force_valid_gf2(h, pl, eps), "disagreement on instance " + std::to_string(i));
    valid += fast;
  }
  return c.done("200/200 agree (" + std::to_string(valid) + " valid, " + std::to_string(200 - valid) + " invalid)");
}

Outcome criterion8() {
  Checker c;
  std::vector<std::pair<UpdateProblem, EncoderMatrix>> encoders;
  {
    const UpdateProblem p(mn(4, 2), 1, Field(1));
    encoders.emplace_back(p, EncoderMatrix(fixtures::four_node_encoder()));
  }
  {
    const UpdateProblem p(mn(4, 2), 1, Field(8));
    encoders.emplace_back(p, encoder_mds(p));
  }
  {
    const UpdateProblem p(mn(6, 3), 1);
    encoders.emplace_back(p, encoder_vandermonde(p, std::uint64_t{3}));
  }
  {
    const UpdateProblem p(placement_of(pda_grouping(3, 2)), 1);
    encoders.emplace_back(p, encoder_mds(p));
  }
  {
    const UpdateProblem p(mn(5, 2), 2);
    encoders.emplace_back(p, encoder_vandermonde(p, std::uint64_t{4}));
  }
  // Binary matrices: keep the first few valid ones, refute every invalid one.
  std::mt19937_64 rng(8);
  std::size_t refuted = 0, random_valid = 0;
  for (int i = 0; i < 300; ++i) {
    const Placement pl = i % 2 ? mn(4, 2) : placement_of(pda_grouping(2, 2));
    const UpdateProblem p(pl, 1, Field(1));
    const Matrix h = oracles::random_gf2(2 + rng() % 4, pl.subfiles(), rng, pl.subfile_labels);
    const auto res = validate_encoder(h, p);
    if (res.valid) {
      if (random_valid++ < 5) encoders.emplace_back(p, EncoderMatrix(h));
      continue;
    }
    const auto ce = counterexample_from_witness(h, p, *res.witness);
    Vector u1(pl.subfiles()), u2(pl.subfiles());
    for (std::size_t f = 0; f < pl.subfiles(); ++f) {
      u1[f] = ce.w1[f] ^ ce.e1[f];
      u2[f] = ce.w2[f] ^ ce.e2[f];
    }
    const auto& x = pl.cached[ce.node];
    bool ok = weight(ce.e1) <= 1 && weight(ce.e2) <= 1 && encode(h, p, u1) == encode(h, p, u2) &&
              restrict_to(ce.w1, x) == restrict_to(ce.w2, x) && restrict_to(u1, x) != restrict_to(u2, x);
    // Same inputs to the decoder, different required outputs: one round fails.
    bool fails = false;
    for (const auto& [w, u] : {std::pair{ce.w1, u1}, std::pair{ce.w2, u2}}) {
      try {
        fails |= decode_user(h, encode(h, p, u), p, ce.node, restrict_to(w, x)) != restrict_to(u, x);
      } catch (const DecodeError&) {
        fails = true;
      }
    }
    c.expect(ok && fails, "witness " + std::to_string(i) + " did not give a failing round");
    ++refuted;
  }
  std::size_t rounds = 0;
  for (const auto& [p, e] : encoders) {
    c.expect(validate_encoder(e.h, p).valid, "encoder list holds an invalid matrix");
    Rng r(11);
    for (int i = 0; i < 1000; ++i) {
      bool ok = false;
      try {
        ok = simulate_bnsi_round(e, p, r).all_ok();
      } catch (const DecodeError&) {
      }
      c.expect(ok, "BNSI round failed");
      ++rounds;
    }
  }
  return c.done(std::to_string(encoders.size()) + " valid encoders x 1000 noisy rounds, " + std::to_string(refuted) +
                " invalid matrices refuted");
}

Outcome criterion9() {
  Checker c;
  struct Cfg {
    Pda pda;
    FamilyHint hint;
  };
  std::vector<Cfg> grid;
  for (auto [k, t] : {std::pair<std::size_t, std::size_t>{4, 1}, {4, 2}, {4, 3}, {5, 2}, {5, 3}, {6, 2}, {6, 3}, {7, 3}}) {
    grid.push_back({pda_mn(k, t), FamilyHint::mn(k, t)});
  }
  for (auto [n, a, b] : {std::tuple<std::size_t, std::size_t, std::size_t>{5, 2, 2}, {5, 1, 3}, {6, 2, 1}, {6, 2, 2}}) {
    grid.push_back({pda_hypergraph(n, a, b), FamilyHint::hypergraph(n, a, b)});
  }
  for (auto [q, m] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}, {2, 3}, {4, 2}}) {
    grid.push_back({pda_grouping(q, m), FamilyHint::grouping(q, m)});
  }
  std::size_t configs = 0, built = 0;
  for (const auto& g : grid) {
    const Placement pl = placement_of(g.pda);
    for (std::size_t eps = 1; eps <= 3; ++eps) {
      const UpdateProblem p(pl, eps);
      ++configs;
      BoundReport r;
      try {
        r = report(p, g.hint);
      } catch (const std::logic_error& e) {
        c.expect(false, e.what());
        continue;
      }
      const std::uint64_t lower = r.best_lower();
      for (const auto& lo : r.lower) {
        for (const auto& up : r.upper) c.expect(lo.value <= up.value, lo.name + " exceeds " + up.name);
      }
      std::vector<EncoderMatrix> encs = {encoder_naive(p), encoder_mds(p)};
      if (pl.distinct_supports() && validation_cost(p) < 200000) encs.push_back(encoder_vandermonde(p, std::uint64_t{eps}));
      for (const auto& e : encs) {
        if (validation_cost(p) < 200000) c.expect(validate_encoder(e.h, p).valid, "constructed encoder invalid");
        c.expect(e.length() >= lower, "encoder shorter than a lower bound");
        ++built;
      }
    }
  }
  return c.done(std::to_string(configs) + " configurations, " + std::to_string(built) + " encoders checked");
}

Outcome criterion10() {
  Checker c;
  std::ostringstream out, err;
  const int code = bcu::cli::run({"sweep", "--family", "mn", "--vary", "K", "--beta", "0.5", "--epsilon", "1",
                                  "--from", "4", "--to", "12", "--step", "2"},
                                 out, err);
  c.expect(code == 0, "sweep exited with " + std::to_string(code) + ": " + err.str());
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::vector<double> ratios;
  while (std::getline(in, line)) ratios.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  c.expect(ratios.size() == 5, "expected 5 sweep rows");
  for (std::size_t i = 1; i < ratios.size(); ++i) c.expect(ratios[i] <= ratios[i - 1], "ratio increased");
  c.expect(!ratios.empty() && ratios.back() <= 1.5, "ratio above 1.5 at K=12");
  std::ostringstream s;
  s << "ratios";
  for (double r : ratios) s << ' ' << r;
  return c.done(s.str());
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<Outcome()> run;
    double limit_s;
  };
  const std::vector<Criterion> all = {
      {"explicit binary encoder, exhaustive round trip", criterion1, 1},
      {"MDS construction lengths and certified optimum", criterion2, 1},
      {"random construction over GF(2^16)", criterion3, 30},
      {"MN exact regime", criterion4, 5},
      {"grouping exactness", criterion5, 1},
      {"near-extreme cache sizes and binary oracle", criterion6, 60},
      {"validator against literal brute force", criterion7, 60},
      {"noisy side information and counterexamples", criterion8, 30},
      {"bound consistency sweep", criterion9, 120},
      {"MN ratio trend", criterion10, 60},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > all[i].limit_s) {
      o.pass = false;
      o.detail += "; took " + std::to_string(secs) + " s";
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].title, o.detail.c_str(), secs);
  }
  return failed == 0 ? 0 : 1;
}
