// Copyright 2026 The qcards Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "oracles.hpp"
#include "qcards/qcards.hpp"

using namespace qcards;

namespace {

const Riddle& builtin(std::string_view id) { return find_riddle(builtin_riddles(), id); }

Move m1(Card c, std::size_t q) { return {c, {q}}; }
Move cx(std::size_t a, std::size_t b) { return {Card::CX, {a, b}}; }

// Random solvable or unsolvable riddle over at most two qudits.
Riddle random_riddle(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> coin(0, 1);
  Riddle r;
  r.id = "rnd";
  r.dim = 2 + coin(gen);
  r.num_qudits = 1 + coin(gen);
  for (int q = 0; q < r.num_qudits; ++q)
    r.init.push_back(std::uniform_int_distribution<int>(0, r.dim - 1)(gen));
  std::vector<Card> pool;
  for (Card c : kAllCards)
    if (is_gate(c) && gate_valid_for(c, r.dim) && (c != Card::CX || r.num_qudits > 1)) pool.push_back(c);
  const int size = std::uniform_int_distribution<int>(1, 4)(gen);
  for (int i = 0; i < size; ++i)
    r.allowed.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(gen)]);
  std::sort(r.allowed.begin(), r.allowed.end());
  r.max_cards = size;

  if (coin(gen)) {
    r.goal = oracle::random_state(r.dim, r.num_qudits, gen);
  } else {
    // Goal reached by playing a random prefix of a shuffled hand.
    auto hand = r.allowed;
    std::shuffle(hand.begin(), hand.end(), gen);
    hand.resize(std::uniform_int_distribution<std::size_t>(0, hand.size())(gen));
    Solution s;
    for (Card c : hand) {
      if (c == Card::CX) s.push_back(coin(gen) ? cx(0, 1) : cx(1, 0));
      else s.push_back(m1(c, std::uniform_int_distribution<std::size_t>(0, r.num_qudits - 1)(gen)));
    }
    r.goal = oracle::dense_run(r, s);
  }
  validate_riddle(r);
  return r;
}

}  // namespace

TEST(BuiltinRiddles, SixValidRiddles) {
  const auto& all = builtin_riddles();
  ASSERT_EQ(all.size(), 6u);
  for (const auto& r : all) {
    EXPECT_NO_THROW(validate_riddle(r));
    EXPECT_TRUE(std::is_sorted(r.allowed.begin(), r.allowed.end()));
    EXPECT_FALSE(r.explanation.empty());
  }
  EXPECT_THROW(find_riddle(all, "99"), Error);
}

TEST(BuiltinRiddles, ReferenceSolutions) {
  EXPECT_TRUE(check_solution(builtin("1"), {m1(Card::H1, 0)}).solved);
  EXPECT_TRUE(check_solution(builtin("2"), {m1(Card::H1, 0), m1(Card::Z, 0), m1(Card::H1, 0)}).solved);
  EXPECT_TRUE(check_solution(builtin("3"), {m1(Card::H1, 0), cx(0, 1)}).solved);
  EXPECT_TRUE(check_solution(builtin("4"), {m1(Card::H1, 0), cx(0, 1), m1(Card::X1, 1)}).solved);
  EXPECT_TRUE(check_solution(builtin("5"), {m1(Card::H1, 0), cx(0, 1), cx(0, 2)}).solved);
  EXPECT_TRUE(check_solution(builtin("6"), {m1(Card::X1, 0), m1(Card::X1, 0)}).solved);
  EXPECT_TRUE(check_solution(builtin("6"), {m1(Card::X1, 0), m1(Card::H1, 0), m1(Card::H1, 0)}).solved);
  EXPECT_TRUE(check_solution(builtin("6"), {m1(Card::H1, 0), m1(Card::Z, 0), m1(Card::H1, 0)}).solved);
}

TEST(BuiltinRiddles, WrongOrdersFail) {
  const auto& r = builtin("2");
  EXPECT_FALSE(check_solution(r, {m1(Card::H1, 0), m1(Card::H1, 0)}).solved);
  EXPECT_FALSE(check_solution(r, {m1(Card::Z, 0), m1(Card::H1, 0), m1(Card::H1, 0)}).solved);
  EXPECT_FALSE(check_solution(r, {m1(Card::H1, 0), m1(Card::H1, 0), m1(Card::Z, 0)}).solved);
  EXPECT_FALSE(check_solution(builtin("3"), {cx(0, 1), m1(Card::H1, 0)}).solved);
}

TEST(CheckSolution, DisallowedCards) {
  auto code = [](const Riddle& r, const Solution& s) {
    try {
      check_solution(r, s);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::invalid_argument;
  };
  const auto& r2 = builtin("2");
  EXPECT_EQ(code(r2, {m1(Card::X1, 0)}), Errc::disallowed_card);
  EXPECT_EQ(code(r2, {m1(Card::Z, 0), m1(Card::Z, 0)}), Errc::disallowed_card);
  EXPECT_EQ(code(r2, {m1(Card::H1, 0), m1(Card::H1, 0), m1(Card::Z, 0), m1(Card::H1, 0)}),
            Errc::disallowed_card);
  EXPECT_EQ(code(r2, {{Card::Steal, {0}}}), Errc::disallowed_card);
  EXPECT_EQ(code(r2, {m1(Card::H1, 1)}), Errc::illegal_move);
  EXPECT_EQ(code(builtin("3"), {cx(1, 1)}), Errc::illegal_move);
}

TEST(Solve, FrozenShortestLengths) {
  // Lengths computed by the exhaustive enumeration oracle.
  const std::map<std::string, int> expected = {{"1", 1}, {"2", 3}, {"3", 2}, {"4", 3}, {"5", 3}, {"6", 2}};
  for (const auto& r : builtin_riddles()) {
    EXPECT_EQ(oracle::shortest_solution_length(r, r.max_cards), expected.at(r.id)) << r.id;
    const auto s = solve(r);
    ASSERT_TRUE(s.has_value()) << r.id;
    EXPECT_EQ(static_cast<int>(s->size()), expected.at(r.id)) << r.id;
    EXPECT_TRUE(check_solution(r, *s).solved) << r.id;
  }
}

TEST(Solve, CanonicalChoices) {
  EXPECT_EQ(*solve(builtin("3")), (Solution{m1(Card::H1, 0), cx(0, 1)}));
  EXPECT_EQ(*solve(builtin("2")), (Solution{m1(Card::H1, 0), m1(Card::Z, 0), m1(Card::H1, 0)}));
  EXPECT_EQ(*solve(builtin("6")), (Solution{m1(Card::X1, 0), m1(Card::X1, 0)}));
}

TEST(Solve, GoalAtStartNeedsNoCards) {
  Riddle r = builtin("6");
  r.goal = basis_state(3, {0});
  const auto s = solve(r);
  ASSERT_TRUE(s.has_value());
  EXPECT_TRUE(s->empty());
}

TEST(Solve, RespectsDepthLimit) {
  EXPECT_FALSE(solve(builtin("2"), 2).has_value());
  EXPECT_THROW(solve(builtin("2"), kMaxSolveDepth + 1), Error);
  EXPECT_THROW(solve(builtin("2"), -1), Error);
}

TEST(Solve, AgreesWithBruteForceOnRandomRiddles) {
  std::mt19937_64 gen(2024);
  int solvable = 0;
  for (int k = 0; k < 150; ++k) {
    const Riddle r = random_riddle(gen);
    const int want = oracle::shortest_solution_length(r, r.max_cards);
    const auto got = solve(r);
    if (want < 0) {
      EXPECT_FALSE(got.has_value()) << k;
      continue;
    }
    ++solvable;
    ASSERT_TRUE(got.has_value()) << k;
    EXPECT_EQ(static_cast<int>(got->size()), want) << k;
    // Soundness, independently of the search: the dense oracle agrees.
    EXPECT_TRUE(goal_reached(r, oracle::dense_run(r, *got))) << k;
    EXPECT_NO_THROW(check_allowed(r, *got));
  }
  EXPECT_GT(solvable, 50);
}

TEST(Solve, BuiltinsFast) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& r : builtin_riddles()) solve(r);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 5.0);
}

TEST(SolveContinuation, FromPrefix) {
  const auto& r = builtin("2");
  EXPECT_EQ(*solve_continuation(r, {m1(Card::H1, 0)}), (Solution{m1(Card::Z, 0), m1(Card::H1, 0)}));
  EXPECT_FALSE(solve_continuation(r, {m1(Card::Z, 0)}).has_value());
  EXPECT_FALSE(solve_continuation(r, {m1(Card::H1, 0), m1(Card::H1, 0)}).has_value());
  EXPECT_TRUE(solve_continuation(r, {m1(Card::H1, 0), m1(Card::Z, 0), m1(Card::H1, 0)})->empty());
  EXPECT_THROW(solve_continuation(r, {m1(Card::X1, 0)}), Error);
}

TEST(Predicates, BellCorrelationIsExact) {
  const auto s = run_moves(builtin("3"), {m1(Card::H1, 0), cx(0, 1)});
  double agree = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto o = s.outcome_of(i);
    if (o.values[0] == o.values[1]) agree += std::norm(s[i]);
  }
  EXPECT_NEAR(agree, 1.0, 1e-12);
  OutcomePredicate same{OutcomePredicate::Kind::ShiftedPair, 0, 1, 0, 0};
  EXPECT_TRUE(predicate_holds(same, s));
}

TEST(Predicates, Kinds) {
  using K = OutcomePredicate::Kind;
  const auto ghz = run_moves(builtin("5"), {m1(Card::H1, 0), cx(0, 1), cx(0, 2)});
  EXPECT_TRUE(predicate_holds({K::AllEqual}, ghz));
  EXPECT_FALSE(predicate_holds({K::AllEqual}, basis_state(3, {0, 0, 0})));
  // One CX short: the third qudit stays at 0.
  const auto partial = run_moves(builtin("5"), {m1(Card::H1, 0), cx(0, 1)});
  EXPECT_FALSE(predicate_holds({K::AllEqual}, partial));
  EXPECT_TRUE(predicate_holds({K::QuditAlways, 2, 0, 0, 0}, partial));
  EXPECT_FALSE(predicate_holds({K::QuditAlways, 0, 0, 0, 0}, partial));
}

TEST(Riddles, ValidationRejectsBadShapes) {
  Riddle r = builtin("1");
  r.init = {0, 0};
  EXPECT_THROW(validate_riddle(r), Error);
  r = builtin("1");
  r.allowed.push_back(Card::X2);
  EXPECT_THROW(validate_riddle(r), Error);
  r = builtin("4");
  r.goal = OutcomePredicate{OutcomePredicate::Kind::ShiftedPair, 0, 0, 1, 0};
  EXPECT_THROW(validate_riddle(r), Error);
}
