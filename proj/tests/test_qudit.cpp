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

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qcards/qcards.hpp"

using namespace qcards;

namespace {

const double kH = 1.0 / std::sqrt(2.0);

StateVector bell() { return StateVector(2, 2, {kH, 0.0, 0.0, kH}); }

}  // namespace

TEST(BasisState, SingleQubitZero) {
  const auto s = basis_state(2, {0});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], Amplitude(1.0));
  EXPECT_EQ(s[1], Amplitude(0.0));
}

TEST(BasisState, BigEndianEncoding) {
  const auto s = basis_state(3, {2, 1, 1, 1});
  ASSERT_EQ(s.size(), 81u);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s[i], Amplitude(i == 67 ? 1.0 : 0.0));
  EXPECT_EQ(s.outcome_of(67).values, (std::vector<int>{2, 1, 1, 1}));
  EXPECT_EQ(basis_state(3, {0, 0})[0], Amplitude(1.0));
}

TEST(BasisState, RejectsBadInput) {
  EXPECT_THROW(basis_state(2, {2}), Error);
  EXPECT_THROW(basis_state(3, std::vector<int>{}), Error);
  EXPECT_THROW(basis_state(4, {0}), Error);
  EXPECT_THROW(basis_state(2, {-1}), Error);
  EXPECT_THROW(basis_state(2, std::vector<int>(9, 0)), Error);
}

TEST(StateVectorType, RejectsInvalidAmplitudes) {
  EXPECT_THROW(StateVector(2, 1, {1.0, 1.0}), Error);
  EXPECT_THROW(StateVector(2, 2, {1.0, 0.0}), Error);
  EXPECT_THROW(StateVector(2, 1, {std::nan(""), 0.0}), Error);
}

TEST(ApplyGate, HadamardMakesSuperposition) {
  const auto s = apply_gate(basis_state(2, {0}), gate_matrix(Card::H1, 2), {0});
  EXPECT_NEAR(s[0].real(), kH, 1e-15);
  EXPECT_NEAR(s[1].real(), kH, 1e-15);
}

TEST(ApplyGate, ControlledShiftEntangles) {
  const StateVector plus0(2, 2, {kH, 0.0, kH, 0.0});
  const auto s = apply_gate(plus0, gate_matrix(Card::CX, 2), {0, 1});
  EXPECT_TRUE(equal_up_to_global_phase(s, bell(), 1e-12));
  EXPECT_NEAR(s[0].real(), kH, 1e-15);
  EXPECT_NEAR(s[3].real(), kH, 1e-15);
}

TEST(ApplyGate, IdentityIsExact) {
  std::mt19937_64 gen(7);
  const auto s = oracle::random_state(3, 3, gen);
  const auto out = apply_gate(s, GateMatrix::identity(3), {1});
  EXPECT_EQ(out, s);
}

TEST(ApplyGate, InputIsUnchanged) {
  const auto s = basis_state(2, {0, 1});
  const auto copy = s;
  (void)apply_gate(s, gate_matrix(Card::X1, 2), {0});
  EXPECT_EQ(s, copy);
}

TEST(ApplyGate, RejectsBadTargets) {
  const auto s = basis_state(3, {0, 0});
  EXPECT_THROW(apply_gate(s, gate_matrix(Card::CX, 3), {0, 0}), Error);
  EXPECT_THROW(apply_gate(s, gate_matrix(Card::H1, 3), {2}), Error);
  EXPECT_THROW(apply_gate(s, gate_matrix(Card::H1, 2), {0}), Error);
  EXPECT_THROW(apply_gate(s, gate_matrix(Card::CX, 3), {0}), Error);
  try {
    apply_gate(s, gate_matrix(Card::CX, 3), {1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::duplicate_target);
  }
}

// Kernel output agrees with the dense full-operator oracle for every gate,
// every target assignment and random states with up to 3 qudits.
TEST(ApplyGate, MatchesDenseOracle) {
  std::mt19937_64 gen(2024);
  for (int d : {2, 3})
    for (int n = 1; n <= 3; ++n)
      for (Card c : kAllCards) {
        if (!gate_valid_for(c, d) || (gate_arity(c) == 2 && n < 2)) continue;
        const auto g = gate_matrix(c, d);
        std::vector<std::vector<std::size_t>> assignments;
        for (std::size_t a = 0; a < static_cast<std::size_t>(n); ++a) {
          if (gate_arity(c) == 1) assignments.push_back({a});
          else
            for (std::size_t b = 0; b < static_cast<std::size_t>(n); ++b)
              if (a != b) assignments.push_back({a, b});
        }
        for (const auto& t : assignments) {
          const auto s = oracle::random_state(d, n, gen);
          const auto got = apply_gate(s, g, t);
          const auto want = oracle::multiply(oracle::embed(g, n, t),
                                             {s.amplitudes().begin(), s.amplitudes().end()});
          for (std::size_t i = 0; i < want.size(); ++i)
            ASSERT_LT(std::abs(got[i] - want[i]), 1e-12)
                << card_token(c) << " d=" << d << " n=" << n;
        }
      }
}

TEST(ApplyGateProperty, NormPreserved) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(gen() % 2);
    const int n = 2 + static_cast<int>(gen() % 3);
    auto s = oracle::random_state(d, n, gen);
    for (int step = 0; step < 10; ++step) {
      Card c = kAllCards[gen() % 7];
      while (!gate_valid_for(c, d)) c = kAllCards[gen() % 7];
      std::vector<std::size_t> t{gen() % n};
      if (gate_arity(c) == 2) {
        std::size_t b = gen() % n;
        while (b == t[0]) b = gen() % n;
        t.push_back(b);
      }
      s = apply_gate(s, gate_matrix(c, d), t);
      ASSERT_NEAR(s.norm_squared(), 1.0, 1e-10);
    }
  }
}

TEST(ApplyGateProperty, Linearity) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(gen() % 2);
    const int n = 2;
    const std::size_t size = static_cast<std::size_t>(d * d);
    const auto v1 = oracle::random_amplitudes(size, gen, false);
    const auto v2 = oracle::random_amplitudes(size, gen, false);
    const Amplitude alpha(0.3, -1.2), beta(-0.7, 0.4);
    std::vector<Amplitude> mix(size);
    for (std::size_t i = 0; i < size; ++i) mix[i] = alpha * v1[i] + beta * v2[i];
    const std::vector<std::size_t> t{1, 0};
    const auto g = gate_matrix(Card::CX, d) ;
    const auto lhs = detail::apply_gate_kernel(d, n, mix, g, t);
    const auto r1 = detail::apply_gate_kernel(d, n, v1, g, t);
    const auto r2 = detail::apply_gate_kernel(d, n, v2, g, t);
    const auto h = gate_matrix(Card::H1, d);
    const std::vector<std::size_t> t1{0};
    const auto lh = detail::apply_gate_kernel(d, n, mix, h, t1);
    const auto h1 = detail::apply_gate_kernel(d, n, v1, h, t1);
    const auto h2 = detail::apply_gate_kernel(d, n, v2, h, t1);
    for (std::size_t i = 0; i < size; ++i) {
      ASSERT_LT(std::abs(lhs[i] - (alpha * r1[i] + beta * r2[i])), 1e-10);
      ASSERT_LT(std::abs(lh[i] - (alpha * h1[i] + beta * h2[i])), 1e-10);
    }
  }
}

TEST(Probabilities, EqualSuperposition) {
  const auto p = probabilities(StateVector(2, 1, {kH, kH}));
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p.at(Outcome{{0}}), 0.5, 1e-15);
  EXPECT_NEAR(p.at(Outcome{{1}}), 0.5, 1e-15);
}

TEST(Probabilities, GlobalSignInvisible) {
  const auto p = probabilities(StateVector(2, 1, {-1.0, 0.0}));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.at(Outcome{{0}}), 1.0);
}

TEST(Probabilities, BellHasOnlyMatchingOutcomes) {
  const auto p = probabilities(bell());
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p.at(Outcome{{0, 0}}), 0.5, 1e-15);
  EXPECT_NEAR(p.at(Outcome{{1, 1}}), 0.5, 1e-15);
}

TEST(ProbabilitiesProperty, GlobalPhaseInvariance) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = oracle::random_state(3, 2, gen);
    const Amplitude c = std::polar(1.0, angle(gen));
    std::vector<Amplitude> rotated(s.amplitudes().begin(), s.amplitudes().end());
    for (auto& a : rotated) a *= c;
    const auto p1 = probabilities(s);
    const auto p2 = probabilities(StateVector(3, 2, rotated));
    ASSERT_EQ(p1.size(), p2.size());
    for (const auto& [o, p] : p1) ASSERT_NEAR(p2.at(o), p, 1e-12);
  }
}

TEST(MeasureAll, DeterministicState) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto m = measure_all(basis_state(2, {1}), rng);
    EXPECT_EQ(m.outcome.values, std::vector<int>{1});
    EXPECT_EQ(m.state, basis_state(2, {1}));
  }
}

TEST(MeasureAll, BellNeverMixed) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto m = measure_all(bell(), rng);
    EXPECT_EQ(m.outcome.values[0], m.outcome.values[1]);
  }
}

TEST(MeasureAll, SameSeedSameOutcome) {
  std::mt19937_64 gen(3);
  const auto s = oracle::random_state(3, 3, gen);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    EXPECT_EQ(measure_all(s, a).outcome, measure_all(s, b).outcome);
  }
}

TEST(MeasureAllProperty, CollapseIdempotent) {
  std::mt19937_64 gen(17);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = oracle::random_state(3, 2, gen);
    Rng rng(seed);
    const auto first = measure_all(s, rng);
    const auto second = measure_all(first.state, rng);
    EXPECT_EQ(first.outcome, second.outcome);
  }
}

TEST(MeasureSubset, BellCollapseOnZero) {
  // Projector oracle: keep amplitudes whose first digit is 0, renormalize.
  const auto b = bell();
  std::vector<Amplitude> kept(4);
  double p = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    if (i / 2 == 0) {
      kept[i] = b[i];
      p += std::norm(b[i]);
    }
  for (auto& a : kept) a /= std::sqrt(p);

  bool saw_zero = false;
  for (std::uint64_t seed = 0; seed < 64 && !saw_zero; ++seed) {
    Rng rng(seed);
    const auto m = measure_subset(b, {0}, rng);
    if (m.outcome.values[0] != 0) continue;
    saw_zero = true;
    for (std::size_t i = 0; i < 4; ++i) EXPECT_LT(std::abs(m.state[i] - kept[i]), 1e-12);
    EXPECT_EQ(m.state, basis_state(2, {0, 0}));
  }
  EXPECT_TRUE(saw_zero);
}

TEST(MeasureSubset, ProductStateHasNoBackAction) {
  const StateVector s(2, 2, {kH, kH, 0.0, 0.0});  // |0> (x) (|0>+|1>)/sqrt2
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto m = measure_subset(s, {1}, rng);
    const auto marg = marginal(m.state, std::vector<std::size_t>{0});
    ASSERT_EQ(marg.size(), 1u);
    EXPECT_NEAR(marg.at(Outcome{{0}}), 1.0, 1e-12);
    EXPECT_NEAR(m.state.norm_squared(), 1.0, 1e-10);
  }
}

TEST(MeasureSubset, RejectsEmptyIndexList) {
  Rng rng(1);
  EXPECT_THROW(measure_subset(bell(), std::vector<std::size_t>{}, rng), Error);
  EXPECT_THROW(measure_subset(bell(), {0, 0}, rng), Error);
}

// Measuring every qudit through measure_subset gives the measure_all
// distribution; checked exactly via the analytic marginal/projection route
// against the enumerated Born probabilities.
TEST(MeasureSubsetProperty, FullSubsetMatchesMeasureAll) {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::random_state(3, 2, gen);
    const std::vector<std::size_t> both{0, 1};
    const auto joint = marginal(s, both);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto o = s.outcome_of(i);
      EXPECT_NEAR(joint.at(o), std::norm(s[i]), 1e-12);
    }
    // Seeded draws agree shot by shot: both consume one uniform per draw.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng a(seed), b(seed);
      EXPECT_EQ(measure_subset(s, both, a).outcome, measure_all(s, b).outcome);
    }
  }
}

TEST(Sample, DeterministicState) {
  Rng rng(3);
  const auto h = sample(basis_state(3, {2}), 100, rng);
  EXPECT_EQ(h.shots, 100u);
  ASSERT_EQ(h.counts.size(), 1u);
  EXPECT_EQ(h.count(Outcome{{2}}), 100u);
}

TEST(Sample, FairCoinWithinThreeSigma) {
  Rng rng(12345);
  const auto h = sample(StateVector(2, 1, {kH, kH}), 10000, rng);
  const double f = h.count(Outcome{{0}}) / 10000.0;
  EXPECT_GE(f, 0.485);
  EXPECT_LE(f, 0.515);
}

TEST(Sample, BellOnlyCorrelated) {
  Rng rng(8);
  const auto h = sample(bell(), 5000, rng);
  for (const auto& [o, n] : h.counts) EXPECT_EQ(o.values[0], o.values[1]);
  EXPECT_EQ(h.count(Outcome{{0, 0}}) + h.count(Outcome{{1, 1}}), 5000u);
}

TEST(Sample, RejectsZeroShotsAndKeepsInput) {
  Rng rng(1);
  EXPECT_THROW(sample(bell(), 0, rng), Error);
  const auto s = bell();
  (void)sample(s, 10, rng);
  EXPECT_EQ(s, bell());
}

TEST(SampleProperty, BornConsistency) {
  std::mt19937_64 gen(77);
  for (int d : {2, 3})
    for (int n = 1; n <= 3; ++n) {
      const auto s = oracle::random_state(d, n, gen);
      Rng rng(static_cast<std::uint64_t>(d * 10 + n));
      const auto h = sample(s, 100000, rng);
      double tv = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i)
        tv += std::abs(h.count(s.outcome_of(i)) / 100000.0 - std::norm(s[i]));
      EXPECT_LE(tv / 2.0, 0.02) << "d=" << d << " n=" << n;
    }
}

TEST(GlobalPhase, Examples) {
  EXPECT_TRUE(equal_up_to_global_phase(StateVector(2, 1, {-1.0, 0.0}), basis_state(2, {0})));
  EXPECT_FALSE(equal_up_to_global_phase(basis_state(2, {0}), basis_state(2, {1})));
  const auto hzh = apply_gate(apply_gate(apply_gate(basis_state(2, {0}), gate_matrix(Card::H1, 2), {0}),
                                         gate_matrix(Card::Z, 2), {0}),
                              gate_matrix(Card::H1, 2), {0});
  EXPECT_TRUE(equal_up_to_global_phase(hzh, basis_state(2, {1})));
  EXPECT_THROW(equal_up_to_global_phase(basis_state(2, {0}), basis_state(3, {0})), Error);
}

TEST(RngDeterminism, KnownSequenceIsStable) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
  Rng c(42);
  const auto copy = Rng::from_state(c.state());
  EXPECT_EQ(copy, c);
  for (int i = 0; i < 1000; ++i) {
    const auto x = c.below(7);
    ASSERT_LT(x, 7u);
    const double u = c.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}
