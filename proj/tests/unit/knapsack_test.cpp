#include "qaoace/knapsack.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qaoace/errors.hpp"
#include "qaoace/instances.hpp"
#include "test_support.hpp"

namespace qaoace {
namespace {

const KnapsackInstance& instance(std::string_view label) {
  for (const auto& k : builtin_instances()) {
    if (k.label() == label) return k;
  }
  throw std::logic_error("no such instance");
}

constexpr PenaltyPair kGood{2.7, 1.1};

TEST(KnapsackInstanceTest, RejectsInvalidInput) {
  EXPECT_THROW(KnapsackInstance("x", {}, {}, 1), InvalidArgument);
  EXPECT_THROW(KnapsackInstance("x", {1, 2}, {1}, 1), InvalidArgument);
  EXPECT_THROW(KnapsackInstance("x", {1}, {1}, 0), InvalidArgument);
  EXPECT_THROW(KnapsackInstance("x", {0}, {1}, 1), InvalidArgument);
  EXPECT_THROW(KnapsackInstance("x", {1}, {-2}, 1), InvalidArgument);
}

TEST(KnapsackInstanceTest, QubitCountIsItemsPlusCapacity) {
  EXPECT_EQ(instance("A").qubit_count(), 3u);
  EXPECT_EQ(instance("D").qubit_count(), 4u);
}

TEST(KnapsackInstanceTest, BuiltinsMatchReferenceTable) {
  const auto& all = builtin_instances();
  ASSERT_EQ(all.size(), 5u);
  EXPECT_EQ(instance("A"), KnapsackInstance("A", {1, 1}, {2, 1}, 1));
  EXPECT_EQ(instance("B"), KnapsackInstance("B", {1, 1}, {1, 2}, 1));
  EXPECT_EQ(instance("C"), KnapsackInstance("C", {1, 1}, {2, 1}, 2));
  EXPECT_EQ(instance("D"), KnapsackInstance("D", {2, 3}, {2, 1}, 2));
  EXPECT_EQ(instance("E"), KnapsackInstance("E", {1, 2}, {2, 1}, 2));
  EXPECT_FALSE(find_builtin("F").has_value());
}

TEST(KnapsackInstanceTest, JsonFileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "qaoace_instance_test.json";
  {
    std::ofstream out(path);
    out << R"({"label": "mine", "weights": [2, 1], "values": [3, 4], "capacity": 2})";
  }
  const auto k = resolve_instance(path.string());
  EXPECT_EQ(k, KnapsackInstance("mine", {2, 1}, {3, 4}, 2));
  nlohmann::json j = k;
  EXPECT_EQ(instance_from_json(j), k);
  std::filesystem::remove(path);

  EXPECT_THROW(resolve_instance("/nonexistent/instance.json"), InvalidArgument);
  EXPECT_THROW(instance_from_json(nlohmann::json{{"weights", {1}}}), InvalidArgument);
}

TEST(SolveBruteforceTest, ReferenceInstances) {
  auto a = solve_bruteforce(instance("A"));
  EXPECT_EQ(a.best_value, 2);
  EXPECT_EQ(a.best_packings, (std::vector<std::vector<std::size_t>>{{0}}));

  auto c = solve_bruteforce(instance("C"));
  EXPECT_EQ(c.best_value, 3);
  EXPECT_EQ(c.best_packings, (std::vector<std::vector<std::size_t>>{{0, 1}}));
}

TEST(SolveBruteforceTest, NothingFits) {
  auto s = solve_bruteforce(KnapsackInstance("x", {3}, {5}, 2));
  EXPECT_EQ(s.best_value, 0);
  EXPECT_EQ(s.best_packings, (std::vector<std::vector<std::size_t>>{{}}));
}

TEST(SolveBruteforceTest, ReportsAllTiedPackings) {
  auto s = solve_bruteforce(KnapsackInstance("x", {1, 1, 2}, {1, 1, 2}, 2));
  EXPECT_EQ(s.best_value, 2);
  EXPECT_EQ(s.best_packings, (std::vector<std::vector<std::size_t>>{{0, 1}, {2}}));
}

TEST(SolveBruteforceTest, RejectsTooManyItems) {
  KnapsackInstance big("big", std::vector<std::int64_t>(26, 1), std::vector<std::int64_t>(26, 1), 1);
  EXPECT_THROW(solve_bruteforce(big), SizeError);
}

TEST(CanonicalBksTest, MatchesReferenceStrings) {
  EXPECT_EQ(canonical_bks_bitstring(instance("A")).to_string(), "101");
  EXPECT_EQ(canonical_bks_bitstring(instance("B")).to_string(), "011");
  EXPECT_EQ(canonical_bks_bitstring(instance("C")).to_string(), "1101");
  EXPECT_EQ(canonical_bks_bitstring(instance("D")).to_string(), "1001");
  EXPECT_EQ(canonical_bks_bitstring(instance("E")).to_string(), "1010");
}

TEST(CanonicalBksTest, EmptyOptimumIsUnrepresentable) {
  EXPECT_THROW(canonical_bks_bitstring(KnapsackInstance("x", {3}, {5}, 2)), UnrepresentableOptimum);
}

TEST(AssignmentBitsTest, IndexIsBigEndian) {
  EXPECT_EQ(AssignmentBits::from_string("101").to_index(), 5u);
  EXPECT_EQ(AssignmentBits::from_string("0011").to_index(), 3u);
  EXPECT_EQ(AssignmentBits::from_index(6, 3).to_string(), "110");
  EXPECT_THROW(AssignmentBits::from_string("10x"), InvalidArgument);
  EXPECT_THROW(AssignmentBits::from_index(8, 3), InvalidArgument);
}

TEST(AssignmentBitsTest, IndexRoundTripProperty) {
  for (std::size_t q = 1; q <= 10; ++q) {
    for (std::uint64_t z = 0; z < (1u << q); ++z) {
      const auto bits = AssignmentBits::from_index(z, q);
      ASSERT_EQ(bits.to_index(), z);
      ASSERT_EQ(AssignmentBits::from_string(bits.to_string()), bits);
    }
  }
}

TEST(EvaluateBinaryTest, HandComputedValues) {
  const auto& a = instance("A");
  EXPECT_NEAR(evaluate_binary(a, kGood, AssignmentBits::from_string("101")), -2.2, 1e-12);
  EXPECT_NEAR(evaluate_binary(a, kGood, AssignmentBits::from_string("000")), 2.7, 1e-12);
  EXPECT_NEAR(evaluate_binary(a, kGood, AssignmentBits::from_string("111")), -0.6, 1e-12);
  EXPECT_THROW(evaluate_binary(a, kGood, AssignmentBits::from_string("10")), DimensionMismatch);
}

TEST(BuildDiagonalTest, InstanceAEnergies) {
  const auto d = build_diagonal(instance("A"), kGood);
  ASSERT_EQ(d.size(), 8u);
  EXPECT_EQ(d.qubit_count(), 3u);
  const std::vector<double> expected{2.7, 2.7, 4.3, -1.1, 3.2, -2.2, 10.2, -0.6};
  for (std::size_t z = 0; z < 8; ++z) EXPECT_NEAR(d[z], expected[z], 1e-12) << "z=" << z;

  EXPECT_EQ(AssignmentBits::from_index(d.argmin(), 3).to_string(), "101");
  EXPECT_NEAR(d.min(), -2.2, 1e-12);
  EXPECT_NEAR(d.mean(), 2.4, 1e-12);

  std::vector<double> sorted(d.energies().begin(), d.energies().end());
  std::sort(sorted.begin(), sorted.end());
  EXPECT_NEAR(sorted[1], -1.1, 1e-12);
  EXPECT_NEAR(d[AssignmentBits::from_string("011").to_index()], -1.1, 1e-12);
}

TEST(BuildDiagonalTest, ZeroPenaltiesGiveZeroDiagonal) {
  for (const auto& k : builtin_instances()) {
    const auto d = build_diagonal(k, PenaltyPair{0.0, 0.0});
    for (double e : d.energies()) EXPECT_EQ(e, 0.0);
  }
}

TEST(BuildDiagonalTest, MatchesTermByTermReference) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = testing::random_instance(rng);
    const auto pen = testing::random_valid_pair(k, rng);
    const auto d = build_diagonal(k, pen);
    for (std::uint64_t z = 0; z < d.size(); ++z) {
      ASSERT_NEAR(d[z], testing::reference_energy(k, pen, testing::bits_of(z, k.qubit_count())),
                  1e-9);
    }
  }
}

TEST(BuildDiagonalTest, SizeLimit) {
  KnapsackInstance wide("wide", {1}, {1}, 24);  // 25 qubits
  EXPECT_THROW(build_diagonal(wide, PenaltyPair{2, 1}), SizeError);
}

TEST(PenaltyPairTest, Validity) {
  const auto& a = instance("A");  // max(c) = 2
  EXPECT_TRUE((PenaltyPair{2.7, 1.1}).valid_for(a));
  EXPECT_TRUE((PenaltyPair{3.2, 0.2}).valid_for(a));
  EXPECT_FALSE((PenaltyPair{2.2, 1.1}).valid_for(a));
  EXPECT_FALSE((PenaltyPair{1.0, 0.0}).valid_for(a));
}

TEST(ExpandIsingTest, ObjectiveLinearTerm) {
  // With A = 0 only the objective term contributes: h_1 = -B c_1 / 2.
  const auto c = expand_ising(instance("A"), PenaltyPair{0.0, 1.1});
  EXPECT_NEAR(c.linear(0), -1.1, 1e-12);
  EXPECT_NEAR(c.linear(1), -0.55, 1e-12);
  EXPECT_NEAR(c.linear(2), 0.0, 1e-12);

  // B = 0 removes the objective contribution from the item spins.
  const auto no_b = expand_ising(instance("A"), PenaltyPair{2.7, 0.0});
  const auto full = expand_ising(instance("A"), kGood);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(full.linear(i) - no_b.linear(i), -1.1 * instance("A").values()[i] / 2.0, 1e-12);
  }
  EXPECT_NEAR(full.linear(2), no_b.linear(2), 1e-12);
}

TEST(ExpandIsingTest, BksEnergyWithOffset) {
  const auto c = expand_ising(instance("A"), kGood);
  const auto spins = AssignmentBits::from_string("101").spins();
  EXPECT_EQ(spins, (std::vector<int>{1, -1, 1}));
  EXPECT_NEAR(evaluate_ising(c, spins), -2.2, 1e-12);
  // Offset of instance A is 1.5 A - 1.5 B.
  EXPECT_NEAR(c.constant_offset(), 1.5 * 2.7 - 1.5 * 1.1, 1e-12);
}

TEST(ExpandIsingTest, EquivalenceProperty) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto k = testing::random_instance(rng);
    const auto pen = testing::random_valid_pair(k, rng);
    const auto coeffs = expand_ising(k, pen);
    for (std::uint64_t z = 0; z < (1u << k.qubit_count()); ++z) {
      const auto bits = AssignmentBits::from_index(z, k.qubit_count());
      ASSERT_NEAR(evaluate_ising(coeffs, bits.spins()), evaluate_binary(k, pen, bits), 1e-9)
          << "trial " << trial << " state " << bits.to_string();
    }
  }
}

TEST(ExpandIsingTest, CouplingsUpperTriangleOnly) {
  const auto c = expand_ising(instance("C"), kGood);
  EXPECT_THROW(c.coupling(1, 1), InvalidArgument);
  EXPECT_THROW(c.coupling(2, 1), InvalidArgument);
  EXPECT_NO_THROW(c.coupling(1, 2));
}

TEST(EvaluateIsingTest, TrivialCases) {
  IsingCoefficients flat(3);
  flat.set_constant_offset(5.0);
  EXPECT_EQ(evaluate_ising(flat, std::vector<int>{1, -1, 1}), 5.0);
  EXPECT_EQ(evaluate_ising(flat, std::vector<int>{-1, -1, -1}), 5.0);

  IsingCoefficients one(1);
  one.linear(0) = 1.0;
  EXPECT_EQ(evaluate_ising(one, std::vector<int>{-1}), -1.0);

  EXPECT_THROW(evaluate_ising(one, std::vector<int>{1, 1}), DimensionMismatch);
}

// Every assignment that violates the weight limit, claims the wrong slack or
// sets a number of slack bits other than one lies strictly above the BKS.
TEST(EncodingPropertyTest, PenaltySeparation) {
  Rng rng(3);
  for (const auto& k : builtin_instances()) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto pen = testing::random_valid_pair(k, rng);
      const auto d = build_diagonal(k, pen);
      const double bks_energy = d[canonical_bks_bitstring(k).to_index()];
      for (std::uint64_t z = 0; z < d.size(); ++z) {
        const auto info = decode(k, AssignmentBits::from_index(z, k.qubit_count()));
        if (!info.fits(k.capacity()) || !info.slack_consistent()) {
          ASSERT_GT(d[z], bks_energy) << k.label() << " z=" << z;
        }
      }
    }
  }
}

TEST(EncodingPropertyTest, FeasibleEnergyIdentity) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto k = testing::random_instance(rng);
    const auto pen = testing::random_valid_pair(k, rng);
    const auto d = build_diagonal(k, pen);
    for (std::uint64_t z = 0; z < d.size(); ++z) {
      const auto info = decode(k, AssignmentBits::from_index(z, k.qubit_count()));
      if (info.slack_consistent() && info.fits(k.capacity())) {
        ASSERT_NEAR(d[z], -pen.b * static_cast<double>(info.packed_value), 1e-9);
      }
    }
  }
}

TEST(EncodingPropertyTest, ArgminIsOptimalPacking) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto k = testing::random_instance(rng);
    const auto opt = solve_bruteforce(k);
    if (opt.best_value == 0) continue;
    const auto pen = testing::random_valid_pair(k, rng);
    const auto d = build_diagonal(k, pen);
    const auto info = decode(k, AssignmentBits::from_index(d.argmin(), k.qubit_count()));
    ASSERT_EQ(info.packed_value, opt.best_value);
    ASSERT_TRUE(info.slack_consistent());
    ASSERT_TRUE(info.fits(k.capacity()));
  }
}

}  // namespace
}  // namespace qaoace
