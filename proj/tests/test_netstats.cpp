#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "meshplace/netstats.hpp"
#include "meshplace/synthgen.hpp"
#include "oracles.hpp"

namespace mp = meshplace;
using oracle::make_graph;

TEST(Centrality, CompleteGraphK4) {
  std::vector<mp::Link> links;
  for (mp::NodeId i = 0; i < 4; ++i)
    for (mp::NodeId j = i + 1; j < 4; ++j)
      links.push_back({i, j, 1.0});
  const auto g = make_graph(4, links);
  for (mp::NodeId h = 0; h < 4; ++h) {
    const auto r = mp::centrality(g, mp::Placement{{h}, {0, 0, 0, 0}});
    ASSERT_EQ(r.clusters.size(), 1U);
    EXPECT_EQ(r.clusters[0].head_degree, 3U);
    EXPECT_DOUBLE_EQ(r.clusters[0].head_neighborhood_connectivity, 3.0);
    EXPECT_EQ(r.clusters[0].diameter, 1U);
  }
}

TEST(Centrality, PathGraph) {
  // a=0 - b=1 - c=2, only one direction stored per edge
  const auto g = make_graph(3, {{0, 1, 1.0}, {2, 1, 1.0}});
  const auto r = mp::centrality(g, mp::Placement{{1}, {0, 0, 0}});
  EXPECT_EQ(r.clusters[0].head_degree, 2U);
  EXPECT_EQ(r.clusters[0].diameter, 2U);
  EXPECT_DOUBLE_EQ(r.clusters[0].head_neighborhood_connectivity, 1.0);
  EXPECT_DOUBLE_EQ(r.neighborhood_connectivity[0], 2.0);
}

TEST(Centrality, IsolatedAndSingleton) {
  const auto g = make_graph(3, {{0, 1, 1.0}});
  const auto r = mp::centrality(g, mp::Placement{{0, 2}, {0, 0, 1}});
  EXPECT_EQ(r.neighborhood_connectivity[2], 0.0);
  EXPECT_EQ(r.clusters[1].diameter, 0U);
  EXPECT_TRUE(r.clusters[1].connected);
}

TEST(Centrality, DisconnectedClusterFlagged) {
  const auto g = make_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  // cluster {0, 1, 3}: 3 is cut off once 2 is outside the cluster
  const auto r = mp::centrality(g, mp::Placement{{0, 2}, {0, 0, 1, 0}});
  EXPECT_FALSE(r.clusters[0].connected);
  EXPECT_EQ(r.clusters[0].diameter, 1U);
}

TEST(CentralityProperty, InvariantUnderRelabeling) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 6;
    const auto g = oracle::random_digraph(n, 0.3, 5, rng);
    std::vector<mp::NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<mp::Link> relinked;
    for (const auto &l : g.links())
      relinked.push_back({perm[l.src], perm[l.dst], l.bandwidth});
    const auto h = make_graph(n, relinked);
    const mp::Placement p{{0, 3}, {0, 0, 1, 1, 0, 1}};
    mp::Placement q{{perm[0], perm[3]}, std::vector<std::size_t>(n)};
    for (std::size_t i = 0; i < n; ++i)
      q.assignment[perm[i]] = p.assignment[i];
    const auto a = mp::centrality(g, p);
    const auto b = mp::centrality(h, q);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(a.degree[i], b.degree[perm[i]]);
      ASSERT_DOUBLE_EQ(a.neighborhood_connectivity[i], b.neighborhood_connectivity[perm[i]]);
    }
    for (std::size_t c = 0; c < 2; ++c) {
      ASSERT_EQ(a.clusters[c].diameter, b.clusters[c].diameter);
      ASSERT_EQ(a.clusters[c].head_degree, b.clusters[c].head_degree);
      ASSERT_EQ(a.clusters[c].connected, b.clusters[c].connected);
    }
  }
}

TEST(Ecdf, Single) {
  const std::vector<double> xs{5};
  const auto t = mp::ecdf(xs);
  EXPECT_EQ(t.values, std::vector<double>{5});
  EXPECT_EQ(t.fractions, std::vector<double>{1.0});
}

TEST(Ecdf, WithDuplicates) {
  const std::vector<double> xs{2, 1, 4, 2};
  const auto t = mp::ecdf(xs);
  EXPECT_EQ(t.values, (std::vector<double>{1, 2, 4}));
  EXPECT_EQ(t.fractions, (std::vector<double>{0.25, 0.75, 1.0}));
  EXPECT_EQ(t(0.5), 0.0);
  EXPECT_EQ(t(2.0), 0.75);
  EXPECT_EQ(t(3.0), 0.75);
  EXPECT_EQ(t(9.0), 1.0);
}

TEST(Ecdf, EmptyThrows) { EXPECT_THROW(mp::ecdf(std::vector<double>{}), std::invalid_argument); }

TEST(Ecdf, ExponentialAtMean) {
  // F(mean) = 1 - 1/e for an exponential distribution
  std::mt19937_64 rng(21);
  std::exponential_distribution<double> d(1.0 / 21.8);
  std::vector<double> xs(10000);
  for (auto &x : xs)
    x = d(rng);
  EXPECT_NEAR(mp::ecdf(xs)(21.8), 1.0 - std::exp(-1.0), 0.02);
}

TEST(EcdfProperty, MonotoneEndingAtOne) {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> v(0, 30);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xs(1 + trial % 40);
    for (auto &x : xs)
      x = v(rng);
    const auto t = mp::ecdf(xs);
    ASSERT_EQ(t.fractions.back(), 1.0);
    for (std::size_t i = 1; i < t.values.size(); ++i) {
      ASSERT_LT(t.values[i - 1], t.values[i]);
      ASSERT_LT(t.fractions[i - 1], t.fractions[i]);
    }
  }
}

TEST(FitExponential, ConstantSample) {
  const std::vector<double> xs{3, 3, 3};
  EXPECT_EQ(mp::fit_exponential(xs), 3.0);
}

TEST(FitExponential, RecoversMean) {
  // standard error 21.8 / sqrt(1e5) ~ 0.069; 0.2 is ~3 standard errors
  std::mt19937_64 rng(23);
  std::exponential_distribution<double> d(1.0 / 21.8);
  std::vector<double> xs(100000);
  for (auto &x : xs)
    x = d(rng);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  EXPECT_DOUBLE_EQ(mp::fit_exponential(xs), mean);
  EXPECT_NEAR(mp::fit_exponential(xs), 21.8, 0.2);
}

TEST(FitExponential, RejectsNonPositive) {
  EXPECT_THROW(mp::fit_exponential(std::vector<double>{1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(mp::fit_exponential(std::vector<double>{-2.0}), std::invalid_argument);
  EXPECT_THROW(mp::fit_exponential(std::vector<double>{}), std::invalid_argument);
}

TEST(KolmogorovSmirnov, SurvivalFunctionKnownValues) {
  // standard critical values of the Kolmogorov distribution
  EXPECT_NEAR(mp::kolmogorov_survival(1.3581), 0.05, 5e-4);
  EXPECT_NEAR(mp::kolmogorov_survival(1.6276), 0.01, 1e-4);
  EXPECT_NEAR(mp::kolmogorov_survival(1.2238), 0.10, 5e-4);
  EXPECT_NEAR(mp::kolmogorov_survival(0.5), 0.9639, 5e-4);
  // both series agree where they meet
  EXPECT_NEAR(mp::kolmogorov_survival(1.1799), mp::kolmogorov_survival(1.1801), 1e-3);
}

TEST(KolmogorovSmirnov, AcceptsMatchingRejectsMismatched) {
  std::mt19937_64 rng(24);
  std::exponential_distribution<double> d(1.0 / 21.8);
  std::vector<double> xs(2000);
  for (auto &x : xs)
    x = d(rng);
  EXPECT_GT(mp::ks_test_exponential(xs, 21.8).p_value, 0.01);
  EXPECT_LT(mp::ks_test_exponential(xs, 35.0).p_value, 1e-6);
}

TEST(LinkAsymmetry, SymmetricIsZero) {
  const auto g = make_graph(3, {{0, 1, 4.0}, {1, 0, 4.0}, {1, 2, 9.0}, {2, 1, 9.0}});
  const auto a = mp::link_asymmetry(g, 0.3);
  EXPECT_EQ(a.fraction_exceeding, 0.0);
  EXPECT_EQ(a.bidirectional_pairs, 2U);
  EXPECT_EQ(a.unidirectional_share, 0.0);
}

TEST(LinkAsymmetry, HalfDeviation) {
  const auto g = make_graph(3, {{0, 1, 10.0}, {1, 0, 5.0}, {2, 0, 1.0}});
  const auto a = mp::link_asymmetry(g, 0.3);
  EXPECT_EQ(a.fraction_exceeding, 1.0);
  EXPECT_EQ(a.unidirectional_pairs, 1U);
  EXPECT_DOUBLE_EQ(a.unidirectional_share, 0.5);
  EXPECT_EQ(mp::link_asymmetry(g, 0.6).fraction_exceeding, 0.0);
}

TEST(LinkAsymmetry, ThresholdRange) {
  const auto g = make_graph(2, {});
  EXPECT_THROW(mp::link_asymmetry(g, 0.0), std::invalid_argument);
  EXPECT_THROW(mp::link_asymmetry(g, 1.0), std::invalid_argument);
}

TEST(LinkAsymmetry, GeneratorUnidirectionalShare) {
  // ~1000 linked pairs pooled; binomial sd sqrt(.56*.44/1000) ~ 0.016
  std::size_t uni = 0, total = 0;
  for (mp::Seed s = 0; s < 8; ++s) {
    mp::TopologyProfile prof;
    prof.seed = 500 + s;
    prof.n = 50;
    const auto a = mp::link_asymmetry(mp::generate(prof).graph, 0.3);
    uni += a.unidirectional_pairs;
    total += a.unidirectional_pairs + a.bidirectional_pairs;
  }
  ASSERT_GE(total, 1000U);
  EXPECT_NEAR(static_cast<double>(uni) / static_cast<double>(total), 0.56, 0.03);
}

TEST(CsvExports, Shapes) {
  const std::vector<double> xs{1, 2, 2, 4};
  const auto csv = mp::ecdf_to_csv(mp::ecdf(xs));
  EXPECT_EQ(csv.rfind("value,fraction\n", 0), 0U);
  EXPECT_NE(csv.find("4,1\n"), std::string::npos);
  const auto g = make_graph(3, {{0, 1, 1.0}, {2, 1, 1.0}});
  const auto c = mp::centrality_to_csv(mp::centrality(g, mp::Placement{{1}, {0, 0, 0}}));
  EXPECT_EQ(c, "cluster,head,size,head_degree,head_neighborhood_connectivity,diameter,connected\n0,1,3,2,1,2,1\n");
}
