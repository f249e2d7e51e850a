// Copyright 2026 The gleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "gleak/preprocess.h"
#include "gleak/qif.h"
#include "gleak/sampling.h"
#include "gleak/scenarios/dp.h"
#include "gleak/scenarios/geometric.h"
#include "gleak/scenarios/location.h"
#include "gleak/scenarios/password.h"
#include "gtest/gtest.h"

namespace gleak {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void ExpectRowStochastic(const Channel& c, double tol = 1e-9) {
  for (std::size_t x = 0; x < c.input().size(); ++x) {
    EXPECT_NEAR(KahanTotal(c.matrix().row(x)), 1.0, tol) << "row " << x;
  }
}

std::uint64_t Binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// --- geometric channel and k-tries gain ---

TEST(GeometricChannelTest, LambdaMatchesNormalizer) {
  GeometricChannelConfig c;
  c.nu = 0.3;
  EXPECT_NEAR(c.lambda(), (std::exp(0.3) - 1.0) / (std::exp(0.3) + 1.0), 1e-15);
  // lambda normalizes exp(-nu |k|) over all integers.
  double total = 0.0;
  for (int k = -400; k <= 400; ++k) total += c.lambda() * std::exp(-0.3 * std::abs(k));
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(GeometricChannelTest, RejectsInvalidConfig) {
  GeometricChannelConfig c;
  c.nu = 0.0;
  EXPECT_FALSE(GeometricChannel(c).ok());
  c = {};
  c.bucket_width = 0;
  EXPECT_FALSE(GeometricChannel(c).ok());
  c = {};
  c.observables = 0;
  EXPECT_FALSE(GeometricChannel(c).ok());
}

TEST(GeometricChannelTest, RowsStochasticAndPeakBracketsCenter) {
  const auto c = GeometricChannelConfig::Paper();
  auto ch = GeometricChannel(c);
  ASSERT_TRUE(ch.ok()) << ch.status();
  ExpectRowStochastic(*ch);
  for (std::size_t x = 0; x < c.secrets; ++x) {
    const auto row = ch->matrix().row(x);
    const auto lo = static_cast<std::size_t>(std::floor(c.rescale(x)));
    const double peak = *std::max_element(row.begin(), row.end());
    EXPECT_DOUBLE_EQ(row[lo], peak);
    EXPECT_DOUBLE_EQ(row[lo + 1], peak);
  }
}

TEST(GeometricChannelTest, FullChannelTwoTriesVulnerability) {
  for (const auto& config :
       {GeometricChannelConfig::Paper(), GeometricChannelConfig::Desk()}) {
    auto s = MultiGuessScenario(config);
    ASSERT_TRUE(s.ok()) << s.status();
    EXPECT_NEAR(s->exact_vulnerability, 0.892, 1e-3);
    EXPECT_EQ(s->observable_count, config.output_size());
  }
}

TEST(GeometricChannelTest, DeskReplicaIsBucketedFullChannel) {
  auto paper = GeometricChannel(GeometricChannelConfig::Paper());
  auto desk = GeometricChannel(GeometricChannelConfig::Desk());
  ASSERT_TRUE(paper.ok() && desk.ok());
  ASSERT_EQ(desk->output().size(), 1600u);
  for (std::size_t x = 0; x < 10; ++x) {
    for (std::size_t b = 0; b < 1600; b += 97) {
      double s = 0.0;
      for (std::size_t y = 10 * b; y < 10 * b + 10; ++y) s += (*paper)(x, y);
      EXPECT_NEAR((*desk)(x, b), s, 1e-15);
    }
  }
}

TEST(GeometricChannelTest, NoiselessLimitGivesFullVulnerability) {
  auto c = GeometricChannelConfig::Desk();
  c.nu = 50.0;
  auto s = MultiGuessScenario(c);
  ASSERT_TRUE(s.ok());
  EXPECT_NEAR(s->exact_vulnerability, 1.0, 1e-12);
}

TEST(GeometricChannelTest, ShrunkenReplicasMatchEnumerationOracle) {
  for (double nu : {0.1, 0.7, 2.0}) {
    for (std::size_t ny : {3u, 4u, 5u}) {
      GeometricChannelConfig c;
      c.nu = nu;
      c.secrets = 3;
      c.observables = ny;
      c.scale = 1.0;
      c.offset = 0.5;
      auto ch = GeometricChannel(c);
      auto g = TwoTriesGain(3, 2);
      ASSERT_TRUE(ch.ok() && g.ok());
      const Prior pi = Prior::Uniform(ch->input());
      auto fast = PosteriorVulnerability(pi, *ch, *g);
      auto slow = EnumerateStrategiesVulnerability(pi, *ch, *g);
      ASSERT_TRUE(fast.ok() && slow.ok());
      EXPECT_NEAR(*fast, *slow, 1e-12);
    }
  }
}

TEST(TwoTriesGainTest, TenSecretsSizeAndColumnSums) {
  auto g = TwoTriesGain(10, 2);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(g->num_guesses(), 45u);
  EXPECT_EQ(g->guesses().label(0), "{0,1}");
  EXPECT_EQ(g->guesses().label(44), "{8,9}");
  for (std::size_t x = 0; x < 10; ++x) {
    double s = 0.0;
    for (std::size_t w = 0; w < 45; ++w) s += (*g)(w, x);
    EXPECT_EQ(s, 9.0);
  }
}

TEST(TwoTriesGainTest, ColumnSumsAreBinomial) {
  for (std::size_t n = 2; n <= 9; ++n) {
    for (std::size_t k = 1; k < n; ++k) {
      auto g = TwoTriesGain(n, k);
      ASSERT_TRUE(g.ok());
      EXPECT_EQ(g->num_guesses(), Binomial(n, k));
      for (std::size_t x = 0; x < n; ++x) {
        double s = 0.0;
        for (std::size_t w = 0; w < g->num_guesses(); ++w) s += (*g)(w, x);
        EXPECT_EQ(s, static_cast<double>(Binomial(n - 1, k - 1)));
      }
      for (std::size_t w = 0; w < g->num_guesses(); ++w) {
        EXPECT_EQ(KahanTotal(g->matrix().row(w)), static_cast<double>(k));
      }
    }
  }
}

TEST(TwoTriesGainTest, SingleTryIsIdentityAndBadTriesRejected) {
  auto g = TwoTriesGain(4, 1);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(g->matrix(), Matrix::Identity(4));
  EXPECT_FALSE(TwoTriesGain(4, 0).ok());
  EXPECT_FALSE(TwoTriesGain(4, 4).ok());
}

TEST(TwoTriesGainTest, DataPreprocessingExpandsNineFold) {
  auto s = MultiGuessScenario(GeometricChannelConfig::Desk());
  ASSERT_TRUE(s.ok());
  auto train = SampleJoint(s->prior, *s->channel, 2000, 7, 1);
  ASSERT_TRUE(train.ok());
  auto d = DataPreprocess(*train, s->gain);
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(d->total_weight(), 9u * 2000u);
}

// --- location ---

TEST(DiamondGainTest, MatchesDiamondPattern) {
  GridScenarioConfig c;
  auto g = DiamondGain(c);
  ASSERT_TRUE(g.ok());
  const std::size_t center = 10 * 20 + 10;
  // Expected values on the 5x5 neighbourhood, row-major from dr = -2.
  const int expected[5][5] = {{0, 0, 1, 0, 0},
                              {0, 1, 2, 1, 0},
                              {1, 2, 4, 2, 1},
                              {0, 1, 2, 1, 0},
                              {0, 0, 1, 0, 0}};
  for (int dr = -2; dr <= 2; ++dr) {
    for (int dc = -2; dc <= 2; ++dc) {
      const std::size_t w = (10 + dr) * 20 + (10 + dc);
      EXPECT_EQ((*g)(w, center), expected[dr + 2][dc + 2]) << dr << "," << dc;
    }
  }
}

TEST(DiamondGainTest, InteriorColumnSumIsTwenty) {
  GridScenarioConfig c;
  auto g = DiamondGain(c);
  ASSERT_TRUE(g.ok());
  for (std::size_t r = 2; r < 18; ++r) {
    for (std::size_t col = 2; col < 18; ++col) {
      const std::size_t x = r * 20 + col;
      double s = 0.0;
      for (std::size_t w = 0; w < 400; ++w) s += (*g)(w, x);
      EXPECT_EQ(s, 20.0);
    }
  }
  EXPECT_EQ((*g)(0, 0), 4.0);
}

TEST(GridMechanismTest, StochasticAndLimits) {
  GridScenarioConfig c;
  c.rows = c.cols = 5;
  auto ch = GridGeometricMechanism(c, 1.0);
  ASSERT_TRUE(ch.ok());
  ExpectRowStochastic(*ch);

  auto sharp = GridGeometricMechanism(c, 60.0);
  ASSERT_TRUE(sharp.ok());
  for (std::size_t x = 0; x < 25; ++x) EXPECT_NEAR((*sharp)(x, x), 1.0, 1e-20 + 1e-15);

  auto flat = GridGeometricMechanism(c, 1e-12);
  auto g = DiamondGain(c);
  ASSERT_TRUE(flat.ok() && g.ok());
  const Prior pi = SyntheticLocationPrior(c);
  EXPECT_NEAR(*PosteriorVulnerability(pi, *flat, *g), *PriorVulnerability(pi, *g),
              1e-9);
  EXPECT_FALSE(GridGeometricMechanism(c, 0.0).ok());
}

TEST(GridMechanismTest, SmallGridsMatchEnumerationOracle) {
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{2, 2}, {1, 5}, {5, 1}}) {
    GridScenarioConfig c;
    c.rows = rows;
    c.cols = cols;
    auto ch = GridGeometricMechanism(c, 1.0);
    auto g = DiamondGain(c);
    ASSERT_TRUE(ch.ok() && g.ok());
    const Prior pi = SyntheticLocationPrior(c);
    auto fast = PosteriorVulnerability(pi, *ch, *g);
    auto slow = EnumerateStrategiesVulnerability(pi, *ch, *g);
    ASSERT_TRUE(fast.ok() && slow.ok()) << slow.status();
    EXPECT_NEAR(*fast, *slow, 1e-12);
  }
}

TEST(CheckinIngestTest, PointMassAndRegionCount) {
  GridScenarioConfig c;
  std::ostringstream file;
  file << "0\t2010-10-19T23:55:27Z\t37.755\t-122.440\t22847\n";
  file << "1\t2010-10-18T22:17:43Z\t37.7549\t-122.4401\t420315\n";
  file << "2\t2010-10-17T23:42:03Z\t40.0\t-100.0\t1\n";
  std::istringstream in(file.str());
  auto r = IngestCheckins(in, c);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->records, 3u);
  EXPECT_EQ(r->in_region, 2u);
  const auto cell = LocateCell(c, 37.755, -122.440);
  ASSERT_TRUE(cell.has_value());
  // The center is a grid corner, so it belongs to the lower-index cell.
  EXPECT_EQ(*cell, 9u * 20u + 9u);
  EXPECT_DOUBLE_EQ(r->prior[*cell], 1.0);
}

TEST(CheckinIngestTest, BoundaryRuleAndEdges) {
  GridScenarioConfig c;
  c.rows = c.cols = 2;
  c.center_lat = 0.0;
  c.center_lon = 0.0;
  const double deg = 250.0 / (6371008.8 * std::numbers::pi / 180.0);
  // South-west corner, the interior boundary, and the north-east corner.
  EXPECT_EQ(LocateCell(c, -deg, -deg), 0u);
  EXPECT_EQ(LocateCell(c, 0.0, 0.0), 0u);
  EXPECT_EQ(LocateCell(c, deg, deg), 3u);
  EXPECT_EQ(LocateCell(c, -0.5 * deg, 0.5 * deg), 1u);
  EXPECT_EQ(LocateCell(c, 0.5 * deg, -0.5 * deg), 2u);
  EXPECT_FALSE(LocateCell(c, 1.01 * deg, 0.0).has_value());
}

TEST(CheckinIngestTest, ColumnsAndErrors) {
  GridScenarioConfig c;
  std::istringstream swapped("-122.440 37.755\n");
  auto r = IngestCheckins(swapped, c, {.latitude = 1, .longitude = 0});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->in_region, 1u);

  std::istringstream outside("0 t 10.0 10.0 1\n");
  EXPECT_FALSE(IngestCheckins(outside, c).ok());
  std::istringstream bad("0 t abc 10.0 1\n");
  EXPECT_FALSE(IngestCheckins(bad, c).ok());
  EXPECT_FALSE(IngestCheckinFile("/nonexistent/checkins.txt", c).ok());
}

TEST(LocationScenarioTest, SamplesAreGridCoordinates) {
  GridScenarioConfig c;
  auto s = LocationScenario(c);
  ASSERT_TRUE(s.ok()) << s.status();
  ASSERT_TRUE(s->matrix.has_value());
  EXPECT_NEAR(*PosteriorVulnerability(s->prior, *s->matrix, s->gain),
              s->exact_vulnerability, 1e-15);
  EXPECT_GT(s->exact_vulnerability, *PriorVulnerability(s->prior, s->gain));
  Rng rng(3, 4);
  for (int i = 0; i < 200; ++i) {
    const Observable y = s->channel->Sample(210, rng);
    ASSERT_EQ(y.dim(), 2u);
    EXPECT_LT(static_cast<std::size_t>(y[0]), c.rows);
    EXPECT_LT(static_cast<std::size_t>(y[1]), c.cols);
  }
}

// --- differential privacy ---

TEST(DpScenarioTest, GainFollowsRemovedLabel) {
  DpScenarioConfig c;
  auto g = DpGain(c);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(g->matrix(), (Matrix{{2, 0}, {0, 1}}));
  c.removed_label = 1;
  EXPECT_EQ(DpGain(c)->matrix(), Matrix::Identity(2));
  c.removed_label = 5;
  EXPECT_FALSE(DpGain(c).ok());
  c.removed_label = 4;
  c.counts[4] = 0;
  EXPECT_FALSE(DpGain(c).ok());
}

TEST(DpScenarioTest, TruncationRadiusBoundsTail) {
  for (double nu : {0.1, 1.0, 3.0}) {
    const std::int64_t r = DpTruncationRadius(nu, 1e-12);
    auto tail = [nu](std::int64_t radius) {
      return 2.0 * std::exp(-nu * radius) / (std::exp(nu) + 1.0);
    };
    EXPECT_LT(tail(r), 1e-12);
    EXPECT_GE(tail(r - 1), 1e-12 * (1 - 1e-9));
  }
  EXPECT_EQ(DpTruncationRadius(kInf, 1e-12), 0);
}

TEST(DpScenarioTest, NoiselessValueIsExpectedDiagonalGain) {
  DpScenarioConfig c;
  c.nu = kInf;
  auto s = DpScenario(c);
  ASSERT_TRUE(s.ok());
  EXPECT_DOUBLE_EQ(s->exact_vulnerability, 0.5 * 2.0 + 0.5 * 1.0);
}

TEST(DpScenarioTest, ExactAgreesWithMatrixOracleAndMonteCarlo) {
  DpScenarioConfig c;
  auto s = DpScenario(c);
  ASSERT_TRUE(s.ok());
  // Matrix oracle on the differing coordinate over a wide window.
  const int lo = -60, hi = 60;
  Matrix rows(2, hi - lo + 1);
  for (int t = lo; t <= hi; ++t) {
    rows(0, t - lo) = std::tanh(0.5) * std::exp(-std::abs(t));
    rows(1, t - lo) = std::tanh(0.5) * std::exp(-std::abs(t + 1));
  }
  for (std::size_t x = 0; x < 2; ++x) {
    const double total = KahanTotal(rows.row(x));
    for (double& v : rows.row(x)) v /= total;
  }
  auto ch = Channel::Create(s->prior.alphabet(), Alphabet::Indexed(hi - lo + 1), rows);
  ASSERT_TRUE(ch.ok());
  EXPECT_NEAR(*PosteriorVulnerability(s->prior, *ch, s->gain),
              s->exact_vulnerability, 1e-12);

  auto mc = DpMonteCarloVulnerability(c, s->prior, s->gain, 1'000'000, 11);
  ASSERT_TRUE(mc.ok());
  EXPECT_NEAR(mc->mean, s->exact_vulnerability, 3.0 * mc->standard_error);
}

TEST(DpScenarioTest, ObservableShapeAndExpansion) {
  DpScenarioConfig c;
  auto s = DpScenario(c);
  ASSERT_TRUE(s.ok());
  auto train = SampleJoint(s->prior, *s->channel, 4000, 5, 6);
  ASSERT_TRUE(train.ok());
  std::size_t full = 0;
  for (const auto& p : train->pairs()) {
    EXPECT_EQ(p.observable.dim(), 5u);
    full += p.secret == 0;
  }
  auto d = DataPreprocess(*train, s->gain);
  ASSERT_TRUE(d.ok());
  // Each "full" sample is replicated twice, each "minus" sample once.
  EXPECT_EQ(d->total_weight(), 2 * full + (4000 - full));
}

TEST(DpScenarioTest, SeverityHistogram) {
  std::istringstream csv(
      "63.0,1.0,1.0,145.0,233.0,1.0,2.0,150.0,0.0,2.3,3.0,0.0,6.0,0\n"
      "67.0,1.0,4.0,160.0,286.0,0.0,2.0,108.0,1.0,1.5,2.0,3.0,3.0,2\n"
      "67.0,1.0,4.0,120.0,229.0,0.0,2.0,129.0,1.0,2.6,2.0,2.0,7.0,1\n"
      "38.0,1.0,4.0,138.0,175.0,0.0,0.0,173.0,0.0,0.0,1.0,?,3.0,0\n"
      "\n");
  auto h = ReadSeverityHistogram(csv, 13);
  ASSERT_TRUE(h.ok()) << h.status();
  EXPECT_EQ(*h, (LabelCounts{2, 1, 1, 0, 0}));

  std::istringstream bad("1,2,7\n");
  EXPECT_FALSE(ReadSeverityHistogram(bad, 2).ok());
  std::istringstream short_line("1,2\n");
  EXPECT_FALSE(ReadSeverityHistogram(short_line, 2).ok());
}

// --- password checker ---

TEST(PasswordScenarioTest, ClassChannelShape) {
  PasswordScenarioConfig c;
  auto rc = PasswordClassChannel(c);
  ASSERT_TRUE(rc.ok()) << rc.status();
  EXPECT_EQ(rc->input().size(), 2u);
  EXPECT_EQ(rc->output().size(), 128u);
  ExpectRowStochastic(*rc);
  EXPECT_EQ(rc->output().label(0), "1");
}

TEST(PasswordScenarioTest, NoiselessChecksSeparateClasses) {
  PasswordScenarioConfig c;
  c.nu = kInf;
  auto s = PasswordScenario(c);
  ASSERT_TRUE(s.ok());
  EXPECT_DOUBLE_EQ(s->exact_vulnerability, 1.0);
  Rng rng(1, 2);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t cls = i % 2;
    const auto o = s->channel->Sample(cls, rng)[0];
    EXPECT_GE(o, 7);
    EXPECT_EQ(o == 7, cls == kPasswordDisagree);
  }
  auto rc = PasswordClassChannel(c);
  EXPECT_DOUBLE_EQ((*rc)(kPasswordAgree, 7), 0.5);        // fail at bit 8
  EXPECT_DOUBLE_EQ((*rc)(kPasswordAgree, 127), std::ldexp(1.0, -120));
}

TEST(PasswordScenarioTest, ExactValueIsHalfSumOfRowMaxima) {
  PasswordScenarioConfig c;
  auto rc = PasswordClassChannel(c);
  auto v = PasswordExactVulnerability(c);
  ASSERT_TRUE(rc.ok() && v.ok());
  double expected = 0.0;
  for (std::size_t o = 0; o < 128; ++o) expected += 0.5 * std::max((*rc)(0, o), (*rc)(1, o));
  EXPECT_NEAR(*v, expected, 1e-12);
  EXPECT_GT(*v, 0.5);
  EXPECT_LT(*v, 1.0);
}

TEST(PasswordScenarioTest, SamplerMatchesAnalyticRows) {
  PasswordScenarioConfig c;
  auto s = PasswordScenario(c);
  ASSERT_TRUE(s.ok());
  Rng rng(9, 10);
  constexpr int kDraws = 100000;
  for (std::size_t cls = 0; cls < 2; ++cls) {
    std::vector<double> freq(128, 0.0);
    for (int i = 0; i < kDraws; ++i) freq[s->channel->Sample(cls, rng)[0] - 1] += 1.0;
    double tv = 0.0;
    for (std::size_t o = 0; o < 128; ++o) tv += std::abs(freq[o] / kDraws - (*s->matrix)(cls, o));
    EXPECT_LT(tv / 2.0, 0.02);
  }
}

TEST(PasswordScenarioTest, DataAndChannelPathsCoincide) {
  PasswordScenarioConfig c;
  auto s = PasswordScenario(c);
  auto d = PasswordPreprocess(c);
  ASSERT_TRUE(s.ok() && d.ok());
  EXPECT_DOUBLE_EQ(d->beta, 1.0);
  auto train = SampleJoint(s->prior, *s->channel, 100000, 21, 1);
  ASSERT_TRUE(train.ok());
  auto data = DataPreprocess(*train, s->gain);
  auto channel = SampleChannelPreprocessed(*d, *s->channel, 100000, 21, 2);
  ASSERT_TRUE(data.ok() && channel.ok());
  auto tv = TotalVariation(*data, *channel);
  ASSERT_TRUE(tv.ok());
  EXPECT_LT(*tv, 0.02);
}

TEST(PasswordScenarioTest, RejectsInvalidConfig) {
  PasswordScenarioConfig c;
  c.target_bit = 9;
  EXPECT_FALSE(PasswordScenario(c).ok());
  c = {};
  c.nu = -1.0;
  EXPECT_FALSE(PasswordScenario(c).ok());
  c = {};
  c.total_bits = 5;
  EXPECT_FALSE(PasswordScenario(c).ok());
}

}  // namespace
}  // namespace gleak
