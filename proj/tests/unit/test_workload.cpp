#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "trace_synth.hpp"
#include "vecs/errors.hpp"
#include "vecs/model.hpp"
#include "vecs/workload.hpp"

using namespace vecs;

namespace {

GeneratorParams small(std::int64_t n, std::uint64_t seed) {
  GeneratorParams gp;
  gp.n_tasks = n;
  gp.n_bs = 5;
  gp.seed = seed;
  return gp;
}

std::string fixture(const std::string& name) { return std::string(VECS_TEST_FIXTURE_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScalingParams fixture_scaling() {
  ScalingParams sp;
  sp.n_tasks = 10;
  sp.n_bs = 2;
  sp.t_max = 100;
  sp.grid_size = 10;
  sp.cfg.grid_size = 10;
  return sp;
}

}  // namespace

TEST(Ratio, ParseAndCount) {
  const HardSoftRatio r = parse_ratio("2:1");
  EXPECT_EQ(r.hard, 2);
  EXPECT_EQ(r.soft, 1);
  EXPECT_EQ(to_string(r), "2:1");
  EXPECT_EQ(hard_count(4, parse_ratio("1:1")), 2);
  EXPECT_EQ(hard_count(5, parse_ratio("1:1")), 3);
  EXPECT_EQ(hard_count(500, parse_ratio("1:3")), 125);
  EXPECT_THROW(parse_ratio("2"), ConfigError);
  EXPECT_THROW(parse_ratio("0:1"), ConfigError);
  EXPECT_THROW(parse_ratio("a:b"), ConfigError);
}

TEST(Generator, ExactPartitionExample) {
  GeneratorParams gp = small(4, 3);
  const Scenario s = generate_synthetic(gp);
  const auto hard = std::count_if(s.tasks.begin(), s.tasks.end(), [](const Task& t) { return t.is_hard(); });
  EXPECT_EQ(hard, 2);
}

TEST(Generator, RatioExactnessProperty) {
  for (const char* rho : {"1:3", "1:1", "2:1", "3:1"}) {
    for (std::int64_t n = 1; n <= 60; n += 7) {
      GeneratorParams gp = small(n, static_cast<std::uint64_t>(n));
      gp.ratio = parse_ratio(rho);
      const Scenario s = generate_synthetic(gp);
      const auto hard = std::count_if(s.tasks.begin(), s.tasks.end(), [](const Task& t) { return t.is_hard(); });
      const double h = static_cast<double>(gp.ratio.hard);
      const double want = std::floor(static_cast<double>(n) * h / (h + static_cast<double>(gp.ratio.soft)) + 0.5);
      EXPECT_EQ(static_cast<double>(hard), want) << rho << " n=" << n;
    }
  }
}

TEST(Generator, SlackBandMembershipProperty) {
  for (SlackTarget target : {SlackTarget::kTight, SlackTarget::kNormal, SlackTarget::kLoose}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      GeneratorParams gp = small(200, seed);
      gp.slack = target;
      const Scenario s = generate_synthetic(gp);
      for (const auto& t : s.tasks) {
        const SlackClass want = target == SlackTarget::kTight    ? SlackClass::kTight
                                : target == SlackTarget::kNormal ? SlackClass::kNormal
                                                                 : SlackClass::kLoose;
        ASSERT_EQ(slack_class(t), want) << "task " << t.id << " mu=" << slack(t);
        ASSERT_TRUE(is_valid(t));
        ASSERT_GE(t.deadline, (t.arrival / gp.cfg.t_beta) * gp.cfg.t_beta + gp.cfg.t_beta);
      }
    }
  }
}

TEST(Generator, LooseRequestAboveThree) {
  GeneratorParams gp = small(100, 8);
  gp.slack = SlackTarget::kLoose;
  for (const auto& t : generate_synthetic(gp).tasks) EXPECT_GT(slack(t), 3.0);
}

TEST(Generator, ArrivalsAndLocationsInRange) {
  GeneratorParams gp = small(300, 4);
  const Scenario s = generate_synthetic(gp);
  EXPECT_NO_THROW(s.validate());
  EXPECT_TRUE(std::is_sorted(s.tasks.begin(), s.tasks.end(),
                             [](const Task& a, const Task& b) { return a.arrival < b.arrival; }));
  for (const auto& t : s.tasks) {
    EXPECT_GE(t.arrival, 0);
    EXPECT_LE(t.arrival, gp.arrival_max);
    EXPECT_GE(t.min_processing, gp.p_min);
    EXPECT_LE(t.min_processing, gp.p_max);
  }
  EXPECT_EQ(s.stations.size(), 5u);
}

TEST(Generator, SameSeedSameBytes) {
  GeneratorParams gp = small(250, 42);
  std::stringstream a, b;
  write_scenario(a, generate_synthetic(gp));
  write_scenario(b, generate_synthetic(gp));
  EXPECT_EQ(a.str(), b.str());
  gp.seed = 43;
  std::stringstream c;
  write_scenario(c, generate_synthetic(gp));
  EXPECT_NE(a.str(), c.str());
}

TEST(Generator, UnsatisfiableBandNamesConstraint) {
  GeneratorParams gp = small(100, 1);
  gp.p_min = 1;
  gp.p_max = 1;
  gp.slack = SlackTarget::kTight;
  try {
    generate_synthetic(gp);
    FAIL() << "expected GenerationError";
  } catch (const GenerationError& e) {
    EXPECT_NE(std::string(e.what()).find("t_beta"), std::string::npos);
  }
}

TEST(Generator, InvalidParamsThrow) {
  GeneratorParams gp = small(0, 1);
  EXPECT_THROW(generate_synthetic(gp), ConfigError);
  gp = small(10, 1);
  gp.p_min = 5;
  gp.p_max = 4;
  EXPECT_THROW(generate_synthetic(gp), ConfigError);
}

TEST(Ingest, GoldenTenRecordFixture) {
  std::ifstream tasks(fixture("ingest10_tasks.csv"));
  std::ifstream locs(fixture("ingest10_locations.csv"));
  IngestReport report;
  const Scenario s = ingest_trace(tasks, locs, fixture_scaling(), &report);

  struct Want {
    Time a, d, p;
  };
  const std::vector<Want> want = {{0, 25, 10}, {5, 45, 15}, {5, 20, 1},  {12, 30, 5}, {20, 50, 20},
                                  {25, 40, 7}, {32, 55, 12}, {40, 70, 15}, {50, 100, 20}};
  ASSERT_EQ(s.tasks.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(s.tasks[i].id, static_cast<TaskId>(i));
    EXPECT_EQ(s.tasks[i].arrival, want[i].a) << i;
    EXPECT_EQ(s.tasks[i].deadline, want[i].d) << i;
    EXPECT_EQ(s.tasks[i].min_processing, want[i].p) << i;
    EXPECT_EQ(s.tasks[i].origin_av, static_cast<AvId>(i % 4));
  }
  EXPECT_EQ(report.processing_clamped, 1);
  EXPECT_EQ(report.invalid_after_scaling, 1);
  EXPECT_EQ(report.malformed_location_records, 1);
  EXPECT_EQ(report.malformed_task_records, 0);

  ASSERT_EQ(s.stations.size(), 2u);
  EXPECT_EQ(s.stations[0].loc, (Point{0, 0}));
  EXPECT_EQ(s.stations[1].loc, (Point{7, 5}));
  const std::vector<Point> avs = {{3, 2}, {2, 10}, {10, 1}, {5, 6}};
  for (const auto& t : s.tasks) {
    EXPECT_EQ(*s.av_location(t.origin_av, t.arrival / 3), avs[static_cast<std::size_t>(t.origin_av)]);
  }
  const auto hard = std::count_if(s.tasks.begin(), s.tasks.end(), [](const Task& t) { return t.is_hard(); });
  EXPECT_EQ(hard, 5);
  EXPECT_NO_THROW(s.validate());
}

TEST(Ingest, EqualScaledArrivalsKeepInputOrder) {
  std::ifstream tasks(fixture("ingest10_tasks.csv"));
  std::ifstream locs(fixture("ingest10_locations.csv"));
  const Scenario s = ingest_trace(tasks, locs, fixture_scaling());
  // Records j2 (p=300) and j3 (p=5) share arrival 1100.
  EXPECT_EQ(s.tasks[1].arrival, s.tasks[2].arrival);
  EXPECT_EQ(s.tasks[1].min_processing, 15);
  EXPECT_EQ(s.tasks[2].min_processing, 1);
}

TEST(Ingest, MalformedRecordsAreCountedAndSkipped) {
  std::istringstream tasks("arrival_ns,processing_ns,deadline_ns\n0,10,100\nx,1,2\n5,,50\n10,-3,90\n20,30,200\n");
  std::istringstream locs("longitude,latitude\n8.5,47.3\n8.6,47.4\n8.7,95\n8.55,47.35\n");
  ScalingParams sp = fixture_scaling();
  sp.n_bs = 1;
  IngestReport report;
  const Scenario s = ingest_trace(tasks, locs, sp, &report);
  EXPECT_EQ(s.tasks.size(), 2u);
  EXPECT_EQ(report.malformed_task_records, 3);
  EXPECT_EQ(report.malformed_location_records, 1);
}

TEST(Ingest, NothingUsableThrows) {
  std::istringstream tasks("arrival_ns,processing_ns,deadline_ns\nx,y,z\n");
  std::istringstream locs("longitude,latitude\n8.5,47.3\n8.6,47.4\n");
  EXPECT_THROW(ingest_trace(tasks, locs, fixture_scaling()), IngestionError);
  std::istringstream no_cols("a,b\n1,2\n");
  std::istringstream locs2("longitude,latitude\n8.5,47.3\n8.6,47.4\n8.7,47.5\n");
  EXPECT_THROW(ingest_trace(no_cols, locs2, fixture_scaling()), IngestionError);
}

TEST(Ingest, ColumnMappingIsConfigurable) {
  std::istringstream tasks("start,dur,due\n0,10,100\n20,30,200\n");
  std::istringstream locs("lng,lt\n8.5,47.3\n8.6,47.4\n8.55,47.35\n");
  ScalingParams sp = fixture_scaling();
  sp.n_bs = 1;
  sp.mapping = {"start", "dur", "due", "lng", "lt"};
  EXPECT_EQ(ingest_trace(tasks, locs, sp).tasks.size(), 2u);
}

TEST(Ingest, ScalingPreservesArrivalAndDistanceOrder) {
  const std::string dir = std::string(VECS_TEST_DATA_DIR) + "/sample_traces/";
  std::ifstream tasks(dir + "task_events.csv");
  std::ifstream locs(dir + "locations.csv");
  ScalingParams sp;
  sp.n_tasks = 1000;
  sp.n_bs = 100;
  sp.grid_size = 1000;
  sp.cfg.grid_size = 1000;
  IngestReport report;
  const Scenario s = ingest_trace(tasks, locs, sp, &report);
  EXPECT_EQ(report.malformed_task_records, 0);
  EXPECT_TRUE(std::is_sorted(s.tasks.begin(), s.tasks.end(),
                             [](const Task& a, const Task& b) { return a.arrival < b.arrival; }));

  // Pairwise station distances keep their order up to one grid cell of rounding.
  std::ifstream raw(dir + "locations.csv");
  std::string line;
  std::getline(raw, line);
  std::vector<PlanarPoint> planar;
  std::vector<std::pair<double, double>> ll;
  while (std::getline(raw, line)) {
    std::stringstream ls(line);
    std::string id, lon, lat;
    std::getline(ls, id, ',');
    std::getline(ls, lon, ',');
    std::getline(ls, lat, ',');
    ll.emplace_back(std::stod(lon), std::stod(lat));
  }
  double lon0 = 0, lat0 = 0;
  for (auto [lo, la] : ll) {
    lon0 += lo;
    lat0 += la;
  }
  lon0 /= static_cast<double>(ll.size());
  lat0 /= static_cast<double>(ll.size());
  for (std::size_t j = 0; j < 30; ++j) planar.push_back(project_equirectangular(ll[j].first, ll[j].second, lon0, lat0));
  double cell = 0.0;
  {
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (auto [lo, la] : ll) {
      const PlanarPoint p = project_equirectangular(lo, la, lon0, lat0);
      lo_x = std::min(lo_x, p.x);
      hi_x = std::max(hi_x, p.x);
      lo_y = std::min(lo_y, p.y);
      hi_y = std::max(hi_y, p.y);
    }
    cell = std::max(hi_x - lo_x, hi_y - lo_y) / 1000.0;
  }
  auto pd = [](PlanarPoint a, PlanarPoint b) { return std::hypot(a.x - b.x, a.y - b.y); };
  for (std::size_t i = 0; i < 30; ++i) {
    for (std::size_t j = i + 1; j < 30; ++j) {
      for (std::size_t k = 0; k < 30; ++k) {
        if (k == i) continue;
        const double raw_a = pd(planar[i], planar[j]);
        const double raw_b = pd(planar[i], planar[k]);
        if (raw_a < raw_b - 2.0 * std::sqrt(2.0) * cell) {
          EXPECT_LE(offload_distance(s.stations[i].loc, s.stations[j].loc),
                    offload_distance(s.stations[i].loc, s.stations[k].loc));
        }
      }
    }
  }
}

TEST(Ingest, SlackRederivationLandsInBand) {
  const std::string dir = std::string(VECS_TEST_DATA_DIR) + "/sample_traces/";
  std::ifstream tasks(dir + "task_events.csv");
  std::ifstream locs(dir + "locations.csv");
  ScalingParams sp;
  sp.slack = SlackTarget::kTight;
  const Scenario s = ingest_trace(tasks, locs, sp);
  EXPECT_GT(s.tasks.size(), 400u);
  for (const auto& t : s.tasks) EXPECT_EQ(slack_class(t), SlackClass::kTight);
}

TEST(SampleTraces, MatchTheSynthesizer) {
  const std::string dir = std::string(VECS_TEST_DATA_DIR) + "/sample_traces/";
  vecs::testing::TraceSynthParams p;
  std::stringstream t, l;
  vecs::testing::write_task_trace(t, p);
  vecs::testing::write_location_trace(l, p);
  EXPECT_EQ(slurp(dir + "task_events.csv"), t.str());
  EXPECT_EQ(slurp(dir + "locations.csv"), l.str());
}

TEST(Projection, CentroidMapsToOrigin) {
  const PlanarPoint p = project_equirectangular(8.5, 47.3, 8.5, 47.3);
  EXPECT_DOUBLE_EQ(p.x, 0.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);
  const PlanarPoint q = project_equirectangular(8.5, 48.3, 8.5, 47.3);
  EXPECT_NEAR(q.y, 6371000.0 * std::acos(-1.0) / 180.0, 1e-6);
}
