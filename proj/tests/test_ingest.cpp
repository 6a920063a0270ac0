#include <doctest.h>

#include <cmath>

#include "firetke/ingest.hpp"
#include "test_helpers.hpp"

using namespace firetke;
using namespace firetke::ingest;
using firetke::test::TempDir;
using firetke::test::write_text;

TEST_CASE("parse_sonic_csv reads valid rows in file order") {
  TempDir tmp("sonic");
  write_text(tmp.file("s.csv"),
             "t,u,v,w,sonic_T\n"
             "0.0,1.0,2.0,0.5,20.0\n"
             "0.1,1.1,2.1,0.4,20.2\n");
  const auto result = parse_sonic_csv(tmp.file("s.csv"));
  REQUIRE(result.samples.size() == 2);
  CHECK(result.rejected == 0);
  CHECK(result.samples[0].t == 0.0);
  CHECK(result.samples[0].u == 1.0);
  CHECK(result.samples[0].v == 2.0);
  CHECK(result.samples[0].w == 0.5);
  CHECK(result.samples[0].sonic_temp == 20.0);
  CHECK(result.samples[1].t == 0.1);
  CHECK(result.samples[1].sonic_temp == 20.2);
}

TEST_CASE("parse_sonic_csv header-only file yields empty result") {
  TempDir tmp("sonic");
  write_text(tmp.file("s.csv"), "t,u,v,w,sonic_T\n");
  const auto result = parse_sonic_csv(tmp.file("s.csv"));
  CHECK(result.samples.empty());
  CHECK(result.rejected == 0);
}

TEST_CASE("parse_sonic_csv rejects malformed rows but keeps the rest") {
  TempDir tmp("sonic");
  std::string text = "t,u,v,w,sonic_T\n";
  for (int i = 0; i < 10; ++i) {
    if (i == 3 || i == 7)
      text += std::to_string(i) + ".0,bad,2.0,0.5,20.0\n";
    else
      text += std::to_string(i) + ".0,1.0,2.0,0.5,20.0\n";
  }
  write_text(tmp.file("s.csv"), text);
  const auto result = parse_sonic_csv(tmp.file("s.csv"));
  CHECK(result.samples.size() == 8);
  CHECK(result.rejected == 2);
}

TEST_CASE("parse_sonic_csv error paths") {
  TempDir tmp("sonic");
  SUBCASE("missing file") {
    CHECK_THROWS(parse_sonic_csv(tmp.file("nope.csv")));
  }
  SUBCASE("malformed header") {
    write_text(tmp.file("s.csv"), "time,u,v,w,T\n0,1,2,3,4\n");
    CHECK_THROWS(parse_sonic_csv(tmp.file("s.csv")));
  }
  SUBCASE("more than half the rows malformed") {
    write_text(tmp.file("s.csv"),
               "t,u,v,w,sonic_T\n0,x,0,0,0\n0.1,x,0,0,0\n0.2,1,2,3,4\n");
    CHECK_THROWS(parse_sonic_csv(tmp.file("s.csv")));
  }
  SUBCASE("non-finite values are rejected rows") {
    write_text(tmp.file("s.csv"),
               "t,u,v,w,sonic_T\n0,inf,0,0,0\n0.1,1,2,3,4\n0.2,nan,2,3,4\n");
    const auto result = parse_sonic_csv(tmp.file("s.csv"));
    CHECK(result.samples.size() == 1);
    CHECK(result.rejected == 2);
  }
  SUBCASE("negative timestamps are rejected rows") {
    write_text(tmp.file("s.csv"), "t,u,v,w,sonic_T\n-1,1,2,3,4\n0,1,2,3,4\n");
    const auto result = parse_sonic_csv(tmp.file("s.csv"));
    CHECK(result.samples.size() == 1);
    CHECK(result.rejected == 1);
  }
}

TEST_CASE("parse_thermo_csv basics") {
  TempDir tmp("thermo");
  SUBCASE("row echo") {
    write_text(tmp.file("t.csv"),
               "t,T1,T2,T3,T4,T5,T6,T7\n0.0,21,22,23,24,25,26,27\n");
    const auto result = parse_thermo_csv(tmp.file("t.csv"));
    REQUIRE(result.samples.size() == 1);
    for (int i = 0; i < 7; ++i)
      CHECK(result.samples[0].temps[static_cast<std::size_t>(i)] == 21.0 + i);
  }
  SUBCASE("wrong arity row is rejected") {
    write_text(tmp.file("t.csv"),
               "t,T1,T2,T3,T4,T5,T6,T7\n0.0,21,22,23,24,25,26\n"
               "0.1,21,22,23,24,25,26,27\n");
    const auto result = parse_thermo_csv(tmp.file("t.csv"));
    CHECK(result.samples.size() == 1);
    CHECK(result.rejected == 1);
  }
  SUBCASE("100-row fixture parses fully") {
    std::string text = "t,T1,T2,T3,T4,T5,T6,T7\n";
    for (int i = 0; i < 100; ++i)
      text += std::to_string(i) + ".0,21,22,23,24,25,26,27\n";
    write_text(tmp.file("t.csv"), text);
    const auto result = parse_thermo_csv(tmp.file("t.csv"));
    CHECK(result.samples.size() == 100);
    CHECK(result.rejected == 0);
  }
}

namespace {

std::vector<SonicSample> sonic_grid(int n, double t0 = 0.0) {
  std::vector<SonicSample> out;
  for (int i = 0; i < n; ++i)
    out.push_back({t0 + 0.1 * i, 1.0 + i, 2.0, 3.0, 20.0});
  return out;
}

std::vector<ThermoSample> thermo_grid(int n, double t0 = 0.0) {
  std::vector<ThermoSample> out;
  for (int i = 0; i < n; ++i) {
    ThermoSample s;
    s.t = t0 + 0.1 * i;
    for (int j = 0; j < 7; ++j) s.temps[static_cast<std::size_t>(j)] = 20.0 + j + i;
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("align pairs identical grids completely") {
  const auto sonic = sonic_grid(10);
  const auto thermo = thermo_grid(12);
  const auto result = align(sonic, thermo, 0.05);
  CHECK(result.frames.size() == 10);
  CHECK(result.sonic_dropped == 0);
  CHECK(result.thermo_dropped == 2);
  // features carry thermo temps then sonic temperature
  CHECK(result.frames[0].features[0] == 20.0);
  CHECK(result.frames[0].features[7] == 20.0);
  CHECK(result.frames[3].wind[0] == 4.0);
}

TEST_CASE("align tolerates sub-tolerance clock offset") {
  const auto sonic = sonic_grid(10);
  auto thermo = thermo_grid(10);
  for (auto& s : thermo) s.t += 0.04;
  const auto result = align(sonic, thermo, 0.05);
  CHECK(result.frames.size() == 10);
  CHECK(result.sonic_dropped == 0);
  CHECK(result.thermo_dropped == 0);
}

TEST_CASE("align drops everything when offset exceeds tolerance") {
  const auto sonic = sonic_grid(10);
  auto thermo = thermo_grid(10);
  for (auto& s : thermo) s.t += 0.2;
  const auto result = align(sonic, thermo, 0.05);
  CHECK(result.frames.empty());
  CHECK(result.sonic_dropped == 10);
  CHECK(result.thermo_dropped == 10);
}

TEST_CASE("align rejects unsorted input") {
  auto sonic = sonic_grid(5);
  std::swap(sonic[1], sonic[3]);
  CHECK_THROWS(align(sonic, thermo_grid(5), 0.05));
  CHECK_THROWS(align(sonic_grid(5), thermo_grid(5), -0.1));
}

TEST_CASE("align is idempotent on already-aligned streams") {
  const auto first = align(sonic_grid(50), thermo_grid(50), 0.05);
  // re-extract the two streams from the frames and align again
  std::vector<SonicSample> sonic;
  std::vector<ThermoSample> thermo;
  for (const auto& f : first.frames) {
    sonic.push_back({f.t, f.wind[0], f.wind[1], f.wind[2], f.features[7]});
    ThermoSample s;
    s.t = f.t;
    for (int j = 0; j < 7; ++j) s.temps[static_cast<std::size_t>(j)] = f.features[static_cast<std::size_t>(j)];
    thermo.push_back(s);
  }
  const auto second = align(sonic, thermo, 0.05);
  REQUIRE(second.frames.size() == first.frames.size());
  for (std::size_t i = 0; i < first.frames.size(); ++i) {
    CHECK(second.frames[i].t == first.frames[i].t);
    CHECK(second.frames[i].features == first.frames[i].features);
    CHECK(second.frames[i].wind == first.frames[i].wind);
  }
}

TEST_CASE("segment_phases follows the closed burn interval") {
  std::vector<AlignedFrame> frames;
  for (int i = 0; i < 5; ++i) {
    AlignedFrame f;
    f.t = static_cast<double>(i);
    frames.push_back(f);
  }
  SUBCASE("window in the middle") {
    const auto out = segment_phases(frames, 1.5, 3.5);
    CHECK(out[0].phase == BurnPhase::PreBurn);
    CHECK(out[1].phase == BurnPhase::PreBurn);
    CHECK(out[2].phase == BurnPhase::Burn);
    CHECK(out[3].phase == BurnPhase::Burn);
    CHECK(out[4].phase == BurnPhase::PostBurn);
  }
  SUBCASE("boundary timestamps are burn") {
    const auto out = segment_phases(frames, 2.0, 4.0);
    CHECK(out[2].phase == BurnPhase::Burn);
    CHECK(out[4].phase == BurnPhase::Burn);
  }
  SUBCASE("all before the window") {
    const auto out = segment_phases(frames, 100.0, 200.0);
    for (const auto& f : out) CHECK(f.phase == BurnPhase::PreBurn);
  }
  SUBCASE("invalid window") {
    CHECK_THROWS(segment_phases(frames, 3.0, 3.0));
    CHECK_THROWS(segment_phases(frames, 4.0, 3.0));
  }
  SUBCASE("phases partition the frames") {
    const auto out = segment_phases(frames, 1.5, 3.5);
    const auto pre = frames_in_phase(out, BurnPhase::PreBurn);
    const auto burn = frames_in_phase(out, BurnPhase::Burn);
    const auto post = frames_in_phase(out, BurnPhase::PostBurn);
    CHECK(pre.size() + burn.size() + post.size() == out.size());
  }
}

TEST_CASE("rebase_to_common_start uses the earlier stream origin") {
  auto sonic = sonic_grid(3, 1000.0);
  auto thermo = thermo_grid(3, 999.8);
  const double origin = rebase_to_common_start(sonic, thermo);
  CHECK(origin == 999.8);
  CHECK(thermo[0].t == 0.0);
  CHECK(sonic[0].t == doctest::Approx(0.2));
}

TEST_CASE("aligned CSV round-trip is bit-exact") {
  TempDir tmp("aligned");
  Rng rng(7);
  std::vector<AlignedFrame> frames;
  for (int i = 0; i < 25; ++i) {
    AlignedFrame f;
    f.t = 0.1 * i;
    for (auto& v : f.features) v = rng.uniform(-300.0, 900.0);
    for (auto& v : f.wind) v = rng.uniform(-30.0, 30.0);
    f.phase = i < 5 ? BurnPhase::PreBurn
                    : (i < 20 ? BurnPhase::Burn : BurnPhase::PostBurn);
    frames.push_back(f);
  }
  write_aligned_csv(tmp.file("a.csv"), frames);
  const auto back = read_aligned_csv(tmp.file("a.csv"));
  REQUIRE(back.size() == frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CHECK(back[i].t == frames[i].t);
    CHECK(back[i].features == frames[i].features);
    CHECK(back[i].wind == frames[i].wind);
    CHECK(back[i].phase == frames[i].phase);
  }
}

TEST_CASE("sonic and thermo CSV round-trips are bit-exact") {
  TempDir tmp("roundtrip");
  Rng rng(11);
  std::vector<SonicSample> sonic;
  std::vector<ThermoSample> thermo;
  for (int i = 0; i < 40; ++i) {
    sonic.push_back({0.1 * i, rng.uniform(-50, 50), rng.normal(), rng.normal(),
                     rng.uniform(-20, 900)});
    ThermoSample s;
    s.t = 0.1 * i;
    for (auto& temp : s.temps) temp = rng.uniform(10.0, 1200.0);
    thermo.push_back(s);
  }
  write_sonic_csv(tmp.file("s.csv"), sonic);
  write_thermo_csv(tmp.file("t.csv"), thermo);
  const auto sonic_back = parse_sonic_csv(tmp.file("s.csv"));
  const auto thermo_back = parse_thermo_csv(tmp.file("t.csv"));
  REQUIRE(sonic_back.samples.size() == sonic.size());
  REQUIRE(thermo_back.samples.size() == thermo.size());
  CHECK(sonic_back.rejected == 0);
  CHECK(thermo_back.rejected == 0);
  for (std::size_t i = 0; i < sonic.size(); ++i) {
    CHECK(sonic_back.samples[i].t == sonic[i].t);
    CHECK(sonic_back.samples[i].u == sonic[i].u);
    CHECK(sonic_back.samples[i].v == sonic[i].v);
    CHECK(sonic_back.samples[i].w == sonic[i].w);
    CHECK(sonic_back.samples[i].sonic_temp == sonic[i].sonic_temp);
  }
  for (std::size_t i = 0; i < thermo.size(); ++i)
    CHECK(thermo_back.samples[i].temps == thermo[i].temps);
}
