#include <doctest.h>

#include <set>
#include <vector>

#include "error.hpp"
#include "helpers.hpp"
#include "sampling.hpp"

using namespace ktr;

TEST_CASE("equispaced mask with a centered calibration block has known rows") {
  MaskSpec spec;
  spec.t = 2;
  spec.ny = 24;
  spec.acceleration = 4;
  spec.acs_lines = 8;
  SamplingMask m = make_mask(spec);
  CHECK(m.acs_lo == 8);
  CHECK(m.acs_hi == 15);
  CHECK(m.acceleration == 4);

  std::set<int> want = {0, 4, 8, 12, 16, 20};
  for (int iy = 8; iy <= 15; ++iy)
    want.insert(iy);
  CHECK(want.size() == 12);
  for (int it = 0; it < 2; ++it) {
    int count = 0;
    for (int iy = 0; iy < 24; ++iy) {
      bool sampled = m.line(it, iy) != 0;
      CHECK(sampled == (want.count(iy) > 0));
      count += sampled;
    }
    CHECK(count == 12);
  }
}

TEST_CASE("offset shifts the equispaced comb") {
  MaskSpec spec;
  spec.t = 1;
  spec.ny = 12;
  spec.acceleration = 4;
  spec.acs_lines = 0;
  spec.offset = 3;
  SamplingMask m = make_mask(spec);
  for (int iy = 0; iy < 12; ++iy)
    CHECK((m.line(0, iy) != 0) == (iy % 4 == 3));
  CHECK(m.acs_count() == 0);
}

TEST_CASE("interleaving advances the comb by one line per frame") {
  MaskSpec spec;
  spec.t = 3;
  spec.ny = 12;
  spec.acceleration = 3;
  spec.acs_lines = 0;
  spec.interleaved = true;
  SamplingMask m = make_mask(spec);
  for (int it = 0; it < 3; ++it)
    for (int iy = 0; iy < 12; ++iy)
      CHECK((m.line(it, iy) != 0) == (iy % 3 == it % 3));
}

TEST_CASE("acceleration one samples everything") {
  MaskSpec spec;
  spec.t = 2;
  spec.ny = 6;
  spec.acceleration = 1;
  spec.acs_lines = 0;
  SamplingMask m = make_mask(spec);
  for (std::uint8_t v : m.lines)
    CHECK(v == 1);
}

TEST_CASE("mask construction enforces its preconditions") {
  MaskSpec spec;
  spec.t = 1;
  spec.ny = 8;
  spec.acceleration = 4;
  spec.acs_lines = 2;

  MaskSpec bad = spec;
  bad.acceleration = 0;
  CHECK_THROWS_AS(make_mask(bad), Error);
  bad = spec;
  bad.offset = 4;
  CHECK_THROWS_AS(make_mask(bad), Error);
  bad = spec;
  bad.offset = -1;
  CHECK_THROWS_AS(make_mask(bad), Error);
  bad = spec;
  bad.acs_lines = 9;
  CHECK_THROWS_AS(make_mask(bad), Error);
  bad = spec;
  bad.t = 0;
  CHECK_THROWS_AS(make_mask(bad), Error);
}

TEST_CASE("random specs produce the brute-force union of comb and block") {
  Rng rng(3001);
  for (int trial = 0; trial < 50; ++trial) {
    MaskSpec spec;
    spec.t = 1 + int(rng.uniform() * 6.0);
    spec.ny = 8 + int(rng.uniform() * 56.0);
    spec.acceleration = 1 + int(rng.uniform() * 8.0);
    spec.acs_lines = int(rng.uniform() * 8.0);
    spec.offset = int(rng.uniform() * spec.acceleration);
    spec.interleaved = rng.uniform() < 0.5;
    SamplingMask m = make_mask(spec);
    validate(m);
    int lo = spec.ny / 2 - spec.acs_lines / 2;
    for (int it = 0; it < spec.t; ++it) {
      int shift = spec.interleaved ? it : 0;
      for (int iy = 0; iy < spec.ny; ++iy) {
        bool comb = (iy % spec.acceleration) == ((spec.offset + shift) % spec.acceleration);
        bool acs = spec.acs_lines > 0 && iy >= lo && iy < lo + spec.acs_lines;
        CHECK((m.line(it, iy) != 0) == (comb || acs));
      }
    }
  }
}

TEST_CASE("calibration rows are copied verbatim for every coil and frame") {
  Rng rng(3002);
  MaskSpec spec;
  spec.t = 3;
  spec.ny = 16;
  spec.acceleration = 4;
  spec.acs_lines = 6;
  SamplingMask m = make_mask(spec);
  KSpaceSeries v = th::random_kspace(rng, 2, 3, 16, 7);
  KSpaceSeries acs = extract_acs(v, m);
  CHECK(acs.nc == 2);
  CHECK(acs.t == 3);
  CHECK(acs.ny == 6);
  CHECK(acs.nx == 7);
  for (int c = 0; c < 2; ++c)
    for (int it = 0; it < 3; ++it)
      for (int iy = 0; iy < 6; ++iy)
        for (int ix = 0; ix < 7; ++ix)
          CHECK(acs.at(c, it, iy, ix) == v.at(c, it, m.acs_lo + iy, ix));
}

TEST_CASE("extracting from a mask without a calibration block fails") {
  Rng rng(3003);
  MaskSpec spec;
  spec.t = 1;
  spec.ny = 8;
  spec.acceleration = 2;
  spec.acs_lines = 0;
  SamplingMask m = make_mask(spec);
  KSpaceSeries v = th::random_kspace(rng, 1, 1, 8, 4);
  CHECK_THROWS_AS(extract_acs(v, m), Error);
}
