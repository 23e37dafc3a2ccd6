#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "blpp/field.hpp"
#include "blpp/rng.hpp"

using namespace blpp;

namespace {

FieldSpec small_spec(std::uint64_t seed) {
  FieldSpec spec;
  spec.level_min = 0;
  spec.level_max = 9;
  spec.t_min = -2.0;
  spec.t_max = 6.0;
  spec.delta = 0.1;
  spec.seed = seed;
  return spec;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// One-sample Kolmogorov-Smirnov statistic against the standard normal.
double ks_statistic(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = std_normal_cdf(xs[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

std::vector<double> normalized_increments(const BrownianField& field, int max_count) {
  std::vector<double> xs;
  const double root_delta = std::sqrt(field.spec.delta);
  for (int k = field.spec.level_min; k <= field.spec.level_max; ++k) {
    const auto row = field.row(k);
    for (int i = 0; i + 1 < field.spec.nodes(); ++i) {
      xs.push_back((row(i + 1) - row(i)) / root_delta);
      if (static_cast<int>(xs.size()) >= max_count) return xs;
    }
  }
  return xs;
}

}  // namespace

TEST_CASE("field generation is a pure function of the spec") {
  const FieldSpec spec = small_spec(7);
  const BrownianField a = generate_field(spec);
  const BrownianField b = generate_field(spec);
  CHECK((a.values == b.values).all());
  FieldSpec other = spec;
  other.seed = 8;
  const BrownianField c = generate_field(other);
  CHECK_FALSE((a.values == c.values).all());
}

TEST_CASE("every level is anchored at zero") {
  const BrownianField field = generate_field(small_spec(3));
  const int z = field.spec.zero_index();
  for (int k = 0; k <= 9; ++k) CHECK(field.at(k, z) == 0.0);
}

TEST_CASE("increment variance sits in the chi-square band") {
  FieldSpec spec = small_spec(11);
  spec.level_max = 19;
  spec.t_min = -10.0;
  spec.t_max = 490.0;  // 20 x 5000 increments
  const BrownianField field = generate_field(spec);
  const auto xs = normalized_increments(field, 100000);
  REQUIRE(xs.size() == 100000);
  double sum2 = 0.0;
  for (double x : xs) sum2 += x * x;
  const double variance = sum2 / static_cast<double>(xs.size()) * spec.delta;
  CHECK(variance > 0.95 * spec.delta);
  CHECK(variance < 1.05 * spec.delta);
}

TEST_CASE("Kolmogorov-Smirnov test of normalized increments") {
  // Critical value at level 0.01 for n = 1e5; one repeat allowed on failure.
  const double critical = 1.628 / std::sqrt(100000.0);
  bool passed = false;
  for (std::uint64_t seed : {41ULL, 42ULL}) {
    FieldSpec spec = small_spec(seed);
    spec.level_max = 19;
    spec.t_min = -10.0;
    spec.t_max = 490.0;
    const auto xs = normalized_increments(generate_field(spec), 100000);
    if (ks_statistic(xs) < critical) {
      passed = true;
      break;
    }
  }
  CHECK(passed);
}

TEST_CASE("cross-level increments are uncorrelated") {
  FieldSpec spec = small_spec(13);
  spec.level_max = 1;
  spec.t_min = -10.0;
  spec.t_max = 9990.0;
  const BrownianField field = generate_field(spec);
  const auto r0 = field.row(0);
  const auto r1 = field.row(1);
  double sxy = 0, sxx = 0, syy = 0;
  const int n = std::min(100000, spec.nodes() - 1);
  for (int i = 0; i < n; ++i) {
    const double x = r0(i + 1) - r0(i);
    const double y = r1(i + 1) - r1(i);
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double rho = sxy / std::sqrt(sxx * syy);
  CHECK(std::abs(rho) < 0.02);
}

TEST_CASE("invalid specs are rejected with a diagnostic") {
  FieldSpec spec = small_spec(1);
  spec.delta = -0.1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = small_spec(1);
  spec.t_max = 6.05;  // grid does not close
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = small_spec(1);
  spec.t_min = -2.05;  // grid closes but zero is not a node
  spec.t_max = 5.95;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("injected fields wrap arrays verbatim") {
  const FieldSpec spec = small_spec(5);
  LevelMatrix zero = LevelMatrix::Zero(spec.levels(), spec.nodes());
  const BrownianField field = inject_field(spec, zero);
  CHECK(field.at(4, 10) == 0.0);

  LevelMatrix ramp(spec.levels(), spec.nodes());
  for (int k = 0; k < spec.levels(); ++k)
    for (int i = 0; i < spec.nodes(); ++i) ramp(k, i) = spec.time_at(i);
  const BrownianField linear = inject_field(spec, ramp);
  CHECK(linear.at(2, 0) == doctest::Approx(spec.t_min));

  LevelMatrix bad(spec.levels(), spec.nodes() - 1);
  CHECK_THROWS_AS(inject_field(spec, bad), std::invalid_argument);
}

TEST_CASE("save/load round-trip is bit exact") {
  const BrownianField field = generate_field(small_spec(99));
  const std::string path = "test_field.blpp";
  save_field(field, path);
  const BrownianField loaded = load_field(path);
  CHECK(loaded.spec.seed == field.spec.seed);
  CHECK((loaded.values == field.values).all());

  SUBCASE("truncated file fails the checksum") {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    std::fseek(f, 0, SEEK_END);
    const long size = std::ftell(f);
    std::fseek(f, 0, SEEK_SET);
    std::vector<unsigned char> buf(static_cast<std::size_t>(size));
    REQUIRE(std::fread(buf.data(), 1, buf.size(), f) == buf.size());
    std::fclose(f);
    f = std::fopen(path.c_str(), "wb");
    std::fwrite(buf.data(), 1, buf.size() - 12, f);
    std::fclose(f);
    CHECK_THROWS_WITH_AS(load_field(path), doctest::Contains("checksum"), std::runtime_error);
  }

  SUBCASE("foreign version tag is reported as such") {
    save_field(field, path);
    std::FILE* f = std::fopen(path.c_str(), "rb+");
    std::fseek(f, 4, SEEK_SET);
    std::fputc('9', f);
    std::fclose(f);
    CHECK_THROWS_WITH_AS(load_field(path), doctest::Contains("version"), std::runtime_error);
  }
  std::remove(path.c_str());
}

TEST_CASE("counter rng is order independent") {
  CHECK(gaussian(5, 3, 100) == gaussian(5, 3, 100));
  CHECK(gaussian(5, 3, 100) != gaussian(5, 4, 100));
  CHECK(gaussian(5, 3, 100) != gaussian(6, 3, 100));
}
