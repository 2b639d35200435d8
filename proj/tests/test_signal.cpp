#include "mcqbci/error.hpp"
#include "mcqbci/recording_io.hpp"
#include "mcqbci/rng.hpp"
#include "mcqbci/signal.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mcqbci;

namespace {

Recording make_recording(Eigen::Index n, Eigen::Index channels, double fs) {
  Recording r;
  r.sample_rate_hz = fs;
  for (Eigen::Index c = 0; c < channels; ++c) r.channels.push_back("Ch" + std::to_string(c));
  r.samples = Eigen::MatrixXd::Zero(n, channels);
  return r;
}

// Squared magnitude of the prewarped bilinear Butterworth band-pass,
// evaluated analytically.
double analytic_gain_sq(double f, double low, double high, double fs, int order) {
  const double w = std::tan(std::numbers::pi * f / fs);
  const double wl = std::tan(std::numbers::pi * low / fs);
  const double wh = std::tan(std::numbers::pi * high / fs);
  const double hp = std::pow(w / wl, 2 * order);
  return hp / (1.0 + hp) / (1.0 + std::pow(w / wh, 2 * order));
}

}  // namespace

TEST_CASE("design_bandpass meets the 0.5-30 Hz order-4 contract at 250 Hz") {
  const auto c = design_bandpass({0.5, 30.0, 4}, 250.0);
  CHECK(c.sections.size() == 4);
  CHECK(std::abs(frequency_response(c, 0.0)) == 0.0);

  const double center = std::abs(frequency_response(c, std::sqrt(0.5 * 30.0)));
  CHECK(center >= 0.95);
  CHECK(center <= 1.0);

  const double atten_db = -20.0 * std::log10(std::abs(frequency_response(c, 60.0)));
  CHECK(atten_db >= 20.0);
}

TEST_CASE("designed response matches the analytic Butterworth magnitude") {
  for (int order : {2, 4, 6}) {
    const auto c = design_bandpass({0.5, 30.0, order}, 250.0);
    for (double f : {0.1, 0.5, 1.0, 3.87, 10.0, 30.0, 45.0, 60.0, 100.0, 124.0}) {
      const double got = std::norm(frequency_response(c, f));
      const double want = analytic_gain_sq(f, 0.5, 30.0, 250.0, order);
      CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("design_bandpass rejects invalid bands") {
  CHECK_THROWS_AS(design_bandpass({30.0, 0.5, 4}, 250.0), Error);
  CHECK_THROWS_AS(design_bandpass({0.0, 30.0, 4}, 250.0), Error);
  CHECK_THROWS_AS(design_bandpass({0.5, 125.0, 4}, 250.0), Error);
  CHECK_THROWS_AS(design_bandpass({0.5, 30.0, 3}, 250.0), Error);
  CHECK_THROWS_AS(design_bandpass({0.5, 30.0, 0}, 250.0), Error);
  try {
    design_bandpass({0.5, 200.0, 4}, 250.0);
    FAIL("expected InvalidBand");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidBand);
  }
}

TEST_CASE("apply_filter rejects DC and passes zeros") {
  SUBCASE("zero in, zero out") {
    auto r = make_recording(500, 2, 250.0);
    const auto out = apply_filter(design_bandpass({0.5, 30.0, 4}, 250.0), r);
    CHECK(out.samples.cwiseAbs().maxCoeff() == 0.0);
    CHECK(out.band_limit_hz == 30.0);
  }
  SUBCASE("constant 7.0 settles within 2 s at a 2 Hz low cut") {
    auto r = make_recording(250 * 10, 1, 250.0);
    r.samples.setConstant(7.0);
    const auto out = apply_filter(design_bandpass({2.0, 30.0, 4}, 250.0), r);
    CHECK(out.samples.bottomRows(250 * 8).cwiseAbs().maxCoeff() < 1e-3);
  }
  SUBCASE("constant 7.0 settles within 10 s at the 0.5 Hz low cut") {
    auto r = make_recording(250 * 20, 1, 250.0);
    r.samples.setConstant(7.0);
    const auto out = apply_filter(design_bandpass({0.5, 30.0, 4}, 250.0), r);
    CHECK(out.samples.bottomRows(250 * 10).cwiseAbs().maxCoeff() < 1e-3);
  }
}

TEST_CASE("impulse response DFT reproduces the design response") {
  const auto c = design_bandpass({0.5, 30.0, 4}, 250.0);
  const Eigen::Index n = 1 << 16;
  Eigen::VectorXd impulse = Eigen::VectorXd::Zero(n);
  impulse[0] = 1.0;
  const Eigen::VectorXd h = filter_signal(c, impulse);
  CHECK(std::abs(h.tail(1000).cwiseAbs().maxCoeff()) < 1e-14);

  double worst = 0.0;
  for (Eigen::Index k = 0; k <= n / 2; k += 97) {
    std::complex<double> acc(0.0, 0.0);
    for (Eigen::Index t = 0; t < n; ++t) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += h[t] * std::polar(1.0, phase);
    }
    const double f = static_cast<double>(k) * 250.0 / static_cast<double>(n);
    worst = std::max(worst, std::abs(std::abs(acc) - std::abs(frequency_response(c, f))));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("apply_filter is linear and leaves events alone") {
  Rng rng(11);
  auto x = make_recording(1000, 3, 250.0);
  auto y = make_recording(1000, 3, 250.0);
  for (Eigen::Index i = 0; i < x.samples.size(); ++i) {
    x.samples.data()[i] = rng.normal();
    y.samples.data()[i] = 5.0 * rng.normal();
  }
  x.events.push_back({10, "q1", Option::B, true});
  const auto c = design_bandpass({0.5, 30.0, 4}, 250.0);
  const double a = 2.5, b = -0.75;
  auto mix = x;
  mix.samples = a * x.samples + b * y.samples;
  const Eigen::MatrixXd lhs = apply_filter(c, mix).samples;
  const Eigen::MatrixXd rhs = a * apply_filter(c, x).samples + b * apply_filter(c, y).samples;
  CHECK((lhs - rhs).norm() <= 1e-9 * rhs.norm());
  CHECK(apply_filter(c, x).events == x.events);
}

TEST_CASE("apply_filter refuses coefficients for another rate") {
  auto r = make_recording(100, 1, 500.0);
  CHECK_THROWS_AS(apply_filter(design_bandpass({0.5, 30.0, 4}, 250.0), r), Error);
}

TEST_CASE("decimate keeps every k-th sample and remaps onsets") {
  auto r = make_recording(10, 1, 250.0);
  for (Eigen::Index i = 0; i < 10; ++i) r.samples(i, 0) = static_cast<double>(i);
  r.events.push_back({5, "q1", Option::C, std::nullopt});
  r.band_limit_hz = 20.0;

  CHECK(decimate(r, 1) == r);

  const auto d = decimate(r, 4);
  REQUIRE(d.n_samples() == 3);
  CHECK(d.samples(0, 0) == 0.0);
  CHECK(d.samples(1, 0) == 4.0);
  CHECK(d.samples(2, 0) == 8.0);
  CHECK(d.events.front().onset_sample == 1);
  CHECK(d.sample_rate_hz == doctest::Approx(62.5));

  auto long_rec = make_recording(2500, 2, 250.0);
  long_rec.band_limit_hz = 12.0;
  CHECK(decimate(long_rec, 10).sample_rate_hz == 25.0);
}

TEST_CASE("decimate composes multiplicatively") {
  Rng rng(3);
  auto r = make_recording(997, 2, 1000.0);
  for (Eigen::Index i = 0; i < r.samples.size(); ++i) r.samples.data()[i] = rng.normal();
  for (std::int64_t onset : {0, 13, 500, 996}) r.events.push_back({onset, "q", Option::A, std::nullopt});
  r.band_limit_hz = 10.0;
  for (auto [a, b] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{5, 4}, std::pair{1, 7}}) {
    CAPTURE(a);
    CAPTURE(b);
    CHECK(decimate(decimate(r, a), b) == decimate(r, a * b));
  }
}

TEST_CASE("decimate guards against aliasing") {
  auto r = make_recording(100, 1, 250.0);
  try {
    decimate(r, 2);
    FAIL("expected AliasRisk");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::AliasRisk);
  }
  r.band_limit_hz = 30.0;
  CHECK_THROWS_AS(decimate(r, 10), Error);
  CHECK_NOTHROW(decimate(r, 4));
  CHECK_THROWS_AS(decimate(r, 0), Error);
}

TEST_CASE("segment cuts one fixed-length epoch per event") {
  auto r = make_recording(100, 2, 25.0);
  CHECK(segment(r, 0.6).empty());

  for (Eigen::Index i = 0; i < 100; ++i) r.samples.row(i).setConstant(static_cast<double>(i));
  r.events.push_back({40, "q2", Option::D, false});
  r.events.push_back({10, "q1", Option::A, true});
  const auto epochs = segment(r, 0.6);
  REQUIRE(epochs.size() == 2);
  CHECK(epochs[0].data.rows() == 15);
  CHECK(epochs[0].data.cols() == 2);
  CHECK(epochs[0].question_id == "q2");
  CHECK(epochs[0].data(0, 0) == 40.0);
  CHECK(epochs[1].question_id == "q1");
  CHECK(epochs[1].is_target == true);
  CHECK(epochs[1].effective_rate_hz == 25.0);
}

TEST_CASE("segment boundary: window must fit") {
  auto r = make_recording(15, 1, 25.0);
  r.events.push_back({0, "q1", Option::A, std::nullopt});
  CHECK(segment(r, 0.6).size() == 1);
  r.samples.conservativeResize(14, 1);
  try {
    segment(r, 0.6);
    FAIL("expected WindowOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::WindowOutOfRange);
    CHECK(std::string(e.what()).find("q1") != std::string::npos);
  }
}

TEST_CASE("features flatten channel-major") {
  Epoch e;
  e.data.resize(2, 2);
  e.data << 1, 2, 3, 4;
  const auto fv = features(e, false);
  REQUIRE(fv.values.size() == 4);
  CHECK(fv.values[0] == 1.0);
  CHECK(fv.values[1] == 3.0);
  CHECK(fv.values[2] == 2.0);
  CHECK(fv.values[3] == 4.0);

  Epoch wide;
  wide.data.resize(3, 2);
  wide.data << 1, 10, 2, 20, 3, 30;
  const auto w = features(wide, false).values;
  CHECK(w.size() == 6);
  CHECK(w[2] == 3.0);
  CHECK(w[3] == 10.0);
}

TEST_CASE("features standardization") {
  Epoch flat;
  flat.data = Eigen::MatrixXd::Constant(5, 3, 4.2);
  CHECK(features(flat, true).values.cwiseAbs().maxCoeff() == 0.0);

  Rng rng(5);
  Epoch e;
  e.data.resize(15, 4);
  for (Eigen::Index i = 0; i < e.data.size(); ++i) e.data.data()[i] = 3.0 + 2.0 * rng.normal();
  const auto v = features(e, true).values;
  CHECK(v.mean() == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  CHECK(v.squaredNorm() / static_cast<double>(v.size()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("features without standardization is injective") {
  Rng rng(9);
  Epoch a;
  a.data.resize(4, 3);
  for (Eigen::Index i = 0; i < a.data.size(); ++i) a.data.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < a.data.size(); ++i) {
    Epoch b = a;
    b.data.data()[i] += 1e-3;
    CHECK(features(a, false).values != features(b, false).values);
  }
}

TEST_CASE("band_power concentrates a 10 Hz tone in alpha") {
  Epoch e;
  e.effective_rate_hz = 25.0;
  e.data.resize(15, 2);
  for (Eigen::Index t = 0; t < 15; ++t) {
    e.data(t, 0) = std::sin(2.0 * std::numbers::pi * 10.0 * static_cast<double>(t) / 25.0);
    e.data(t, 1) = 3.0 * std::cos(2.0 * std::numbers::pi * 10.0 * static_cast<double>(t) / 25.0 + 0.3);
  }
  const auto alpha = band_power(e, kAlphaLowHz, kAlphaHighHz);
  const auto total = band_power(e, 0.0, 12.5);
  for (Eigen::Index c = 0; c < 2; ++c) {
    CHECK(alpha[c] >= 0.95 * total[c]);
    // Parseval: total periodogram power equals the signal energy.
    CHECK(total[c] == doctest::Approx(e.data.col(c).squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("band_power of silence and of white noise") {
  Epoch zero;
  zero.effective_rate_hz = 25.0;
  zero.data = Eigen::MatrixXd::Zero(15, 3);
  CHECK(band_power(zero, 8.0, 12.0).maxCoeff() == 0.0);

  Rng rng(123);
  double share = 0.0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    Epoch e;
    e.effective_rate_hz = 25.0;
    e.data.resize(15, 1);
    for (Eigen::Index t = 0; t < 15; ++t) e.data(t, 0) = rng.normal();
    share += band_power(e, 8.0, 12.0)[0] / band_power(e, 0.0, 12.5)[0];
  }
  share = 100.0 * share / trials;
  CHECK(std::abs(share - 32.0) <= 10.0);
}

TEST_CASE("band_power validates its band") {
  Epoch e;
  e.effective_rate_hz = 25.0;
  e.data = Eigen::MatrixXd::Zero(10, 1);
  CHECK_THROWS_AS(band_power(e, 12.0, 8.0), Error);
  CHECK_THROWS_AS(band_power(e, -1.0, 8.0), Error);
  CHECK_THROWS_AS(band_power(e, 8.0, 13.0), Error);
}

TEST_CASE("preprocess is deterministic to the bit") {
  Rng rng(77);
  auto r = make_recording(2000, 4, 250.0);
  for (Eigen::Index i = 0; i < r.samples.size(); ++i) r.samples.data()[i] = rng.normal();
  r.events.push_back({100, "q1", Option::A, true});
  const PipelineSpec spec;
  const auto a = preprocess(r, spec);
  const auto b = preprocess(r, spec);
  CHECK(a == b);
  CHECK(a.sample_rate_hz == 25.0);
  CHECK(a.events.front().onset_sample == 10);
}

TEST_CASE("recording JSON round-trip and schema errors") {
  Rng rng(1);
  auto r = make_recording(20, 2, 250.0);
  for (Eigen::Index i = 0; i < r.samples.size(); ++i) r.samples.data()[i] = rng.normal() * 1e-7;
  r.events.push_back({3, "q1", Option::B, true});
  r.events.push_back({7, "q1", Option::C, std::nullopt});
  const auto back = recording_from_json(nlohmann::json::parse(recording_to_json(r).dump()));
  CHECK(back == r);

  const auto sci = nlohmann::json::parse(
      R"({"sample_rate_hz": 2.5e2, "channels": ["Cz"], "samples": [[1e-3], [-2.5E+1]], "events": []})");
  const auto parsed = recording_from_json(sci);
  CHECK(parsed.sample_rate_hz == 250.0);
  CHECK(parsed.samples(1, 0) == -25.0);

  auto bad = recording_to_json(r);
  bad["events"][0]["option"] = "E";
  CHECK_THROWS_AS(recording_from_json(bad), Error);
  bad = recording_to_json(r);
  bad["channels"] = {"Cz", "Cz"};
  CHECK_THROWS_AS(recording_from_json(bad), Error);
  bad = recording_to_json(r);
  bad["events"][0]["onset_sample"] = 20;
  CHECK_THROWS_AS(recording_from_json(bad), Error);
}
