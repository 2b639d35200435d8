#include "mcqbci/robustness.hpp"

#include "mcqbci/error.hpp"
#include "mcqbci/recording_io.hpp"
#include "mcqbci/speller.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mcqbci {

Epoch inject_noise(const Epoch& epoch, int level_pct, Rng& noise_stream) {
  if (level_pct < 0 || level_pct > 100) throw Error(Errc::ConfigError, "noise level must be within 0..100");
  if (level_pct == 0) return epoch;
  const double alpha = level_pct / 100.0;
  const auto n = static_cast<double>(epoch.data.size());
  double rms = n > 0 ? std::sqrt(epoch.data.squaredNorm() / n) : 0.0;
  if (rms == 0.0) rms = 1.0;

  Eigen::MatrixXd noise(epoch.data.rows(), epoch.data.cols());
  for (Eigen::Index i = 0; i < noise.rows(); ++i)
    for (Eigen::Index c = 0; c < noise.cols(); ++c) noise(i, c) = noise_stream.normal();
  const double noise_rms = n > 0 ? std::sqrt(noise.squaredNorm() / n) : 0.0;
  if (noise_rms > 0.0) noise *= rms / noise_rms;

  Epoch out = epoch;
  out.data = (1.0 - alpha) * epoch.data + alpha * noise;
  return out;
}

std::uint64_t sweep_cell_seed(std::uint64_t seed, int level, int trial) noexcept {
  return mix_seed(seed, static_cast<std::uint64_t>(level) * 1000000ULL + static_cast<std::uint64_t>(trial));
}

SweepReport noise_sweep(const LdaModel& model, const Exam& exam, std::span<const Recording> sessions,
                        std::span<const int> levels, int trials, std::uint64_t seed, const PipelineSpec& pipeline) {
  if (trials < 1) throw Error(Errc::ConfigError, "trials must be >= 1");
  if (sessions.empty()) throw Error(Errc::ConfigError, "noise sweep needs at least one session");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 0 || levels[i] > 100) throw Error(Errc::ConfigError, "levels must lie within 0..100");
    if (i > 0 && levels[i] <= levels[i - 1]) throw Error(Errc::ConfigError, "levels must be strictly increasing");
  }

  std::vector<std::vector<std::vector<Epoch>>> grouped;
  for (const auto& rec : sessions) grouped.push_back(question_epochs(exam, rec, pipeline));
  const auto n_questions = static_cast<long long>(sessions.size() * exam.questions.size());

  auto count_correct = [&](int level, Rng* stream) {
    long long correct = 0;
    std::vector<Epoch> noisy;
    for (const auto& per_session : grouped) {
      for (std::size_t q = 0; q < per_session.size(); ++q) {
        std::span<const Epoch> epochs = per_session[q];
        if (stream) {
          noisy.clear();
          for (const auto& e : per_session[q]) noisy.push_back(inject_noise(e, level, *stream));
          epochs = noisy;
        }
        if (answer_question(model, epochs, pipeline.standardize).selected == exam.questions[q].answer) ++correct;
      }
    }
    return correct;
  };

  SweepReport report;
  report.trials_per_level = trials;
  report.seed = seed;
  report.clean_accuracy_pct = 100.0 * static_cast<double>(count_correct(0, nullptr)) / static_cast<double>(n_questions);
  for (int level : levels) {
    long long correct = 0;
    for (int t = 0; t < trials; ++t) {
      Rng stream(sweep_cell_seed(seed, level, t));
      correct += count_correct(level, &stream);
    }
    report.levels.push_back(level);
    report.accuracy_pct.push_back(100.0 * static_cast<double>(correct) /
                                  static_cast<double>(n_questions * trials));
  }
  return report;
}

namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw Error(Errc::ConfigError, "cannot parse levels '" + std::string(whole) + "'");
  return value;
}

}  // namespace

std::vector<int> parse_levels(std::string_view spec) {
  std::vector<int> levels;
  if (const auto range = spec.find(".."); range != std::string_view::npos) {
    const auto colon = spec.find(':', range);
    const int first = parse_int(spec.substr(0, range), spec);
    const int last = parse_int(spec.substr(range + 2, colon == std::string_view::npos ? spec.npos : colon - range - 2), spec);
    const int step = colon == std::string_view::npos ? 1 : parse_int(spec.substr(colon + 1), spec);
    if (step < 1 || last < first) throw Error(Errc::ConfigError, "bad level range '" + std::string(spec) + "'");
    for (int v = first; v <= last; v += step) levels.push_back(v);
  } else {
    std::size_t start = 0;
    while (start <= spec.size()) {
      const auto comma = spec.find(',', start);
      const auto piece = spec.substr(start, comma == std::string_view::npos ? spec.npos : comma - start);
      levels.push_back(parse_int(piece, spec));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 0 || levels[i] > 100) throw Error(Errc::ConfigError, "levels must lie within 0..100");
    if (i > 0 && levels[i] <= levels[i - 1]) throw Error(Errc::ConfigError, "levels must be strictly increasing");
  }
  return levels;
}

std::string report_csv(const SweepReport& report) {
  std::string out = "noise_pct,accuracy_pct\n";
  char line[64];
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    std::snprintf(line, sizeof line, "%d,%.2f\n", report.levels[i], report.accuracy_pct[i]);
    out += line;
  }
  return out;
}

void write_report_csv(const SweepReport& report, const std::filesystem::path& path) {
  write_text_file(report_csv(report), path);
}

CsvCurve parse_report_csv(std::string_view text) {
  CsvCurve curve;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "noise_pct,accuracy_pct")
    throw Error(Errc::SchemaError, "missing CSV header noise_pct,accuracy_pct");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(Errc::SchemaError, "malformed CSV row '" + line + "'");
    curve.levels.push_back(parse_int(std::string_view(line).substr(0, comma), line));
    try {
      curve.accuracy_pct.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw Error(Errc::SchemaError, "malformed CSV row '" + line + "'");
    }
  }
  return curve;
}

std::string render_curve_svg(const SweepReport& report) {
  // Plot area 400x300 at (60, 20); both axes span 0..100.
  constexpr double kLeft = 60, kTop = 20, kWidth = 400, kHeight = 300;
  auto x_of = [&](double v) { return kLeft + kWidth * v / 100.0; };
  auto y_of = [&](double v) { return kTop + kHeight * (1.0 - v / 100.0); };
  std::string svg;
  char buf[256];
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"370\" viewBox=\"0 0 500 370\">\n";
  svg += "<rect width=\"500\" height=\"370\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<g stroke=\"black\" stroke-width=\"1\"><line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/>"
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/></g>\n",
                x_of(0), y_of(0), x_of(100), y_of(0), x_of(0), y_of(0), x_of(0), y_of(100));
  svg += buf;
  svg += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int tick = 0; tick <= 100; tick += 20) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%d</text>"
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%d</text>\n",
                  x_of(tick), y_of(0) + 15, tick, x_of(0) - 6, y_of(tick) + 4, tick);
    svg += buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">noise (%%)</text>\n",
                x_of(50), y_of(0) + 35);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"15\" y=\"%.2f\" text-anchor=\"middle\" transform=\"rotate(-90 15 %.2f)\">accuracy (%%)</text>\n",
                y_of(50), y_of(50));
  svg += buf;
  svg += "</g>\n<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", x_of(report.levels[i]), y_of(report.accuracy_pct[i]));
    svg += buf;
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

void write_curve_svg(const SweepReport& report, const std::filesystem::path& path) {
  write_text_file(render_curve_svg(report), path);
}

}  // namespace mcqbci
