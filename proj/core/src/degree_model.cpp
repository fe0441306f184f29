#include "nullity/degree_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace nullity {

namespace {

// Shortest text that reads back to the same double.
std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view text, std::string_view what) {
  std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed " + std::string(what) + ": '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(value)) {
    throw std::invalid_argument("malformed " + std::string(what) + ": '" + s + "'");
  }
  return value;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("malformed " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

// Parses "<key>=<value>" and returns value.
std::string_view keyed_value(std::string_view body, std::string_view key) {
  if (body.size() <= key.size() + 1 || body.substr(0, key.size()) != key ||
      body[key.size()] != '=') {
    throw std::invalid_argument("malformed model spec: expected '" + std::string(key) +
                                "=<value>', got '" + std::string(body) + "'");
  }
  return body.substr(key.size() + 1);
}

}  // namespace

Pmf::Pmf(std::vector<double> probabilities, std::size_t degree_cap) {
  while (!probabilities.empty() && probabilities.back() == 0.0) probabilities.pop_back();
  if (probabilities.empty()) throw std::invalid_argument("empty support");
  if (probabilities.size() - 1 > degree_cap) {
    throw std::invalid_argument("support exceeds degree cap " + std::to_string(degree_cap));
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("negative probability");
    total += p;
  }
  if (total <= 0.0) throw std::invalid_argument("empty support");
  for (double& p : probabilities) p /= total;
  probs_ = std::move(probabilities);

  cdf_.resize(probs_.size());
  std::partial_sum(probs_.begin(), probs_.end(), cdf_.begin());
  cdf_.back() = 1.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    const double kk = static_cast<double>(k);
    mean_ += kk * probs_[k];
    second_moment_ += kk * kk * probs_[k];
  }
}

double Pmf::gf(double x, int order) const {
  if (order < 0) throw std::invalid_argument("negative derivative order");
  const std::size_t o = static_cast<std::size_t>(order);
  if (o > max_degree()) return 0.0;
  // Coefficient of x^(k-o) is p_k * k!/(k-o)!.
  double acc = 0.0;
  for (std::size_t k = probs_.size(); k-- > o;) {
    double falling = 1.0;
    for (std::size_t j = 0; j < o; ++j) falling *= static_cast<double>(k - j);
    acc = acc * x + probs_[k] * falling;
  }
  return acc;
}

std::map<std::size_t, double> Pmf::support() const {
  std::map<std::size_t, double> out;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    if (probs_[k] > 0.0) out.emplace(k, probs_[k]);
  }
  return out;
}

std::size_t Pmf::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::size_t>(it - cdf_.begin());
}

DegreeModel::DegreeModel(Pmf law, std::string label)
    : law_(std::move(law)), label_(std::move(label)) {}

DegreeModel poisson_model(double c, std::size_t degree_cap) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("poisson mean must be > 0");
  std::vector<double> probs;
  double p = std::exp(-c);
  double cumulative = 0.0;
  for (std::size_t k = 0;; ++k) {
    if (k > 0) p *= c / static_cast<double>(k);
    probs.push_back(p);
    cumulative += p;
    if (1.0 - cumulative < kPoissonTailMass && static_cast<double>(k) > c) break;
    if (k > degree_cap) throw std::invalid_argument("poisson truncation exceeds degree cap");
  }
  return DegreeModel(Pmf(std::move(probs), degree_cap), "poisson:c=" + format_real(c));
}

DegreeModel regular_model(std::size_t d) {
  std::vector<double> probs(d + 1, 0.0);
  probs[d] = 1.0;
  return DegreeModel(Pmf(std::move(probs), std::max(d, kDefaultDegreeCap)),
                     "regular:d=" + std::to_string(d));
}

DegreeModel mixture_model(std::size_t d, std::size_t degree_cap) {
  if (d == 0) throw std::invalid_argument("mixture degree must be >= 1");
  const std::size_t big = d * d * d;
  if (big > degree_cap) throw std::invalid_argument("mixture support exceeds degree cap");
  std::vector<double> probs(big + 1, 0.0);
  const double dd = static_cast<double>(d);
  probs[d] += dd / (1.0 + dd);
  probs[big] += 1.0 / (1.0 + dd);
  return DegreeModel(Pmf(std::move(probs), degree_cap), "mixture:d=" + std::to_string(d));
}

DegreeModel pmf_model(const std::map<std::size_t, double>& entries, std::size_t degree_cap) {
  if (entries.empty()) throw std::invalid_argument("empty support");
  const std::size_t top = entries.rbegin()->first;
  if (top > degree_cap) throw std::invalid_argument("support exceeds degree cap");
  std::vector<double> probs(top + 1, 0.0);
  std::string label = "pmf:";
  bool first = true;
  for (const auto& [k, p] : entries) {
    if (p < 0.0) throw std::invalid_argument("negative probability");
    probs[k] += p;
    if (!first) label += ',';
    label += std::to_string(k) + ':' + format_real(p);
    first = false;
  }
  return DegreeModel(Pmf(std::move(probs), degree_cap), label);
}

DegreeModel parse_model(std::string_view spec, std::size_t degree_cap) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("malformed model spec '" + std::string(spec) + "'");
  }
  const std::string_view family = spec.substr(0, colon);
  const std::string_view body = spec.substr(colon + 1);
  DegreeModel model;
  if (family == "poisson") {
    model = poisson_model(parse_real(keyed_value(body, "c"), "poisson mean"), degree_cap);
  } else if (family == "regular") {
    const std::size_t d = parse_count(keyed_value(body, "d"), "regular degree");
    if (d > degree_cap) throw std::invalid_argument("support exceeds degree cap");
    model = regular_model(d);
  } else if (family == "mixture") {
    model = mixture_model(parse_count(keyed_value(body, "d"), "mixture degree"), degree_cap);
  } else if (family == "pmf") {
    std::map<std::size_t, double> entries;
    std::string_view rest = body;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto sep = item.find(':');
      if (sep == std::string_view::npos) {
        throw std::invalid_argument("malformed pmf entry '" + std::string(item) + "'");
      }
      const std::size_t k = parse_count(item.substr(0, sep), "pmf degree");
      const double p = parse_real(item.substr(sep + 1), "pmf probability");
      if (p < 0.0) throw std::invalid_argument("negative probability");
      entries[k] += p;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      if (rest.empty()) throw std::invalid_argument("malformed pmf: trailing comma");
    }
    model = pmf_model(entries, degree_cap);
  } else {
    throw std::invalid_argument("unknown model family '" + std::string(family) + "'");
  }
  return DegreeModel(model.law(), std::string(spec));
}

OffspringModel size_biased(const DegreeModel& model) {
  if (!(model.mean() > 0.0)) throw std::domain_error("degenerate degree model");
  const auto probs = model.law().probabilities();
  std::vector<double> out(probs.size() > 1 ? probs.size() - 1 : 1, 0.0);
  for (std::size_t k = 1; k < probs.size(); ++k) {
    out[k - 1] = static_cast<double>(k) * probs[k] / model.mean();
  }
  return OffspringModel{Pmf(std::move(out), std::max(model.max_degree(), kDefaultDegreeCap))};
}

double gf_eval(const DegreeModel& model, double x, int order) {
  if (order < 0 || order > 3) throw std::invalid_argument("gf order must be 0..3");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("gf argument outside [0,1]");
  return model.law().gf(x, order);
}

LogConcavityReport is_phi2_logconcave(const DegreeModel& model, std::size_t grid_points) {
  if (grid_points < 3) throw std::invalid_argument("log-concavity grid needs >= 3 points");
  LogConcavityReport report;
  report.grid.resize(grid_points);
  report.log_phi2.resize(grid_points);
  std::vector<double> values(grid_points);
  bool any_positive = false;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(grid_points - 1);
    report.grid[i] = x;
    values[i] = model.law().gf(x, 2);
    report.log_phi2[i] = values[i] > 0.0 ? std::log(values[i]) : -HUGE_VAL;
    any_positive = any_positive || values[i] > 0.0;
  }
  if (!any_positive) {
    report.verdict = LogConcavityReport::Verdict::kVacuous;
    return report;
  }
  report.verdict = LogConcavityReport::Verdict::kLogConcave;
  report.worst_second_difference = -HUGE_VAL;
  for (std::size_t i = 1; i + 1 < grid_points; ++i) {
    if (values[i - 1] <= 0.0 || values[i] <= 0.0 || values[i + 1] <= 0.0) continue;
    const double a = report.log_phi2[i - 1];
    const double b = report.log_phi2[i];
    const double c = report.log_phi2[i + 1];
    const double second = a + c - 2.0 * b;
    const double slack = 1e-13 * (1.0 + std::abs(a) + 2.0 * std::abs(b) + std::abs(c));
    report.worst_second_difference = std::max(report.worst_second_difference, second);
    if (second > slack && !report.first_violation) {
      report.verdict = LogConcavityReport::Verdict::kNotLogConcave;
      report.first_violation = report.grid[i];
    }
  }
  return report;
}

std::string to_json(const DegreeModel& model) {
  nlohmann::json pmf = nlohmann::json::object();
  for (const auto& [k, p] : model.law().support()) pmf[std::to_string(k)] = p;
  return nlohmann::json{{"pmf", pmf}}.dump();
}

DegreeModel degree_model_from_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.contains("pmf") || !doc["pmf"].is_object()) {
    throw std::invalid_argument("degree model JSON needs a 'pmf' object");
  }
  std::map<std::size_t, double> entries;
  for (const auto& [key, value] : doc["pmf"].items()) {
    entries[parse_count(key, "pmf degree")] = value.get<double>();
  }
  return pmf_model(entries);
}

}  // namespace nullity
