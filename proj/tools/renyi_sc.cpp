// renyi_sc: divergences, exponent curves and randomized verification suites.
//
// Exit codes: 0 ok, 1 input error, 2 infinite value, 3 budget exceeded,
// 4 property failure.

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "renyi/cqcoding.hpp"
#include "renyi/divergences.hpp"
#include "renyi/hypotest.hpp"
#include "renyi/matrix_json.hpp"
#include "renyi/measured.hpp"
#include "verify.hpp"

using namespace renyi;
using div::DivergenceKind;
using io::json;
using opalg::DensityOperator;
using opalg::Index;

namespace {

enum Exit { kOk = 0, kInput = 1, kInfinite = 2, kBudget = 3, kProperty = 4 };

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string alpha = "2";
  std::string alphas;
  std::string rates = "0:2:201";
  std::string kind = "sandwiched";
  std::string mode = "hypothesis";
  std::string suite = "all";
  std::string out;
  std::string format = "csv";
  std::string channel;
  std::string mus = "0.05:5:100";
  std::vector<std::string> states;
  std::size_t seeds = 100;
  std::uint64_t seed = 20240611;
  int restarts = 16;
  int nfold = 1;
  bool bits = false;
};

/// Scale applied to reported values (1 for nats, 1/ln 2 for bits).
double unit(const Options& o) { return o.bits ? 1.0 / std::numbers::ln2 : 1.0; }

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json alpha_json(const RenyiOrder& a) { return number_or_inf(a.value()); }

std::string alpha_text(const RenyiOrder& a) { return a.is_infinity() ? "inf" : format_double(a.value()); }

/// "a,b,c" or "start:stop:count" (inclusive, count >= 2).
std::vector<double> parse_grid(const std::string& text, const char* what) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InputError(std::string("cannot parse ") + what + " value '" + s + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw InputError(std::string(what) + " range must be start:stop:count");
    double a = number(parts[0]), b = number(parts[1]);
    double n = number(parts[2]);
    if (n < 2 || n != std::floor(n)) throw InputError(std::string(what) + " range count must be an integer >= 2");
    const int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) out.push_back(a + (b - a) * i / (count - 1));
    return out;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    out.push_back(number(item.substr(first, item.find_last_not_of(" \t") - first + 1)));
  }
  if (out.empty()) throw InputError(std::string("empty ") + what + " grid");
  return out;
}

std::vector<RenyiOrder> order_grid(const Options& o) {
  if (o.alphas.empty()) return hypotest::default_alpha_grid();
  try {
    return hypotest::parse_alpha_grid(o.alphas);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

RenyiOrder parse_order(const std::string& text) {
  try {
    return RenyiOrder::parse(text);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

void emit(const Options& o, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
  } else {
    io::write_file_atomic(o.out, content);
  }
}

std::vector<double> diagonal_of(const DensityOperator& r) {
  const auto& m = r.matrix();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (i != j && std::abs(m(i, j)) > 1e-12) throw InputError("kind classical requires diagonal states");
    }
  }
  std::vector<double> d;
  for (Index i = 0; i < m.rows(); ++i) d.push_back(m(i, i).real());
  return d;
}

int cmd_divergence(const Options& o) {
  if (o.states.size() != 2) throw InputError("divergence expects two state files");
  DensityOperator rho = io::read_density_file(o.states[0]);
  DensityOperator sigma = io::read_density_file(o.states[1]);
  if (rho.dim() != sigma.dim()) throw InputError("state dimensions differ");
  RenyiOrder a = parse_order(o.alpha);
  DivergenceKind kind;
  try {
    kind = div::parse_kind(o.kind);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }

  div::DivergenceResult res;
  res.alpha = a;
  res.kind = kind;
  std::optional<ExtReal> upper;
  switch (kind) {
    case DivergenceKind::Classical:
      res.value = div::classical_renyi(div::ProbDist(diagonal_of(rho)), div::ProbDist(diagonal_of(sigma)), a);
      break;
    case DivergenceKind::Petz:
      res.value = div::petz_renyi(rho, sigma, a);
      break;
    case DivergenceKind::Sandwiched:
      res.value = div::sandwiched_renyi(rho, sigma, a);
      if (a.is_finite() && a.above_one() && res.value.is_finite()) {
        res.effect_witness = div::optimal_sandwiched_test(rho, sigma, a);
      }
      break;
    case DivergenceKind::Measured: {
      div::OptimizerConfig cfg;
      cfg.restarts = o.restarts;
      cfg.seed = o.seed;
      div::MeasuredResult m = div::measured_renyi(rho, sigma, a, cfg);
      res = m.result;
      upper = m.upper_bound;
      break;
    }
  }

  const double scale = unit(o);
  json j;
  j["value"] = number_or_inf(res.value.to_double() * scale);
  j["alpha"] = alpha_json(a);
  j["kind"] = div::to_string(kind);
  j["status"] = div::to_string(res.status);
  j["unit"] = o.bits ? "bits" : "nats";
  if (res.pvm_witness) {
    j["witness"] = io::pvm_to_json(*res.pvm_witness);
  } else if (res.effect_witness) {
    j["witness"] = io::matrix_to_json(res.effect_witness->matrix());
  } else {
    j["witness"] = nullptr;
  }
  if (upper) j["upper_bound"] = number_or_inf(upper->to_double() * scale);
  emit(o, j.dump(2) + "\n");
  return res.value.is_pos_inf() ? kInfinite : kOk;
}

/// Largest sampled rate whose exponent is still zero up to 1e-12 (rates sorted
/// ascending); nullopt when every sampled exponent is positive.
std::optional<double> threshold_estimate(const hypotest::ExponentCurve& c) {
  std::optional<double> t;
  for (const auto& p : c.points) {
    if (p.exponent <= 1e-12) t = p.rate;
  }
  return t;
}

int cmd_exponent(const Options& o) {
  const double scale = unit(o);
  std::vector<double> rates = parse_grid(o.rates, "rate");
  std::sort(rates.begin(), rates.end());
  for (double& r : rates) r /= scale;  // to nats
  std::vector<RenyiOrder> grid = order_grid(o);
  if (o.format != "csv" && o.format != "json") throw InputError("format must be csv or json");

  hypotest::ExponentCurve curve;
  if (o.mode == "hypothesis") {
    if (o.states.size() != 2) throw InputError("mode hypothesis expects two state files");
    DensityOperator rho = io::read_density_file(o.states[0]);
    DensityOperator sigma = io::read_density_file(o.states[1]);
    if (rho.dim() != sigma.dim()) throw InputError("state dimensions differ");
    curve = hypotest::sc_exponent_curve(rho, sigma, rates, grid);
  } else if (o.mode == "coding") {
    if (o.channel.empty()) throw InputError("mode coding expects --channel");
    cq::CqChannel ch(io::read_channel_file(o.channel));
    cq::SolverConfig cfg;
    cfg.seed = o.seed;
    curve = cq::coding_exponent_curve(ch, rates, grid, cfg);
  } else {
    throw InputError("mode must be hypothesis or coding");
  }

  std::string content;
  if (o.format == "csv") {
    content = "rate,exponent,alpha_star\n";
    for (const auto& p : curve.points) {
      content += format_double(p.rate * scale) + "," + format_double(p.exponent * scale) + "," +
                 alpha_text(p.argmax_alpha) + "\n";
    }
  } else {
    json pts = json::array();
    for (const auto& p : curve.points) {
      pts.push_back({{"rate", p.rate * scale}, {"exponent", p.exponent * scale},
                     {"alpha_star", alpha_json(p.argmax_alpha)}});
    }
    content = json{{"points", pts}, {"support_violation", curve.support_violation},
                   {"unit", o.bits ? "bits" : "nats"}}
                  .dump(2) +
              "\n";
  }
  emit(o, content);

  std::ostream& summary = o.out.empty() ? std::cerr : std::cout;
  auto t = threshold_estimate(curve);
  summary << "mode=" << o.mode << " points=" << curve.points.size() << " threshold_estimate="
          << (t ? format_double(*t * scale) : std::string("below_grid")) << (o.bits ? " bits" : " nats") << "\n";
  if (curve.support_violation) {
    summary << "support violation: the exponent is infinite at every rate\n";
    return kInfinite;
  }
  return kOk;
}

int cmd_tradeoff(const Options& o) {
  if (o.states.size() != 2) throw InputError("tradeoff expects two state files");
  DensityOperator rho = io::read_density_file(o.states[0]);
  DensityOperator sigma = io::read_density_file(o.states[1]);
  if (rho.dim() != sigma.dim()) throw InputError("state dimensions differ");
  std::vector<double> mus = parse_grid(o.mus, "mu");
  for (double m : mus) {
    if (m < 0) throw InputError("mu values must be >= 0");
  }
  std::string content = "n,mu,type1_success,type2_error\n";
  for (const auto& p : hypotest::nfold_tradeoff(rho, sigma, o.nfold, mus)) {
    content += std::to_string(p.n) + "," + format_double(p.mu) + "," + format_double(p.outcome.type1_success) + "," +
               format_double(p.outcome.type2_error) + "\n";
  }
  emit(o, content);
  return kOk;
}

int cmd_verify(const Options& o) {
  std::vector<std::string> suites;
  if (o.suite == "all") {
    suites = verify::suite_names();
  } else {
    const auto& names = verify::suite_names();
    if (std::find(names.begin(), names.end(), o.suite) == names.end()) {
      throw InputError("suite must be one of holder, variational, converse, coding, all");
    }
    suites.push_back(o.suite);
  }
  json report = json::array();
  bool ok = true;
  for (const auto& s : suites) {
    verify::SuiteReport r = verify::run_suite(s, o.seeds, o.seed);
    ok = ok && r.failures.empty();
    report.push_back(verify::to_json(r));
    std::cerr << s << ": " << r.instances << " instances, " << r.checks << " checks, " << r.failures.size()
              << " failures, " << format_double(std::round(r.seconds * 100) / 100) << " s\n";
  }
  json doc{{"seed", o.seed}, {"seeds", o.seeds}, {"passed", ok}, {"suites", report}};
  emit(o, doc.dump(2) + "\n");
  return ok ? kOk : kProperty;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Renyi divergences, strong-converse bounds and exponent curves"};
  app.require_subcommand(1);
  Options o;

  auto* dv = app.add_subcommand("divergence", "Evaluate a Renyi divergence between two states");
  dv->add_option("states", o.states, "rho and sigma state files (JSON)")->expected(2)->required();
  dv->add_option("--alpha", o.alpha, "Order alpha (positive number or inf)")->capture_default_str();
  dv->add_option("--kind", o.kind, "classical | petz | sandwiched | measured")->capture_default_str();
  dv->add_option("--restarts", o.restarts, "Random restarts of the measured search")->capture_default_str();
  dv->add_option("--seed", o.seed, "Seed of the measured search")->capture_default_str();
  dv->add_option("--out", o.out, "Write the JSON result to this file");
  dv->add_flag("--bits", o.bits, "Report in bits instead of nats");

  auto* ex = app.add_subcommand("exponent", "Strong-converse exponent curve");
  ex->add_option("states", o.states, "rho and sigma state files (mode hypothesis)");
  ex->add_option("--mode", o.mode, "hypothesis | coding")->capture_default_str();
  ex->add_option("--channel", o.channel, "Channel file (mode coding)");
  ex->add_option("--rates", o.rates, "Rates: a,b,c or start:stop:count")->capture_default_str();
  ex->add_option("--alphas", o.alphas, "Order grid, e.g. 1,1.5,2,inf (default: built-in 13-point grid)");
  ex->add_option("--seed", o.seed, "Seed of the capacity search")->capture_default_str();
  ex->add_option("--out", o.out, "Write the curve to this file");
  ex->add_option("--format", o.format, "csv | json")->capture_default_str();
  ex->add_flag("--bits", o.bits, "Rates and exponents in bits");

  auto* tr = app.add_subcommand("tradeoff", "Neyman-Pearson trade-off on n-fold products");
  tr->add_option("states", o.states, "rho and sigma state files")->expected(2)->required();
  tr->add_option("--n", o.nfold, "Number of copies")->capture_default_str();
  tr->add_option("--mus", o.mus, "Thresholds: a,b,c or start:stop:count")->capture_default_str();
  tr->add_option("--out", o.out, "Write the CSV to this file");

  auto* vf = app.add_subcommand("verify", "Run randomized property suites");
  vf->add_option("--suite", o.suite, "holder | variational | converse | coding | all")->capture_default_str();
  vf->add_option("--seeds", o.seeds, "Number of random instances per suite")->capture_default_str();
  vf->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  vf->add_option("--out", o.out, "Write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (dv->parsed()) return cmd_divergence(o);
    if (ex->parsed()) return cmd_exponent(o);
    if (tr->parsed()) return cmd_tradeoff(o);
    return cmd_verify(o);
  } catch (const opalg::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const io::FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const opalg::DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const opalg::DimensionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
}
