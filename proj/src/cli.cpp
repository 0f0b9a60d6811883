#include "qcrb/cli.hpp"

#include "qcrb/error.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#ifndef QCRB_VERSION
#define QCRB_VERSION "0.0.0"
#endif

namespace qcrb::cli {

namespace {

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorKind::Usage, "empty entry in " + what);
    item = item.substr(b, e - b + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw Error(ErrorKind::Usage, "cannot parse '" + item + "' in " + what);
    }
    out.push_back(v);
  }
  return out;
}

ParamPoint parse_theta(const RunConfig& c, const StateFamily& family) {
  if (c.theta.empty()) throw Error(ErrorKind::Usage, "--theta is required for " + c.command);
  ParamPoint p = parse_list(c.theta, "--theta");
  if (static_cast<int>(p.size()) != family.param_dim()) {
    std::ostringstream os;
    os << family.name() << " takes " << family.param_dim() << " values in --theta, got " << p.size();
    throw Error(ErrorKind::Usage, os.str());
  }
  return p;
}

WeightMatrix parse_g(const std::string& text, int d) {
  if (text.empty()) return WeightMatrix::identity(d);
  const auto v = parse_list(text, "--G");
  if (d == 2 && v.size() == 3) return WeightMatrix::from_g(v[0], v[1], v[2]);
  if (static_cast<int>(v.size()) != d * d) {
    std::ostringstream os;
    os << "--G needs " << d * d << " row-major entries" << (d == 2 ? " or g1,g2,g3" : "")
       << ", got " << v.size();
    throw Error(ErrorKind::Usage, os.str());
  }
  RealMatrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = v[i * d + j];
  }
  return WeightMatrix(g);
}

json point_json(const ParamPoint& p) { return json(p); }

json fisher_result(const RunConfig& c) {
  const StateFamily family = StateFamily::parse(c.family);
  const ParamPoint theta = parse_theta(c, family);
  const FamilyAtPoint fp = eval_derivs(family, theta);
  const auto slds = solve_slds(fp);
  json sld = json::array();
  for (const auto& l : slds) sld.push_back(to_json(l.mat()));
  json result{{"family", family.name()},
              {"params", family.param_names()},
              {"theta0", point_json(theta)},
              {"J", to_json(sld_fisher(fp.rho, slds))},
              {"sld", sld}};
  const auto rld = rld_fisher(fp);
  result["J_rld"] = rld ? to_json(*rld) : json(nullptr);
  if (rld) {
    json rlds = json::array();
    for (const auto& d : fp.derivs) {
      rlds.push_back(to_json(solve_rld_on_support(fp.rho, d)));
    }
    result["rld"] = rlds;
  } else {
    result["rld"] = nullptr;
  }
  return result;
}

json bounds_result(const RunConfig& c) {
  const StateFamily family = StateFamily::parse(c.family);
  const ParamPoint theta = parse_theta(c, family);
  return to_json(compute_bounds(family, theta, parse_g(c.g, family.param_dim())));
}

json frontier_result(const RunConfig& c) {
  const StateFamily family = StateFamily::parse(c.family);
  json result;
  json points = json::array();
  const auto& kind = c.frontier_kind;
  if (kind != "single" && kind != "asymptotic" && kind != "w") {
    throw Error(ErrorKind::Usage, "--kind must be single, asymptotic or w");
  }

  if (kind == "w") {
    const ParamPoint theta = parse_theta(c, family);
    if (!family.is_qubit()) throw Error(ErrorKind::UnsupportedFamily, "W frontier needs a qubit family");
    const FisherMatrix j = sld_fisher(eval_derivs(family, theta));
    const FrontierMin m = frontier_min(j, parse_g(c.g, family.param_dim()));
    points.push_back(to_json(m.argmin));
    result = json{{"kind", to_string(FrontierKind::FullSingleW)},
                  {"points", points},
                  {"minimum", json{{"value", m.value}, {"point", to_json(m.argmin)}}}};
    return result;
  }

  FrontierKind fk;
  double radius = 0.0;
  if (const auto* rf = std::get_if<QubitRFixed>(&family.kind())) {
    fk = kind == "single" ? FrontierKind::RFixedSingle : FrontierKind::RFixedAsymptotic;
    radius = rf->r0;
  } else if (std::holds_alternative<QubitFull>(family.kind())) {
    if (kind != "asymptotic") {
      throw Error(ErrorKind::Usage, "full family supports --kind asymptotic or w");
    }
    const ParamPoint theta = parse_theta(c, family);
    if (std::abs(theta[1] - std::numbers::pi / 2) > 1e-6 || std::abs(theta[2]) > 1e-6) {
      throw Error(ErrorKind::Parameter,
                  "full-family asymptotic frontier is available only at (r, pi/2, 0)");
    }
    fk = FrontierKind::FullAsymptotic;
    radius = theta[0];
  } else {
    throw Error(ErrorKind::UnsupportedFamily, "explicit frontiers exist for r-fixed and full families");
  }

  const auto ys = Range::parse(c.y).values();
  const auto zs = Range::parse(c.z).values();
  for (double y : ys) {
    for (double z : zs) points.push_back(to_json(frontier_point(fk, radius, y, z)));
  }
  result = json{{"kind", to_string(fk)}, {"radius", radius}, {"points", points}};
  if (!c.g.empty()) {
    const int d = fk == FrontierKind::FullAsymptotic ? 3 : 2;
    const FrontierMin m = frontier_min(fk, radius, parse_g(c.g, d));
    result["minimum"] = json{{"value", m.value}, {"point", to_json(m.argmin)}};
  }
  return result;
}

std::uint64_t effective_seed(const RunConfig& c) {
  if (const char* env = std::getenv("QCRB_SEED"); env && *env) {
    std::uint64_t v = 0;
    const std::string s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorKind::Usage, "QCRB_SEED must be an unsigned integer");
    }
    return v;
  }
  return c.search.seed;
}

json povm_result(const RunConfig& c) {
  const StateFamily family = StateFamily::parse(c.family);
  const ParamPoint theta = parse_theta(c, family);
  const WeightMatrix g = parse_g(c.g, family.param_dim());
  SearchOptions opts = c.search;
  opts.seed = effective_seed(c);
  const SearchResult r = optimize(eval_derivs(family, theta), g, theta, opts);
  json result = to_json(r);
  const BoundReport b = compute_bounds(family, theta, g);
  result["C"] = b.c.value ? json(*b.c.value) : json(nullptr);
  result["C_A"] = b.c_a.value ? json(*b.c_a.value) : json(nullptr);
  result["C_R"] = b.c_r.value ? json(*b.c_r.value) : json(nullptr);
  return result;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json sweep_result(const RunConfig& c) {
  if (c.sweep_param != "r0" && c.sweep_param != "n_copies") {
    throw Error(ErrorKind::Usage, "--param must be r0 or n_copies");
  }
  const auto values = Range::parse(c.sweep_range).values();
  const StateFamily base = StateFamily::parse(c.family);
  const ParamPoint theta = parse_theta(c, base);
  const WeightMatrix g = parse_g(c.g, base.param_dim());
  SearchOptions opts = c.search;
  opts.seed = effective_seed(c);

  json rows = json::array();
  for (double v : values) {
    StateFamily family = base;
    ParamPoint point = theta;
    bool search = c.search_requested;
    if (c.sweep_param == "r0") {
      if (std::holds_alternative<QubitRFixed>(base.kind())) {
        family = StateFamily(QubitRFixed{v});
      } else if (std::holds_alternative<QubitFull>(base.kind()) ||
                 std::holds_alternative<QubitPhiZero>(base.kind())) {
        point[0] = v;
      } else {
        throw Error(ErrorKind::UnsupportedFamily, "r0 sweep needs a qubit family");
      }
    } else {
      if (v != std::floor(v) || v < 1) throw Error(ErrorKind::Usage, "n_copies values must be integers >= 1");
      opts.copies = static_cast<int>(v);
      search = true;
    }
    const BoundReport b = compute_bounds(family, point, g);
    std::optional<double> searched;
    if (search) searched = optimize(eval_derivs(family, point), g, point, opts).best_value;
    std::optional<double> gap;
    if (b.c.value && b.c_a.value) gap = *b.c.value - *b.c_a.value;
    rows.push_back(json{{"step_value", v},
                        {"C", opt_json(b.c.value)},
                        {"C_A", opt_json(b.c_a.value)},
                        {"C_R", opt_json(b.c_r.value)},
                        {"searched", opt_json(searched)},
                        {"gap_C_CA", opt_json(gap)}});
  }
  return json{{"param", c.sweep_param}, {"rows", rows}};
}

std::optional<double> num(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

void write_csv(const std::string& command, const json& result, std::ostream& os) {
  if (command == "frontier") {
    const bool full = result.at("kind") == to_string(FrontierKind::FullAsymptotic);
    if (result.at("kind") == to_string(FrontierKind::FullSingleW)) {
      throw Error(ErrorKind::Usage, "W frontier is available as JSON only");
    }
    os << "y,z,x,v11,v12,v22" << (full ? ",v00" : "") << "\n";
    for (const auto& p : result.at("points")) {
      const RealMatrix v = real_matrix_from_json(p.at("V"));
      const int o = full ? 1 : 0;
      os << csv_number(p.at("y").get<double>()) << ',' << csv_number(p.at("z").get<double>()) << ','
         << csv_number(p.at("x").get<double>()) << ',' << csv_number(v(o, o)) << ','
         << csv_number(v(o, o + 1)) << ',' << csv_number(v(o + 1, o + 1));
      if (full) os << ',' << csv_number(v(0, 0));
      os << "\n";
    }
    return;
  }
  if (command == "sweep") {
    os << "step_value,C,C_A,C_R,searched,gap_C_CA\n";
    for (const auto& r : result.at("rows")) {
      os << csv_number(r.at("step_value").get<double>()) << ',' << csv_number(num(r.at("C"))) << ','
         << csv_number(num(r.at("C_A"))) << ',' << csv_number(num(r.at("C_R"))) << ','
         << csv_number(num(r.at("searched"))) << ',' << csv_number(num(r.at("gap_C_CA"))) << "\n";
    }
    return;
  }
  if (command == "bounds") {
    os << "C,C_A,C_R,ordering_ok\n";
    os << csv_number(num(result.at("C").at("value"))) << ','
       << csv_number(num(result.at("C_A").at("value"))) << ','
       << csv_number(num(result.at("C_R").at("value"))) << ','
       << (result.at("ordering_ok").get<bool>() ? "true" : "false") << "\n";
    return;
  }
  throw Error(ErrorKind::Usage, "csv output is available for bounds, frontier and sweep");
}

}  // namespace

Range Range::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw Error(ErrorKind::Usage, "range must look like lo:hi:steps, got '" + text + "'");
  Range r;
  r.lo = parse_list(parts[0], "range").at(0);
  r.hi = parse_list(parts[1], "range").at(0);
  const double steps = parse_list(parts[2], "range").at(0);
  if (steps != std::floor(steps)) throw Error(ErrorKind::Usage, "range step count must be an integer");
  if (steps < 1) throw Error(ErrorKind::Usage, "empty range '" + text + "'");
  r.steps = static_cast<int>(steps);
  return r;
}

std::vector<double> Range::values() const {
  if (steps < 1) throw Error(ErrorKind::Usage, "empty range");
  std::vector<double> out;
  out.reserve(steps);
  if (steps == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < steps; ++i) {
    out.push_back(i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1));
  }
  return out;
}

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::string& help_text) {
  RunConfig c;
  CLI::App app{"Quantum Cramer-Rao type bounds for qubit and displaced-thermal families", "qcrb"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(QCRB_VERSION));

  auto common = [&](CLI::App* sub) {
    sub->add_option("--family", c.family, "full | r-fixed:<r0> | phi-zero | thermal:<N>:<fock_dim>")
        ->required();
    sub->add_option("-o,--output", c.output, "output path (default stdout)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto theta = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--theta", c.theta, "parameter point, comma-separated, radians");
    if (required) o->required();
  };
  auto weight = [&](CLI::App* sub) {
    sub->add_option("--G", c.g, "weight matrix, row-major, or g1,g2,g3 for two parameters");
  };
  auto search = [&](CLI::App* sub) {
    sub->add_option("--copies", c.search.copies, "number of i.i.d. copies");
    sub->add_option("--m", c.search.outcomes, "POVM outcome count (0 = default)");
    sub->add_option("--restarts", c.search.restarts, "independent restarts");
    sub->add_option("--iters", c.search.iters, "refinement sweeps per restart");
    sub->add_option("--seed", c.search.seed, "RNG seed (QCRB_SEED overrides)");
    sub->add_option("--threads", c.search.threads, "worker threads (0 = hardware)");
  };

  auto* fisher = app.add_subcommand("fisher", "SLD/RLD Fisher matrices and logarithmic derivatives");
  common(fisher);
  theta(fisher, true);

  auto* bounds = app.add_subcommand("bounds", "C, C_A and C_R at a point");
  common(bounds);
  theta(bounds, true);
  weight(bounds);

  auto* frontier = app.add_subcommand("frontier", "covariance frontier samples");
  common(frontier);
  theta(frontier, false);
  weight(frontier);
  frontier->add_option("--kind", c.frontier_kind, "single | asymptotic | w");
  frontier->add_option("--y", c.y, "lo:hi:steps");
  frontier->add_option("--z", c.z, "lo:hi:steps");

  auto* povm = app.add_subcommand("povm", "POVM search for the smallest n tr(G V)");
  common(povm);
  theta(povm, true);
  weight(povm);
  search(povm);

  auto* sweep = app.add_subcommand("sweep", "bounds along r0 or the copy count");
  common(sweep);
  theta(sweep, true);
  weight(sweep);
  search(sweep);
  sweep->add_option("--param", c.sweep_param, "r0 | n_copies")->required();
  sweep->add_option("--range", c.sweep_range, "lo:hi:steps")->required();
  sweep->add_flag("--search", c.search_requested, "also run the POVM search at each step");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    help_text = app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    help_text = app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    help_text = std::string(QCRB_VERSION) + "\n";
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::Usage, e.what());
  }
  for (auto* sub : {fisher, bounds, frontier, povm, sweep}) {
    if (sub->parsed()) c.command = sub->get_name();
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json j{{"command", c.command}, {"family", c.family}, {"theta", c.theta},
         {"G", c.g},             {"format", c.format}};
  if (c.command == "frontier") {
    j["kind"] = c.frontier_kind;
    j["y"] = c.y;
    j["z"] = c.z;
  }
  if (c.command == "povm" || c.command == "sweep") {
    j["search"] = json{{"copies", c.search.copies}, {"m", c.search.outcomes},
                       {"restarts", c.search.restarts}, {"iters", c.search.iters},
                       {"seed", effective_seed(c)}};
  }
  if (c.command == "sweep") {
    j["param"] = c.sweep_param;
    j["range"] = c.sweep_range;
    j["search_requested"] = c.search_requested;
  }
  return j;
}

json compute_result(const RunConfig& c) {
  if (c.command == "fisher") return fisher_result(c);
  if (c.command == "bounds") return bounds_result(c);
  if (c.command == "frontier") return frontier_result(c);
  if (c.command == "povm") return povm_result(c);
  if (c.command == "sweep") return sweep_result(c);
  throw Error(ErrorKind::Usage, "unknown command '" + c.command + "'");
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const json result = compute_result(c);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream body;
    if (c.format == "csv") {
      write_csv(c.command, result, body);
    } else {
      const json envelope{{"version", QCRB_VERSION},
                          {"config", config_to_json(c)},
                          {"result", result},
                          {"wall_ms", wall_ms}};
      body << envelope.dump(2) << "\n";
    }
    if (c.output.empty() || c.output == "-") {
      out << body.str();
    } else {
      std::ofstream file(c.output);
      if (!file) throw Error(ErrorKind::Parameter, "cannot open output file '" + c.output + "'");
      file << body.str();
    }
    return 0;
  } catch (const Error& e) {
    err << "qcrb: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    err << "qcrb: " << e.what() << "\n";
    return 3;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    std::string help;
    config = parse_args(args, help);
    if (!config) {
      out << help;
      return 0;
    }
  } catch (const Error& e) {
    err << "qcrb: " << e.what() << "\n" << "run 'qcrb --help' for usage\n";
    return exit_code(e.kind());
  }
  return run(*config, out, err);
}

}  // namespace qcrb::cli
