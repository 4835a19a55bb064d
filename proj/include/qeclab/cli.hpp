#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qeclab/codes.hpp"
#include "qeclab/decode.hpp"
#include "qeclab/ftsim.hpp"
#include "qeclab/harness.hpp"
#include "qeclab/noise.hpp"

namespace qeclab::cli {

// exit codes: 0 success, 1 runtime error, 2 usage/config error, 3 check failed
enum : int { kOk = 0, kRuntime = 1, kUsage = 2, kCheckFailed = 3 };

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string bits_string(const SyndromeRecord& s) {
  std::string out;
  for (auto b : s.bits) out += b ? '1' : '0';
  return out;
}

/// Resolves catalog names including parameterized families.
inline std::optional<CodeSpec> resolve_code(const std::string& name) {
  if (auto c = builtin_code(name)) return c;
  return std::nullopt;
}

inline PauliChannel make_channel(const std::string& kind, double p) {
  if (kind == "bit_flip") return PauliChannel::bit_flip(p);
  if (kind == "phase_flip") return PauliChannel::phase_flip(p);
  if (kind == "depolarizing") return PauliChannel::depolarizing(p);
  throw CLI::ValidationError("channel", "unknown channel " + kind);
}

/// Flat key=value config; [section] headers allowed and ignored.
inline std::map<std::string, std::string> parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("config", "cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("config", "expected key=value: " + line);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stoul(tok));
  return out;
}

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline int cmd_codes(const std::string& action, const std::string& name,
                     const std::string& format, std::ostream& out, std::ostream& err) {
  using nlohmann::json;
  if (action == "list") {
    if (format == "json") {
      out << json(builtin_code_names()).dump(2) << "\n";
    } else {
      for (const auto& n : builtin_code_names()) out << n << "\n";
    }
    return kOk;
  }
  // show
  std::string resolved = name;
  if (name == "bacon_shor" || name.rfind("bacon_shor(", 0) == 0) {
    std::size_t n1 = 3, n2 = 3;
    if (name != "bacon_shor" &&
        std::sscanf(name.c_str(), "bacon_shor(%zu,%zu)", &n1, &n2) != 2) {
      err << "codes: bad bacon_shor parameters\n";
      return kUsage;
    }
    const auto sub = make_bacon_shor(n1, n2);
    if (format == "json") {
      json j{{"name", sub.name}, {"n", sub.n}, {"stabilizers", json::array()},
             {"gauge", json::array()},
             {"logical_x", sub.logical_x.format()},
             {"logical_z", sub.logical_z.format()}};
      for (const auto& g : sub.stabilizers) j["stabilizers"].push_back(g.format());
      for (const auto& g : sub.gauge) j["gauge"].push_back(g.format());
      out << j.dump(2) << "\n";
    } else {
      out << sub.name << "  n=" << sub.n << "\nstabilizers:\n";
      for (const auto& g : sub.stabilizers) out << "  " << g.format() << "\n";
      out << "gauge generators:\n";
      for (const auto& g : sub.gauge) out << "  " << g.format() << "\n";
      out << "logical X: " << sub.logical_x.format()
          << "\nlogical Z: " << sub.logical_z.format() << "\n";
    }
    return kOk;
  }
  if (name == "surface" || name.rfind("surface(", 0) == 0) {
    std::size_t N = 3;
    if (name != "surface" && std::sscanf(name.c_str(), "surface(%zu)", &N) != 1) {
      err << "codes: bad surface parameter\n";
      return kUsage;
    }
    const auto lat = make_surface(N);
    if (format == "json") {
      json j{{"name", "surface(" + std::to_string(N) + ")"},
             {"n", lat.n}, {"plaquettes", json::array()}, {"vertices", json::array()},
             {"logical_x", lat.logical_x.format()},
             {"logical_z", lat.logical_z.format()}};
      for (const auto& g : lat.plaquettes) j["plaquettes"].push_back(g.format());
      for (const auto& g : lat.vertices) j["vertices"].push_back(g.format());
      out << j.dump(2) << "\n";
    } else {
      out << "surface(" << N << ")  n=" << lat.n << "\nplaquettes (Z):\n";
      for (const auto& g : lat.plaquettes) out << "  " << g.format() << "\n";
      out << "vertices (X):\n";
      for (const auto& g : lat.vertices) out << "  " << g.format() << "\n";
      out << "logical X: " << lat.logical_x.format()
          << "\nlogical Z: " << lat.logical_z.format() << "\n";
    }
    return kOk;
  }
  auto code = detail::resolve_code(name);
  if (!code) {
    err << "codes: unknown code '" << name << "'\n";
    return kUsage;
  }
  if (format == "json") {
    json j{{"name", code->name}, {"n", code->n}, {"k", code->k}, {"d", code->d},
           {"css", code->css}, {"degenerate", code->degenerate},
           {"generators", json::array()}, {"logical_x", json::array()},
           {"logical_z", json::array()}};
    for (const auto& g : code->generators) j["generators"].push_back(g.format());
    for (const auto& g : code->logical_x) j["logical_x"].push_back(g.format());
    for (const auto& g : code->logical_z) j["logical_z"].push_back(g.format());
    out << j.dump(2) << "\n";
  } else {
    out << code->name << "  [[" << code->n << "," << code->k << "," << code->d
        << "]]\nstabilizer generators:\n";
    for (const auto& g : code->generators) out << "  " << g.format() << "\n";
    for (std::size_t a = 0; a < code->k; ++a)
      out << "logical X" << (code->k > 1 ? std::to_string(a + 1) : "") << ": "
          << code->logical_x[a].format() << "\nlogical Z"
          << (code->k > 1 ? std::to_string(a + 1) : "") << ": "
          << code->logical_z[a].format() << "\n";
  }
  return kOk;
}

inline int cmd_demo(const std::string& name, const std::string& error_str,
                    std::uint64_t seed, const std::string& format,
                    std::ostream& out, std::ostream& err) {
  using nlohmann::json;
  auto code = detail::resolve_code(name);
  if (!code) {
    err << "demo: unknown code '" << name << "'\n";
    return kUsage;
  }
  PauliTerm error(code->n);
  try {
    error = PauliTerm::parse(error_str);
  } catch (const std::exception& e) {
    err << "demo: bad error string: " << e.what() << "\n";
    return kUsage;
  }
  if (error.n() != code->n) {
    err << "demo: error length " << error.n() << " != n=" << code->n << "\n";
    return kUsage;
  }
  const auto syn = syndrome_of(*code, error);
  json j{{"seed", seed}, {"code", code->name}, {"error", error.format()},
         {"syndrome", detail::bits_string(syn)}};
  if (code->d < 3) {
    const auto verdict = detect_only(*code, syn);
    j["result"] = verdict == DetectOutcome::clean ? "clean" : "detected";
  } else {
    const auto table = build_lookup(*code);
    auto corr = table.lookup(syn);
    if (!corr) {
      j["correction"] = nullptr;
      j["result"] = "logical_failure";
    } else {
      j["correction"] = corr->format();
      const auto verdict = classify_residual(*code, multiply(error, *corr));
      j["result"] = verdict.success ? "success" : "logical_failure";
    }
  }
  if (format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << "# seed=" << seed << "\ncode:       " << code->name
        << "\nerror:      " << j["error"].get<std::string>()
        << "\nsyndrome:   " << j["syndrome"].get<std::string>() << "\n";
    if (j.contains("correction") && !j["correction"].is_null())
      out << "correction: " << j["correction"].get<std::string>() << "\n";
    out << "result:     " << j["result"].get<std::string>() << "\n";
  }
  return kOk;
}

inline int cmd_rate(const std::string& code_name, const std::string& channel_kind,
                    double p, std::size_t trials, std::uint64_t seed,
                    std::size_t workers, const std::string& format,
                    std::ostream& out, std::ostream& err) {
  using nlohmann::json;
  auto code = detail::resolve_code(code_name);
  if (!code) {
    err << "rate: unknown code '" << code_name << "'\n";
    return kUsage;
  }
  const auto channel = detail::make_channel(channel_kind, p);
  const auto rate = logical_error_rate(*code, channel, trials, seed, workers);
  if (format == "json") {
    json j{{"seed", seed}, {"code", code->name}, {"channel", channel_kind}, {"p", p},
           {"trials", rate.trials}, {"failures", rate.failures},
           {"estimate", rate.estimate},
           {"wilson_low", rate.wilson_low}, {"wilson_high", rate.wilson_high}};
    out << j.dump(2) << "\n";
  } else {
    out << "# seed=" << seed << "\n"
        << "code,channel,p,trials,failures,estimate,wilson_low,wilson_high\n"
        << code->name << "," << channel_kind << "," << detail::fmt(p) << ","
        << rate.trials << "," << rate.failures << "," << detail::fmt(rate.estimate)
        << "," << detail::fmt(rate.wilson_low) << "," << detail::fmt(rate.wilson_high)
        << "\n";
  }
  return kOk;
}

inline int cmd_scan(const std::vector<std::size_t>& n_list,
                    const std::vector<double>& p_list, std::size_t trials,
                    std::uint64_t seed, std::size_t workers,
                    const std::string& format, std::ostream& out) {
  using nlohmann::json;
  const auto cells = surface_scaling_scan(n_list, p_list, trials, seed, workers);
  if (format == "json") {
    json rows = json::array();
    for (const auto& c : cells)
      rows.push_back({{"N", c.N}, {"p", c.p}, {"trials", c.rate.trials},
                      {"failures", c.rate.failures}, {"estimate", c.rate.estimate},
                      {"wilson_low", c.rate.wilson_low},
                      {"wilson_high", c.rate.wilson_high}});
    out << json{{"seed", seed}, {"cells", rows}}.dump(2) << "\n";
  } else {
    out << "# seed=" << seed << "\n"
        << "N,p,trials,failures,estimate,wilson_low,wilson_high\n";
    for (const auto& c : cells)
      out << c.N << "," << detail::fmt(c.p) << "," << c.rate.trials << ","
          << c.rate.failures << "," << detail::fmt(c.rate.estimate) << ","
          << detail::fmt(c.rate.wilson_low) << "," << detail::fmt(c.rate.wilson_high)
          << "\n";
  }
  return kOk;
}

inline int cmd_ftcheck(const std::string& path, const std::string& format,
                       std::ostream& out, std::ostream& err) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) {
    err << "ftcheck: cannot open " << path << "\n";
    return kUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  // an empty circuit trivially satisfies the criterion
  if (text.find("QUBITS") == std::string::npos) {
    out << (format == "json" ? "{\"pass\": true}\n" : "pass (empty circuit)\n");
    return kOk;
  }
  Circuit circuit;
  try {
    circuit = Circuit::parse(text);
  } catch (const std::exception& e) {
    err << "ftcheck: " << e.what() << "\n";
    return kUsage;
  }
  if (circuit.locations.empty()) {
    out << (format == "json" ? "{\"pass\": true}\n" : "pass (empty circuit)\n");
    return kOk;
  }
  const auto report = check_fault_tolerance(circuit);
  if (format == "json") {
    json j{{"pass", report.pass}};
    if (!report.pass) {
      j["worst"] = {{"location", report.worst_location},
                    {"qubit", report.worst_qubit},
                    {"pauli", std::string(1, report.worst_pauli)},
                    {"block", report.worst_block},
                    {"block_weight", report.worst_block_weight},
                    {"residual_weight", report.worst_residual_weight}};
    }
    out << j.dump(2) << "\n";
  } else if (report.pass) {
    out << "pass\n";
  } else {
    out << "FAIL: " << report.worst_pauli << " fault after location "
        << report.worst_location << " on qubit " << report.worst_qubit
        << " leaves residual weight " << report.worst_residual_weight
        << " (weight " << report.worst_block_weight << " in block '"
        << report.worst_block << "')\n";
  }
  return report.pass ? kOk : kCheckFailed;
}

inline int cmd_prep(std::uint64_t seed, double noise_p, std::size_t max_rounds,
                    const std::string& format, std::ostream& out) {
  using nlohmann::json;
  std::mt19937_64 rng(splitmix64(seed));
  FtPrepOptions opt;
  opt.noise = PauliChannel::depolarizing(noise_p);
  opt.max_rounds = max_rounds;
  const auto result = ft_steane_prep(rng, opt);
  json hist = json::array();
  for (const auto& rounds : result.syndrome_history) hist.push_back(rounds);
  if (format == "json") {
    json j{{"seed", seed}, {"success", result.success},
           {"cat_attempts", result.cat_attempts},
           {"cat_rejections", result.cat_rejections},
           {"syndrome_history", hist}, {"majority", result.majority}};
    out << j.dump(2) << "\n";
  } else {
    out << "# seed=" << seed << "\nsuccess:        " << (result.success ? "yes" : "no")
        << "\ncat attempts:   " << result.cat_attempts
        << "\ncat rejections: " << result.cat_rejections << "\nsyndrome votes: ";
    for (auto b : result.majority) out << int(b);
    out << "\n";
  }
  return result.success ? kOk : kRuntime;
}

// ---------------------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"stabilizer-code laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  std::uint64_t seed = 0;
  std::size_t workers = 0;  // 0 = hardware concurrency
  app.add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--seed", seed);
  app.add_option("--workers", workers);

  auto* codes = app.add_subcommand("codes", "catalog");
  std::string codes_action, codes_name;
  codes->add_option("action", codes_action)->required()
       ->check(CLI::IsMember({"list", "show"}));
  codes->add_option("name", codes_name);

  auto* demo = app.add_subcommand("demo", "single-shot decode trace");
  std::string demo_code, demo_error;
  demo->add_option("--code", demo_code)->required();
  demo->add_option("--error", demo_error)->required();

  auto* rate = app.add_subcommand("rate", "Monte-Carlo logical error rate");
  std::string rate_code = "rep3", rate_channel = "bit_flip", rate_config;
  double rate_p = 0.1;
  std::size_t rate_trials = 10000;
  rate->add_option("--code", rate_code);
  rate->add_option("--channel", rate_channel);
  rate->add_option("--p", rate_p);
  rate->add_option("--trials", rate_trials);
  rate->add_option("--config", rate_config);

  auto* scan = app.add_subcommand("scan", "surface-code scaling scan");
  std::string scan_n = "2,3,4", scan_p = "0.05";
  std::size_t scan_trials = 2000;
  scan->add_option("--sizes", scan_n);
  scan->add_option("--rates", scan_p);
  scan->add_option("--trials", scan_trials);

  auto* ftcheck = app.add_subcommand("ftcheck", "single-fault criterion");
  std::string ft_file;
  ftcheck->add_option("--circuit", ft_file)->required();

  auto* prep = app.add_subcommand("prep", "fault-tolerant Steane |0> preparation");
  double prep_noise = 0.0;
  std::size_t prep_rounds = 64;
  prep->add_option("--noise", prep_noise);
  prep->add_option("--max-rounds", prep_rounds);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (codes->parsed()) {
      if (codes_action == "show" && codes_name.empty()) {
        err << "codes show: name required\n";
        return kUsage;
      }
      return cmd_codes(codes_action, codes_name, format, out, err);
    }
    if (demo->parsed()) return cmd_demo(demo_code, demo_error, seed, format, out, err);
    if (rate->parsed()) {
      if (!rate_config.empty()) {
        auto kv = detail::parse_config(rate_config);
        for (const auto& [k, v] : kv) {
          if (k == "code") rate_code = v;
          else if (k == "channel") rate_channel = v;
          else if (k == "p") rate_p = std::stod(v);
          else if (k == "trials") rate_trials = std::stoul(v);
          else if (k == "seed") seed = std::stoull(v);
          else if (k == "workers") workers = std::stoul(v);
          else {
            err << "rate: unknown config key '" << k << "'\n";
            return kUsage;
          }
        }
      }
      return cmd_rate(rate_code, rate_channel, rate_p, rate_trials, seed, workers,
                      format, out, err);
    }
    if (scan->parsed())
      return cmd_scan(detail::parse_size_list(scan_n), detail::parse_double_list(scan_p),
                      scan_trials, seed, workers, format, out);
    if (ftcheck->parsed()) return cmd_ftcheck(ft_file, format, out, err);
    if (prep->parsed()) return cmd_prep(seed, prep_noise, prep_rounds, format, out);
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace qeclab::cli
