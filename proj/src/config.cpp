#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "mds/cli.hpp"

namespace mds {

namespace {

struct TolField {
  const char* name;
  std::function<double()> get;
  std::function<void(double)> set;
};

template <class T>
TolField field(const char* name, T Tolerances::*m) {
  return {name, [m] { return static_cast<double>(tolerances().*m); },
          [m](double v) { tolerances().*m = static_cast<T>(v); }};
}

const std::vector<TolField>& tol_fields() {
  static const std::vector<TolField> fields = {
      field("zeta_tail", &Tolerances::zeta_tail),
      field("kseries_tail", &Tolerances::kseries_tail),
      field("mellin_abs", &Tolerances::mellin_abs),
      field("euler_tail", &Tolerances::euler_tail),
      field("euler_prime_cutoff", &Tolerances::euler_prime_cutoff),
      field("afe_length_factor", &Tolerances::afe_length_factor),
      field("afe_kernel_floor", &Tolerances::afe_kernel_floor),
      field("sieve_max", &Tolerances::sieve_max),
      field("gauss_abs", &Tolerances::gauss_abs),
      field("fe_abs", &Tolerances::fe_abs),
      field("tdiag_vs_tfact", &Tolerances::tdiag_vs_tfact),
      field("identity_abs", &Tolerances::identity_abs),
      field("band_halfwidth", &Tolerances::band_halfwidth),
      field("poly_residual_ratio", &Tolerances::poly_residual_ratio),
  };
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (seps.find(ch) != std::string::npos) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& s) {
  double v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || s.empty()) throw DomainError("not a number: '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  long long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || s.empty()) throw DomainError("not an integer: '" + s + "'");
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw MdsError("format_double: conversion failed");
  return std::string(buf, p);
}

std::vector<cplx> parse_point_list(const std::string& s) {
  std::vector<cplx> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ";")) {
    auto parts = split(item, ",");
    if (parts.size() > 2) throw DomainError("point '" + item + "' is not re[,im]");
    out.emplace_back(parse_double(parts[0]), parts.size() == 2 ? parse_double(parts[1]) : 0.0);
  }
  return out;
}

std::string format_point_list(const std::vector<cplx>& S) {
  std::string s;
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (i) s += ';';
    s += format_double(S[i].real()) + ',' + format_double(S[i].imag());
  }
  return s;
}

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ",;")) out.push_back(parse_double(item));
  return out;
}

void apply_tolerances(const std::map<std::string, double>& overrides) {
  for (const auto& [name, value] : overrides) {
    bool found = false;
    for (const auto& f : tol_fields())
      if (name == f.name) {
        if (!(value > 0) || !std::isfinite(value)) throw DomainError("tolerance " + name + " must be positive");
        f.set(value);
        found = true;
      }
    if (!found) throw DomainError("unknown tolerance '" + name + "'");
  }
}

std::string describe_tolerances() {
  std::string s;
  for (const auto& f : tol_fields()) s += std::string(f.name) + "=" + format_double(f.get()) + "\n";
  return s;
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  os << "subcommand=" << c.subcommand << '\n'
     << "suite=" << c.suite << '\n'
     << "k=" << c.k << '\n'
     << "s=" << format_point_list(c.S) << '\n';
  os << "x_list=";
  for (std::size_t i = 0; i < c.x_list.size(); ++i) os << (i ? "," : "") << format_double(c.x_list[i]);
  os << '\n'
     << "eta=" << format_double(c.eta) << '\n'
     << "n_scale=" << format_double(c.n_scale) << '\n'
     << "f=" << c.f_id << '\n'
     << "w=" << c.w_id << '\n'
     << "max_swap=" << c.max_swap << '\n'
     << "workers=" << c.workers << '\n'
     << "seed=" << c.seed << '\n';
  for (const auto& [name, value] : c.tolerance) os << "tolerance." << name << '=' << format_double(value) << '\n';
  os << "golden=" << c.golden << '\n'
     << "out=" << c.out << '\n'
     << "dry_run=" << (c.dry_run ? 1 : 0) << '\n';
  return os.str();
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    try {
      if (key == "subcommand") c.subcommand = val;
      else if (key == "suite") c.suite = val;
      else if (key == "k") c.k = static_cast<int>(parse_int(val));
      else if (key == "s") c.S = parse_point_list(val);
      else if (key == "x_list") c.x_list = parse_real_list(val);
      else if (key == "eta") c.eta = parse_double(val);
      else if (key == "n_scale") c.n_scale = parse_double(val);
      else if (key == "f") c.f_id = val;
      else if (key == "w") c.w_id = val;
      else if (key == "max_swap") c.max_swap = static_cast<int>(parse_int(val));
      else if (key == "workers") c.workers = static_cast<int>(parse_int(val));
      else if (key == "seed") c.seed = static_cast<u64>(parse_int(val));
      else if (key.rfind("tolerance.", 0) == 0) c.tolerance[key.substr(10)] = parse_double(val);
      else if (key == "golden") c.golden = val;
      else if (key == "out") c.out = val;
      else if (key == "dry_run") c.dry_run = parse_int(val) != 0;
      else throw DomainError("unknown key '" + key + "'");
    } catch (const DomainError& e) {
      throw DomainError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

}  // namespace mds
