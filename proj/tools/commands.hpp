#pragma once

#include "qop/json_out.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qop::cli {

// Bad configuration; the message names the offending field.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double ybe = 1e-11;
  double commute = 1e-10;
  double qq = 1e-9;
  double tqq = 1e-10;
  double xqqq = 1e-8;
  double fact = 1e-10;
  double fact_exact = 1e-12;
  double boundary = 1e-12;
  double energy = 1e-7;
  double bethe = 1e-7;

  json to_json() const;
  void set_all(double v);
  // key without the "tol_" prefix; returns false for unknown keys
  bool set(const std::string &key, double v);
};

struct Config {
  int n = 2;
  int m = 1;
  std::optional<int> L;         // per-command default when unset
  std::string twists = "generic";  // generic | zero | comma-separated radians
  std::string subset;           // "1,3"; "" or "{}" is the empty set
  std::vector<cplx> z;          // empty: seeded random samples
  std::string suite = "all";
  std::uint64_t seed = 42;
  Tolerances tol;
  std::string out = ".";
  int cutoff = 24;              // Fock truncation for windowed factorization checks

  Grading grading() const;
  int length(int fallback) const { return L.value_or(fallback); }
  bool zero_twist() const { return twists == "zero"; }
  Twists twist_config() const;  // validated against n+m
  Subset subset_config() const;
  json echo() const;
};

// Flat key-value JSON; unknown keys rejected.
void apply_config_file(Config &cfg, const std::string &path);
cplx parse_complex(const std::string &s);  // "0.3" or "0.3,-0.2"

int cmd_verify(const Config &cfg);
int cmd_spectrum(const Config &cfg);
int cmd_tj_demo(const Config &cfg);
int cmd_export_operator(const Config &cfg);
int cmd_hasse(const Config &cfg);

}  // namespace qop::cli
