#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace kmfp::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kConfigError = 2, kBudgetExhausted = 3 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::optional<double> eta;
  std::string out;  // empty: write to the console stream
};

/// A parsed config plus the SHA-256 of its exact bytes.
struct Config {
  nlohmann::json json;
  std::string sha256;
};

Config load_config(const std::string& path);
Config config_from_text(const std::string& text);
std::string sha256_hex(const std::string& bytes);

// Every command writes its main output to opts.out (or `out`) and
// diagnostics to `err`, and returns an ExitCode.
int cmd_axioms(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_iterate(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_rates(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_product(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_uafpp(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace kmfp::cli
