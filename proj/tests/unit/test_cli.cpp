#include <doctest.h>

#include <sstream>

#include "cli/commands.hpp"

using namespace kmfp::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(int (*cmd)(const Config&, const Options&, std::ostream&, std::ostream&), const std::string& text,
        Options opts = {}) {
  std::ostringstream out, err;
  const int code = cmd(config_from_text(text), opts, out, err);
  return {code, out.str(), err.str()};
}

const char* kSchedule =
    R"("schedule": {"lambda": {"kind": "constant", "value": "1/2"}, "K": 2, "alpha": {"kind": "linear", "c": "2"}})";

}  // namespace

TEST_CASE("hash") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(config_from_text("{}").sha256 == sha256_hex("{}"));
  CHECK_THROWS(config_from_text("[1]"));
  CHECK_THROWS(config_from_text("{"));
}

TEST_CASE("axioms") {
  CHECK(run(cmd_axioms, R"({"space": {"kind": "euclidean", "n": 2}})").code == kOk);
  const auto broken = run(cmd_axioms, R"({"space": {"kind": "broken_w", "base": {"kind": "euclidean", "n": 2}}})");
  CHECK(broken.code == kViolation);
  CHECK(broken.err.find("W2") != std::string::npos);
  CHECK(run(cmd_axioms, R"({"space": {"n": 2}})").code == kConfigError);
  CHECK(run(cmd_axioms, R"({"samples": 3})").code == kConfigError);
}

TEST_CASE("iterate") {
  const std::string cfg = std::string(R"({"space": {"kind": "real_line"}, "map": {"kind": "translate", "shift": [1]},
    "x0": [0], "steps": 3, )") + kSchedule + "}";
  const auto r = run(cmd_iterate, cfg);
  CHECK(r.code == kOk);
  const auto body = r.out.substr(r.out.find('\n') + 1);
  CHECK(body == "n,residual,x\n0,1,0\n1,1,0.5\n2,1,1\n3,1,1.5\n");
  CHECK(r.out.rfind("# kmfp ", 0) == 0);
  CHECK(r.out.find(config_from_text(cfg).sha256) != std::string::npos);

  Options tight;
  tight.budget = 2;
  CHECK(run(cmd_iterate, cfg, tight).code == kConfigError);

  const std::string bad = R"({"space": {"kind": "real_line"}, "map": {"kind": "identity"}, "x0": [0], "steps": 3,
    "schedule": {"lambda": {"kind": "constant", "value": "1"}, "K": 2}})";
  CHECK(run(cmd_iterate, bad).code == kConfigError);
}

TEST_CASE("rates") {
  const auto r = run(cmd_rates, R"({"epsilon": "4", "b": "1", "K": 1, "alpha": {"kind": "identity"}})");
  CHECK(r.code == kOk);
  CHECK(r.out.rfind("h = 30\n", 0) == 0);
  CHECK(run(cmd_rates, R"({"epsilon": "4"})").code == kConfigError);
  CHECK(run(cmd_rates, R"({"epsilon": "-1", "b": 1})").code == kConfigError);
}

TEST_CASE("product") {
  const std::string base = std::string(R"({
    "product": {"kind": "product", "C": {"kind": "interval", "a": 0, "b": 1}, "M": {"kind": "interval", "a": 0, "b": 1}},
    "map": {"kind": "diagonal_average"}, "selection": {"kind": "identity"}, "oracle": {"kind": "grid"},
    "b": "1", "epsilon": "1/100", "seed": 7, )") + kSchedule;
  const auto ok = run(cmd_product, base + R"(, "budget": 300})");
  CHECK(ok.code == kOk);
  const auto doc = nlohmann::json::parse(ok.out);
  CHECK(doc["status"] == "certified");
  CHECK(doc["certificate"]["residual"] == "0");
  CHECK(doc["config_sha256"].get<std::string>().size() == 64);
  CHECK(doc.contains("artifact_version"));
  CHECK(run(cmd_product, base + R"(, "budget": 300})").out == ok.out);
  CHECK(run(cmd_product, base + R"(, "budget": 20})").code == kConfigError);
  CHECK(run(cmd_product, base + R"(, "budget": 300, "mode": "neither"})").code == kConfigError);
}

TEST_CASE("product budget exhaustion") {
  const std::string cfg = R"({
    "product": {"kind": "product", "C": {"kind": "interval", "a": 0, "b": 10}, "M": {"kind": "interval", "a": 0, "b": 1}},
    "map": {"kind": "coordinatewise", "first": {"kind": "clamped_translate", "shift": -1, "lo": 0, "hi": 10},
            "second": {"kind": "identity"}},
    "selection": {"kind": "constant", "point": [5]},
    "schedule": {"lambda": {"kind": "constant", "value": "1/100"}, "K": 2, "alpha": {"kind": "linear", "c": "100"}},
    "oracle": {"kind": "grid"}, "b": "5", "epsilon": "1/100", "budget": 120})";
  const auto r = run(cmd_product, cfg);
  CHECK(r.code == kBudgetExhausted);
  CHECK(nlohmann::json::parse(r.out)["status"] == "budget_exhausted");
}

TEST_CASE("uafpp") {
  const std::string cfg = std::string(R"({"modulus": {"kind": "banach", "k": "1/2"},
    "goebel_kirk": {"space": {"kind": "real_line"}, "D1": 1, "samples": 10, "pairs": [[[0], [10]]]}, )") +
                          kSchedule + "}";
  const auto r = run(cmd_uafpp, cfg);
  CHECK(r.code == kViolation);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK_FALSE(doc["goebel_kirk"]["passed"].get<bool>());
  CHECK(doc["modulus"]["table"][0]["D"] == "1");
  CHECK(run(cmd_uafpp, std::string(R"({"modulus": {"kind": "banach", "k": 2}, )") + kSchedule + "}").code ==
        kConfigError);
}
