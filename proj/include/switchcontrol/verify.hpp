#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace swc::verify {

struct Options {
  std::uint64_t seed = 20190101;
  int count = 1000;
  /// Scale the switching threshold used by the closed forms (fault injection).
  double threshold_scale = 1.0;
};

struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  std::string first_failure;  // includes the draw index and seed to reproduce
  double seconds = 0.0;

  bool passed() const { return failures == 0; }
};

// Individual suites. Each makes `count` random draws from a stream derived
// from `seed` and the suite name.
SuiteResult oracle_switching(const Options& o);
SuiteResult oracle_scalar(const Options& o);
SuiteResult my_contracts_switching(const Options& o);
SuiteResult my_contracts_scalar(const Options& o);
SuiteResult newton_fd(const Options& o);
SuiteResult biconjugate(const Options& o);
SuiteResult gap_bounds(const Options& o);
SuiteResult classification(const Options& o);
SuiteResult adjoint(const Options& o);

struct Suite {
  std::string name;
  std::function<SuiteResult(const Options&)> run;
};

const std::vector<Suite>& all_suites();

std::vector<SuiteResult> run_all(const Options& o);

}  // namespace swc::verify
