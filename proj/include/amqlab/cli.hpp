#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "amqlab/blocked.hpp"
#include "amqlab/bloom.hpp"
#include "amqlab/counting_bloom.hpp"
#include "amqlab/quotient.hpp"

namespace amqlab::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kResourceGuard = 3,
};

struct CliConfig {
  std::string command;    // analyze | oracle | simulate | compare | conformance
  std::string structure;  // bloom | counting | quotient | blocked-bloom | blocked-counting | blocked-quotient
  std::optional<std::uint64_t> m;
  std::uint64_t k = 1;
  std::optional<unsigned> p;
  std::optional<unsigned> q;
  std::optional<unsigned> r;
  std::uint64_t blocks = 1;
  std::uint32_t bound = 15;
  std::uint64_t l = 0;
  std::optional<std::uint64_t> l_max;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 42;
  double z = 4.0;
  std::string format = "json";
  std::string out;  // empty: stdout
  bool inject_fault = false;
};

using AnyAmq = std::variant<BloomFilter, CountingBloomFilter, QuotientFilter, BlockedAmq<BloomFilter>,
                            BlockedAmq<CountingBloomFilter>, BlockedAmq<QuotientFilter>>;

/// Builds the selected structure; throws InvalidParameter on bad parameters.
AnyAmq make_structure(const CliConfig& config);

/// Runs one command and returns its rendered output; throws on usage errors
/// (InvalidParameter), resource guards (EnumerationTooLarge, InfeasibleExact).
/// `status` receives kOk or kCheckFailed.
std::string run_command(const CliConfig& config, int& status);

/// Full front end: argument parsing, output routing and exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace amqlab::cli
