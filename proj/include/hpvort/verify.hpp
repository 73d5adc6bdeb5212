#pragma once
/// @file verify.hpp
/// Named self-check suites of the library's invariants.

#include <iosfwd>
#include <string>
#include <vector>

namespace hpv {

const std::vector<std::string>& verify_suites();

/// Runs one suite (or "all"), printing one PASS/FAIL line per property with
/// the measured value and its tolerance. Returns 0 when everything passed,
/// 1 on any failure, 2 for an unknown suite name.
int run_verify(const std::string& suite, std::ostream& out);

}  // namespace hpv
