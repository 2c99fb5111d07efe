#pragma once

#include <json.hpp>

#include <string>

#include "tailcmp/exact.hpp"

namespace tailcmp {

enum class VerdictTag { Holds, Fails, Unresolved };

const char *to_string(VerdictTag t);

/// Outcome of a decision procedure. Fails always carries a witness that can be
/// re-checked by evaluating the named predicate again at that point.
struct Verdict {
  std::string predicate;
  VerdictTag tag = VerdictTag::Unresolved;
  nlohmann::json witness;     // null unless Fails
  nlohmann::json certificate; // route-specific evidence, may be null

  bool holds() const { return tag == VerdictTag::Holds; }
  bool fails() const { return tag == VerdictTag::Fails; }
  bool unresolved() const { return tag == VerdictTag::Unresolved; }

  static Verdict make_holds(std::string predicate, nlohmann::json certificate = {});
  static Verdict make_fails(std::string predicate, nlohmann::json witness,
                            nlohmann::json certificate = {});
  static Verdict make_unresolved(std::string predicate, nlohmann::json certificate = {});
};

/// {"predicate", "tag", "witness", "certificate"}
nlohmann::json to_json(const Verdict &v);

/// Fails if either side fails, otherwise Unresolved if either is.
VerdictTag combine(VerdictTag a, VerdictTag b);

/// Exact intervals print as "num/den", others as {"lo", "hi"}. Endpoints too
/// long to print exactly are rounded outward to 32 significant digits, so the
/// printed interval still encloses the value.
nlohmann::json to_json(const CertInterval &x);

} // namespace tailcmp
