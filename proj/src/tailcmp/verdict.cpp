#include "tailcmp/verdict.hpp"

namespace tailcmp {

const char *to_string(VerdictTag t) {
  switch (t) {
  case VerdictTag::Holds:
    return "Holds";
  case VerdictTag::Fails:
    return "Fails";
  case VerdictTag::Unresolved:
    return "Unresolved";
  }
  return "?";
}

Verdict Verdict::make_holds(std::string predicate, nlohmann::json certificate) {
  return Verdict{std::move(predicate), VerdictTag::Holds, nullptr, std::move(certificate)};
}

Verdict Verdict::make_fails(std::string predicate, nlohmann::json witness,
                            nlohmann::json certificate) {
  return Verdict{std::move(predicate), VerdictTag::Fails, std::move(witness),
                 std::move(certificate)};
}

Verdict Verdict::make_unresolved(std::string predicate, nlohmann::json certificate) {
  return Verdict{std::move(predicate), VerdictTag::Unresolved, nullptr, std::move(certificate)};
}

nlohmann::json to_json(const Verdict &v) {
  return nlohmann::json{{"predicate", v.predicate},
                        {"tag", to_string(v.tag)},
                        {"witness", v.witness},
                        {"certificate", v.certificate}};
}

VerdictTag combine(VerdictTag a, VerdictTag b) {
  if (a == VerdictTag::Fails || b == VerdictTag::Fails)
    return VerdictTag::Fails;
  if (a == VerdictTag::Unresolved || b == VerdictTag::Unresolved)
    return VerdictTag::Unresolved;
  return VerdictTag::Holds;
}

namespace {

// x rounded to `digits` significant decimal digits, toward -inf or +inf, as
// "d.ddd...e<exp>". The result parses back with parse_rat.
std::string decimal_bound(const BigRat &x, bool up, int digits) {
  if (x == 0)
    return "0";
  BigRat ax = abs(x);
  // floor(log10 |x|), corrected after a size-based estimate.
  long e10 = static_cast<long>(mpz_sizeinbase(ax.get_num().get_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(ax.get_den().get_mpz_t(), 10));
  auto pow10 = [](long e) {
    return e >= 0 ? BigRat(pow_int(10, static_cast<std::uint64_t>(e)))
                  : make_rat(1, pow_int(10, static_cast<std::uint64_t>(-e)));
  };
  while (ax < pow10(e10))
    --e10;
  while (ax >= pow10(e10 + 1))
    ++e10;
  const long shift = digits - 1 - e10;
  BigRat scaled = x * pow10(shift);
  BigInt q;
  if (up)
    mpz_cdiv_q(q.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  else
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  std::string mant = BigInt(abs(q)).get_str();
  long exp = static_cast<long>(mant.size()) - 1 - shift;
  std::string out = q < 0 ? "-" : "";
  out += mant.substr(0, 1);
  if (mant.size() > 1)
    out += "." + mant.substr(1);
  return out + "e" + std::to_string(exp);
}

} // namespace

nlohmann::json to_json(const CertInterval &x) {
  if (x.is_exact())
    return to_string(x.lo());
  std::string lo = to_string(x.lo());
  std::string hi = to_string(x.hi());
  constexpr std::size_t max_exact = 80;
  if (lo.size() > max_exact)
    lo = decimal_bound(x.lo(), false, 32);
  if (hi.size() > max_exact)
    hi = decimal_bound(x.hi(), true, 32);
  return nlohmann::json{{"lo", lo}, {"hi", hi}};
}

} // namespace tailcmp
