#include "amd/rational.hpp"

#include "amd/errors.hpp"

namespace amd {

Rational parse_rational(std::string_view text, std::string_view what) {
  std::string trimmed;
  trimmed.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
  if (trimmed.empty())
    throw InputError("empty rational for " + std::string(what));

  Rational q;
  if (mpq_set_str(q.get_mpq_t(), trimmed.c_str(), 10) != 0)
    throw InputError("malformed rational \"" + std::string(text) + "\" for " +
                     std::string(what));
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
    throw InputError("zero denominator in \"" + std::string(text) + "\" for " +
                     std::string(what));
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_str();
}

}  // namespace amd
