#include "toeplitz/rational.hpp"

namespace toeplitz {

std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

std::string numerator_string(const Rational& q) { return numerator(q).str(); }
std::string denominator_string(const Rational& q) { return denominator(q).str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace toeplitz
