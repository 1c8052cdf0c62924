#ifndef GWB_RATIONAL_HPP
#define GWB_RATIONAL_HPP

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace gwb {

/// Exact rational scalar used for all measure-theoretic data.
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" into a canonical rational.
inline Rational parse_rational(const std::string& text) {
    Rational q;
    if (text.empty() || q.set_str(text, 10) != 0)
        throw std::invalid_argument("malformed rational: '" + text + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator: '" + text + "'");
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

} // namespace gwb

#endif
