#pragma once

#include "ampec/instance.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ampec {

/// Instance file format (JSON, version 1):
///
///   {
///     "format": "ampec-instance", "version": 1,
///     "n": <int>, "m": <int>,
///     "A": [n*n numbers, row-major], "B": [n*m numbers, row-major],
///     "a": [n], "x_lo": [n], "x_hi": [n], "y_lo": [m], "y_hi": [m],
///     "Q1": [n*n, row-major], "Q2": [m*m, row-major], "q1": [n], "q2": [m],
///     "nash_cournot": {                         // optional provenance
///       "alpha": <num>, "beta": <num>, "c": [n*m, row-major],
///       "eta": [n], "xi": [m]
///     }
///   }
///
/// Numbers are written with the shortest decimal form that reads back to
/// the same double, so parse(serialize(inst)) is bit-exact. Keys are emitted
/// in sorted order with no whitespace; that string is the canonical form
/// hashed by instance_digest.
std::string serialize_instance(const Instance& inst);

/// Throws ParseError with line/field context on malformed input, and
/// std::invalid_argument if the data violates an Instance invariant.
Instance parse_instance(const std::string& text);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string instance_digest(const Instance& inst);
std::uint64_t fnv1a64(const std::string& bytes);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ampec
