#pragma once

// System files: a JSON document with q, r, s, d and the polynomials as term lists.
//
//   {
//     "q": 5, "r": 3, "s": 2, "d": 2,
//     "polynomials": [
//       [
//         {"c": 1, "e": [0, 1, 0]}
//       ],
//       ...
//     ]
//   }
//
// Terms may also be given as strings "c e1 ... er". Output is canonical: terms
// in graded-lex descending order, one per line, so write(read(write(x))) == write(x).

#include <string>
#include <vector>

#include "svs/sampler.hpp"
#include "svs/zdsolve.hpp"

namespace svs {

std::string write_system_file(const SystemSpec& sys);

/// Parses and validates the usual 1 < s < r shape.
SystemSpec read_system_file(const std::string& text);

/// Square systems (r = s allowed) for the point-counting oracle.
ZeroDimQuery read_query_file(const std::string& text);

/// "c1,c2;c1,c2" -> strips of the given length with coordinates in [0, q).
std::vector<Strip> parse_strips(const std::string& text, unsigned length, const FieldCtx& ctx);

/// Writes through a temporary file in the same directory and renames it into place.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace svs
