#pragma once

#include "hlsum/forms.hpp"

#include <string>

namespace hlsum {

/**
 * JSON form files. Two storage layouts:
 *
 *   {"m": 2, "n": 2, "scalar": "real", "storage": "dense",
 *    "coefficients": [1.0, 2.0, 3.0, 4.0]}                    (row-major, n^m)
 *
 *   {"m": 2, "n": 3, "scalar": "real", "storage": "sparse",
 *    "entries": [[1, 1, 1.0], [2, 3, -0.5]]}                  (1-based indices)
 *
 * Sparse entries not listed are 0. Indices are 1-based in the file format
 * (0-based in the C++ API). Readers reject NaN/Inf coefficients, duplicate
 * sparse entries, and out-of-range indices; parse failures name the
 * offending field. Sparse forms load as procedural lookups and never
 * materialize n^m entries.
 */
MultilinearForm read_form_json(const std::string& text);
MultilinearForm load_form(const std::string& path);

// `sparse` keeps only nonzero entries; dense output requires the n^m guard.
std::string form_to_json(const MultilinearForm& form, bool sparse);
void save_form(const MultilinearForm& form, const std::string& path, bool sparse);

}  // namespace hlsum
