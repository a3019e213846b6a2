#pragma once

// JSON instance files:
//
//     {"schema_version": 1, "n": 3, "edges": [[0, 1, 1.0], ...],
//      "convention": "H=-1/2*sum(J*s*s)", "label": "tri"}
//
// Edges are 0-indexed with i < j. Unknown keys are rejected.

#include <stdexcept>
#include <string>
#include <string_view>

#include "cimsolve/ising.hpp"

namespace cimsolve {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kConvention = "H=-1/2*sum(J*s*s)";

/// Malformed input file; the message says where.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `negate` applies J -> -J (inputs written for the +1/2 sum J s s convention).
IsingInstance parse_instance_json(std::string_view text, bool negate = false);
std::string instance_to_json(const IsingInstance& instance);

enum class InputFormat { json, gset };

/// Chooses by extension when `format` is empty: .json -> json, anything else -> gset.
InputFormat input_format(const std::string& path, std::string_view format = {});

/// Reads a JSON instance or a G-set graph (converted as MAXCUT). Throws
/// std::runtime_error when the file cannot be read and FormatError on bad content.
IsingInstance load_instance(const std::string& path, std::string_view format = {}, bool negate = false);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace cimsolve
