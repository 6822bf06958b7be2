#pragma once

#include <string>
#include <variant>

#include "repopt/lts.hpp"
#include "repopt/relu.hpp"
#include "repopt/trimmed_lasso.hpp"

namespace repopt {

using AnyInstance = std::variant<TrimmedLassoInstance, LtsInstance, ReluInstance>;

// Serializes an instance as a JSON object with fields
//   {type, m, n, params, seed, A, b}
// where A is stored as a flat row-major array and params holds the
// family-specific generator parameters.  Round-trips are lossless: doubles are
// written with enough digits to reproduce the exact bit pattern.
std::string instance_to_json(const AnyInstance& inst);
std::string instance_to_json(const TrimmedLassoInstance& inst);
std::string instance_to_json(const LtsInstance& inst);
std::string instance_to_json(const ReluInstance& inst);

// Parses an instance back from its JSON form.  Throws std::runtime_error on
// malformed input or an unknown "type" tag.
AnyInstance instance_from_json(const std::string& text);

// File convenience wrappers.  Throws std::runtime_error on I/O failure.
void write_instance_file(const std::string& path, const AnyInstance& inst);
AnyInstance read_instance_file(const std::string& path);

// Shared accessors over the variant.
int instance_dim(const AnyInstance& inst);
double instance_value(const AnyInstance& inst, const Eigen::VectorXd& x);
const Objective& instance_objective(const AnyInstance& inst);
std::string instance_type_name(const AnyInstance& inst);

}  // namespace repopt
