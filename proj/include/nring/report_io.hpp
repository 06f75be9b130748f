#pragma once

#include <string>

#include "json.hpp"
#include "nring/direct_method.hpp"
#include "nring/verifiers.hpp"

namespace nring {

// Ordered JSON keeps key order stable so serialized reports are
// byte-identical across runs.
using ojson = nlohmann::ordered_json;

ojson to_json(const element& e);
ojson to_json(const schedule& s);
ojson to_json(const iterate_record& r);
ojson to_json(const iteration_trace& t);
ojson to_json(const defect_report& r);

// Shortest round-trip decimal for a double, NaN/inf spelled out.
std::string format_double(double v);

// CSV rendering of defect reports: one row per report under a fixed
// header. Witness tuples are packed as space-separated coordinates with
// '|' between tuple members.
std::string csv_header();
std::string csv_row(const defect_report& r);

// Tabular view of an iteration trace: m, step_norm, value_norm, value
// (coordinates space-separated). The verdict travels out of band.
std::string trace_csv(const iteration_trace& t);

}  // namespace nring
