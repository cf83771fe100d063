#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "boxlab/box_measure.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/magic.hpp"
#include "boxlab/seminorm.hpp"
#include "boxlab/system.hpp"

namespace boxlab::io {

using nlohmann::json;

/// Unreadable file, invalid JSON, or a document that does not follow the
/// expected schema.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// {"points": n, "weights": ["1/4", ...], "transforms": [[...], ...],
///  "labels": [...]} (labels optional). Only the schema is checked here.
RawSystem parse_system(const json& doc);
Observable parse_observable(const json& doc);
SparseCubeMeasure parse_measure(const json& doc);

json read_json_file(const std::filesystem::path& path);

/// Rationals are JSON numbers or strings of the form "p/q" / "p".
Rational parse_rational_value(const json& v);

json to_json(const RawSystem& sys);
json to_json(const FiniteSystem& sys);
json to_json(const Observable& f);
json to_json(const SparseCubeMeasure& m);
json to_json(const Partition& p);
json to_json(const StarSystem& star);
json to_json(const SeminormValue& v);

/// Transform orders are written 1-based, matching T_1, ..., T_d.
json order_to_json(std::span<const std::size_t> order);

}  // namespace boxlab::io
