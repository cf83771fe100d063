#include "boxlab/io.hpp"

#include <fstream>
#include <sstream>

namespace boxlab::io {

namespace {

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return doc.at(key);
}

std::vector<Rational> parse_rational_array(const json& arr, const char* what) {
  if (!arr.is_array()) throw ParseError(std::string("\"") + what + "\" must be an array");
  std::vector<Rational> out;
  out.reserve(arr.size());
  for (const auto& v : arr) out.push_back(parse_rational_value(v));
  return out;
}

json rational_array(std::span<const Rational> v) {
  json arr = json::array();
  for (const auto& q : v) arr.push_back(to_string(q));
  return arr;
}

json permutation_array(std::span<const Permutation> ts) {
  json arr = json::array();
  for (const auto& t : ts) arr.push_back(std::vector<PointId>(t.images().begin(), t.images().end()));
  return arr;
}

}  // namespace

Rational parse_rational_value(const json& v) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return parse_rational(std::to_string(v.get<std::int64_t>()));
  } catch (const StructuralError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("expected a rational string \"p/q\" or an integer, got " + v.dump());
}

RawSystem parse_system(const json& doc) {
  RawSystem raw;
  const auto& points = require(doc, "points");
  if (!points.is_number_integer()) throw ParseError("\"points\" must be an integer");
  raw.points = points.get<std::int64_t>();
  raw.weights = parse_rational_array(require(doc, "weights"), "weights");
  const auto& ts = require(doc, "transforms");
  if (!ts.is_array()) throw ParseError("\"transforms\" must be an array");
  for (const auto& t : ts) {
    if (!t.is_array()) throw ParseError("each transform must be an array of integers");
    std::vector<std::int64_t> arr;
    for (const auto& x : t) {
      if (!x.is_number_integer()) throw ParseError("each transform must be an array of integers");
      arr.push_back(x.get<std::int64_t>());
    }
    raw.transforms.push_back(std::move(arr));
  }
  if (doc.contains("labels")) {
    const auto& labels = doc.at("labels");
    if (!labels.is_array()) throw ParseError("\"labels\" must be an array of strings");
    for (const auto& l : labels) {
      if (!l.is_string()) throw ParseError("\"labels\" must be an array of strings");
      raw.labels.push_back(l.get<std::string>());
    }
  }
  return raw;
}

Observable parse_observable(const json& doc) {
  auto values = parse_rational_array(require(doc, "values"), "values");
  std::optional<Rational> bound;
  if (doc.contains("sup_bound")) bound = parse_rational_value(doc.at("sup_bound"));
  return Observable(std::move(values), std::move(bound));
}

SparseCubeMeasure parse_measure(const json& doc) {
  const auto& kj = require(doc, "k");
  if (!kj.is_number_unsigned()) throw ParseError("\"k\" must be a non-negative integer");
  const auto k = kj.get<unsigned>();
  const auto& entries = require(doc, "entries");
  if (!entries.is_array()) throw ParseError("\"entries\" must be an array");
  std::vector<PointId> tuples;
  std::vector<Rational> masses;
  PointId max_id = 0;
  for (const auto& e : entries) {
    const auto& t = require(e, "tuple");
    if (!t.is_array() || t.size() != (std::size_t{1} << k)) throw ParseError("tuple length must be 2^k");
    for (const auto& x : t) {
      if (!x.is_number_unsigned()) throw ParseError("tuple entries must be point ids");
      tuples.push_back(x.get<PointId>());
      max_id = std::max(max_id, tuples.back());
    }
    masses.push_back(parse_rational_value(require(e, "mass")));
  }
  std::size_t base_n = doc.contains("base_n") ? doc.at("base_n").get<std::size_t>() : std::size_t{max_id} + 1;
  return SparseCubeMeasure(k, base_n, std::move(tuples), std::move(masses));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json to_json(const RawSystem& sys) {
  json doc;
  doc["points"] = sys.points;
  doc["weights"] = rational_array(sys.weights);
  doc["transforms"] = sys.transforms;
  if (!sys.labels.empty()) doc["labels"] = sys.labels;
  return doc;
}

json to_json(const FiniteSystem& sys) {
  json doc;
  doc["points"] = sys.size();
  doc["weights"] = rational_array(sys.weights());
  doc["transforms"] = permutation_array(sys.transforms());
  if (!sys.labels().empty()) doc["labels"] = std::vector<std::string>(sys.labels().begin(), sys.labels().end());
  return doc;
}

json to_json(const Observable& f) {
  json doc;
  doc["values"] = rational_array(f.values());
  return doc;
}

json to_json(const SparseCubeMeasure& m) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto t = m.tuple(i);
    entries.push_back({{"tuple", std::vector<PointId>(t.begin(), t.end())}, {"mass", to_string(m.mass(i))}});
  }
  return {{"k", m.k()}, {"entries", std::move(entries)}};
}

json to_json(const Partition& p) { return p.cells(); }

json to_json(const StarSystem& star) {
  json carrier = json::array();
  for (std::size_t i = 0; i < star.size(); ++i) {
    auto t = star.tuple(i);
    carrier.push_back(std::vector<PointId>(t.begin(), t.end()));
  }
  json doc;
  doc["carrier"] = std::move(carrier);
  doc["weights"] = rational_array(star.weights());
  doc["star_transforms"] = permutation_array(star.star_transforms());
  doc["diag_transforms"] = permutation_array(star.diag_transforms());
  doc["order"] = order_to_json(star.order());
  return doc;
}

json to_json(const SeminormValue& v) {
  return {{"pow", to_string(v.pow)}, {"root_approx", to_decimal(v.root())}, {"d", v.d},
          {"order", order_to_json(v.order)}};
}

json order_to_json(std::span<const std::size_t> order) {
  json arr = json::array();
  for (auto t : order) arr.push_back(t + 1);
  return arr;
}

}  // namespace boxlab::io
