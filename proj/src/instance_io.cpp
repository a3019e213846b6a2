#include "cimsolve/instance_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cimsolve/gset.hpp"
#include "cimsolve/maxcut.hpp"

namespace cimsolve {

using nlohmann::json;

IsingInstance parse_instance_json(std::string_view text, bool negate) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("instance JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("instance JSON: top level must be an object");
  static const std::set<std::string> allowed{"schema_version", "n", "edges", "convention", "label"};
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw FormatError("instance JSON: unknown key '" + key + "'");
  }
  if (doc.contains("schema_version") && doc["schema_version"] != kSchemaVersion) {
    throw FormatError("instance JSON: unsupported schema_version " + doc["schema_version"].dump());
  }
  if (doc.contains("convention") && doc["convention"] != kConvention) {
    throw FormatError("instance JSON: convention must be \"" + std::string(kConvention) +
                      "\"; convert other conventions with the negate flag");
  }
  if (!doc.contains("n") || !doc["n"].is_number_unsigned()) throw FormatError("instance JSON: 'n' must be a non-negative integer");
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw FormatError("instance JSON: 'edges' must be an array");
  const auto n = doc["n"].get<std::size_t>();

  std::vector<Coupling> couplings;
  std::size_t k = 0;
  for (const json& e : doc["edges"]) {
    const std::string where = "instance JSON: edge " + std::to_string(k++);
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned() ||
        !e[2].is_number()) {
      throw FormatError(where + " must be [i, j, J]");
    }
    const auto i = e[0].get<std::size_t>(), j = e[1].get<std::size_t>();
    if (!(i < j)) throw FormatError(where + " needs i < j");
    if (j >= n) throw FormatError(where + " index out of range");
    const double v = e[2].get<double>();
    couplings.push_back({i, j, negate ? -v : v});
  }
  std::string label = doc.value("label", std::string{});
  try {
    return IsingInstance(n, couplings, std::move(label));
  } catch (const std::invalid_argument& err) {
    throw FormatError(std::string("instance JSON: ") + err.what());
  }
}

std::string instance_to_json(const IsingInstance& instance) {
  json edges = json::array();
  for (const Coupling& c : instance.edges()) edges.push_back({c.i, c.j, c.value});
  json doc{{"schema_version", kSchemaVersion},
           {"n", instance.size()},
           {"convention", kConvention},
           {"label", instance.label()},
           {"edges", std::move(edges)}};
  return doc.dump(2) + "\n";
}

InputFormat input_format(const std::string& path, std::string_view format) {
  if (format == "json") return InputFormat::json;
  if (format == "gset") return InputFormat::gset;
  if (!format.empty()) throw std::invalid_argument("unknown input format '" + std::string(format) + "'");
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0 ? InputFormat::json : InputFormat::gset;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

IsingInstance load_instance(const std::string& path, std::string_view format, bool negate) {
  const std::string text = read_file(path);
  if (input_format(path, format) == InputFormat::json) return parse_instance_json(text, negate);
  const GsetFile file = parse_gset(text);
  IsingInstance inst = maxcut_to_ising(gset_graph(file)).instance;
  std::string label = path.substr(path.find_last_of('/') + 1);
  return (negate ? inst.negated() : inst).with_label(std::move(label));
}

}  // namespace cimsolve
