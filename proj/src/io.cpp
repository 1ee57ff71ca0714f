#include "oeq/io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

namespace oeq {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw FileFormatError(where + ": " + what);
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw FileFormatError(std::string("invalid JSON: ") + err.what());
  }
}

const Json& require(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object()) fail(where, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

void reject_unknown(const Json& object, std::initializer_list<const char*> known,
                    const std::string& where) {
  if (!object.is_object()) fail(where, "expected an object");
  for (const auto& item : object.items()) {
    const bool ok = std::any_of(known.begin(), known.end(), [&](const char* key) {
      return item.key() == key;
    });
    if (!ok) fail(where, "unknown field '" + item.key() + "'");
  }
}

int parse_version(const Json& object, const std::string& where) {
  const Json& v = require(object, "version", where);
  if (!v.is_number_integer()) fail(where, "field 'version' must be an integer");
  const int version = v.get<int>();
  if (version != kFileVersion) {
    fail(where, "unsupported version " + std::to_string(version) + ", expected " +
                    std::to_string(kFileVersion));
  }
  return version;
}

Index parse_dim(const Json& value, const char* key, const std::string& where) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    fail(where, std::string("field '") + key + "' must be a nonnegative integer");
  }
  return static_cast<Index>(value.get<long long>());
}

Vec parse_vector(const Json& value, Index expected, const std::string& where) {
  if (!value.is_array()) fail(where, "expected an array of numbers");
  if (static_cast<Index>(value.size()) != expected) {
    fail(where, "expected " + std::to_string(expected) + " numbers, got " +
                    std::to_string(value.size()));
  }
  Vec out(expected);
  for (Index i = 0; i < expected; ++i) {
    const Json& entry = value[static_cast<std::size_t>(i)];
    if (!entry.is_number()) {
      fail(where, "entry " + std::to_string(i) + " is not a number");
    }
    out(i) = entry.get<double>();
  }
  return out;
}

// rows x cols matrix given as a list of rows.
Mat parse_matrix(const Json& value, Index rows, Index cols, const std::string& where) {
  if (!value.is_array()) fail(where, "expected an array of rows");
  if (static_cast<Index>(value.size()) != rows) {
    fail(where, "expected " + std::to_string(rows) + " rows, got " +
                    std::to_string(value.size()));
  }
  Mat out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    out.row(i) = parse_vector(value[static_cast<std::size_t>(i)], cols,
                              where + ", row " + std::to_string(i))
                     .transpose();
  }
  return out;
}

// Basis given as a list of vectors; stored as matrix columns.
Mat parse_basis(const Json& value, Index ambient_dim, const std::string& where) {
  if (!value.is_array()) fail(where, "expected an array of vectors");
  Mat out(ambient_dim, static_cast<Index>(value.size()));
  for (Index j = 0; j < out.cols(); ++j) {
    out.col(j) = parse_vector(value[static_cast<std::size_t>(j)], ambient_dim,
                              where + ", vector " + std::to_string(j));
  }
  return out;
}

std::vector<Sample> parse_samples(const Json& value, Index in_dim, Index out_dim,
                                  const std::string& where) {
  if (!value.is_array()) fail(where, "expected an array of samples");
  std::vector<Sample> samples;
  samples.reserve(value.size());
  for (std::size_t k = 0; k < value.size(); ++k) {
    const std::string entry = where + "[" + std::to_string(k) + "]";
    const Json& item = value[k];
    reject_unknown(item, {"in", "out"}, entry);
    samples.push_back(Sample{parse_vector(require(item, "in", entry), in_dim,
                                          entry + ".in"),
                             parse_vector(require(item, "out", entry), out_dim,
                                          entry + ".out")});
  }
  return samples;
}

Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json matrix_to_json(const Mat& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i)));
  return out;
}

Json basis_to_json(const Mat& basis) {
  Json out = Json::array();
  for (Index j = 0; j < basis.cols(); ++j) out.push_back(vector_to_json(basis.col(j)));
  return out;
}

Json samples_to_json(const PointMap& map) {
  Json out = Json::array();
  for (const Sample& s : map.samples()) {
    Json item;
    item["in"] = vector_to_json(s.in);
    item["out"] = vector_to_json(s.out);
    out.push_back(std::move(item));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw FileFormatError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  if (!stream.good() && !stream.eof()) {
    throw FileFormatError("failed to read '" + path.string() + "'");
  }
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) {
    throw FileFormatError("cannot open '" + path.string() + "' for writing");
  }
  stream << text;
  if (!stream.good()) {
    throw FileFormatError("failed to write '" + path.string() + "'");
  }
}

}  // namespace

std::string instance_to_json(const Instance& instance) {
  Json j;
  j["version"] = kFileVersion;
  j["n"] = instance.domain_dim();
  j["m"] = instance.codomain_dim();
  j["G_E"] = matrix_to_json(instance.e_pairing.gram());
  j["G_F"] = matrix_to_json(instance.f_pairing.gram());
  j["f_samples"] = samples_to_json(instance.f_map);
  j["g_samples"] = samples_to_json(instance.g_map);
  return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  const Json j = parse_text(text);
  const std::string where = "instance";
  reject_unknown(j, {"version", "n", "m", "G_E", "G_F", "f_samples", "g_samples"},
                 where);
  parse_version(j, where);
  const Index n = parse_dim(require(j, "n", where), "n", where);
  const Index m = parse_dim(require(j, "m", where), "m", where);
  Pairing e_pairing(parse_matrix(require(j, "G_E", where), n, n, where + ".G_E"));
  Pairing f_pairing(parse_matrix(require(j, "G_F", where), m, m, where + ".G_F"));
  PointMap f_map(n, m,
                 parse_samples(require(j, "f_samples", where), n, m,
                               where + ".f_samples"));
  PointMap g_map(n, m,
                 parse_samples(require(j, "g_samples", where), n, m,
                               where + ".g_samples"));
  return Instance(std::move(e_pairing), std::move(f_pairing), std::move(f_map),
                  std::move(g_map));
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  write_file(path, instance_to_json(instance));
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_file(path));
}

std::string decomposition_to_json(const Decomposition& dec) {
  Json j;
  j["version"] = kFileVersion;
  j["L_basis"] = basis_to_json(dec.span.basis());
  j["M_basis"] = basis_to_json(dec.degenerate.basis());
  j["A"] = matrix_to_json(dec.core.matrix());
  j["phi_samples"] = samples_to_json(dec.projection_section);
  j["psi_samples"] = samples_to_json(dec.restriction_section);
  Json pairings;
  pairings["G_E"] = matrix_to_json(dec.e_pairing.gram());
  pairings["G_F"] = matrix_to_json(dec.f_pairing.gram());
  j["pairings"] = std::move(pairings);
  return j.dump(2) + "\n";
}

Decomposition decomposition_from_json(const std::string& text) {
  const Json j = parse_text(text);
  const std::string where = "decomposition";
  reject_unknown(j,
                 {"version", "L_basis", "M_basis", "A", "phi_samples", "psi_samples",
                  "pairings"},
                 where);
  parse_version(j, where);

  const Json& pairings = require(j, "pairings", where);
  reject_unknown(pairings, {"G_E", "G_F"}, where + ".pairings");
  const Json& gram_e = require(pairings, "G_E", where + ".pairings");
  const Json& gram_f = require(pairings, "G_F", where + ".pairings");
  if (!gram_e.is_array() || !gram_f.is_array()) {
    fail(where + ".pairings", "expected matrices");
  }
  const Index n = static_cast<Index>(gram_e.size());
  const Index m = static_cast<Index>(gram_f.size());
  Pairing e_pairing(parse_matrix(gram_e, n, n, where + ".pairings.G_E"));
  Pairing f_pairing(parse_matrix(gram_f, m, m, where + ".pairings.G_F"));

  Subspace span(m, parse_basis(require(j, "L_basis", where), m, where + ".L_basis"));
  Subspace degenerate(
      m, parse_basis(require(j, "M_basis", where), m, where + ".M_basis"));
  const Index quotient_dim = span.rank() - degenerate.rank();
  if (quotient_dim != n) {
    fail(where, "span and degenerate ranks are inconsistent with the domain dimension");
  }
  Mat core_matrix =
      parse_matrix(require(j, "A", where), quotient_dim, n, where + ".A");
  LinearOperator core(std::move(core_matrix), e_pairing,
                      Pairing::standard(quotient_dim));

  PointMap projection_section(quotient_dim, m,
                              parse_samples(require(j, "phi_samples", where),
                                            quotient_dim, m, where + ".phi_samples"));
  PointMap restriction_section(span.rank(), m,
                               parse_samples(require(j, "psi_samples", where),
                                             span.rank(), m, where + ".psi_samples"));

  Decomposition dec{std::move(e_pairing),
                    std::move(f_pairing),
                    std::move(span),
                    std::move(degenerate),
                    std::move(core),
                    std::move(projection_section),
                    std::move(restriction_section)};
  validate(dec);
  return dec;
}

void save_decomposition(const Decomposition& dec, const std::filesystem::path& path) {
  write_file(path, decomposition_to_json(dec));
}

Decomposition load_decomposition(const std::filesystem::path& path) {
  return decomposition_from_json(read_file(path));
}

}  // namespace oeq
