// File-format oracles: lossless round trips, strict field checking, and the
// error taxonomy (FileFormatError for shape/schema, ValidationError for
// semantic violations surfaced by the constructed values).
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "oeq/decomposition.hpp"
#include "oeq/generators.hpp"
#include "oeq/io.hpp"

using oeq::Mat;
using oeq::PointMap;
using oeq::Sample;
using oeq::Vec;

namespace {

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

oeq::Instance parabola_instance() {
  std::vector<Sample> f_samples;
  std::vector<Sample> g_samples;
  for (double t : {1.0, 2.0, -1.0}) {
    f_samples.push_back({v1(t), v2(t, t * t)});
    g_samples.push_back({v1(t), v2(t, 0.0)});
  }
  return oeq::Instance{oeq::Pairing::standard(1), oeq::Pairing::standard(2),
                       PointMap{1, 2, f_samples}, PointMap{1, 2, g_samples}};
}

oeq::Instance awkward_instance() {
  oeq::GenConfig config;
  config.domain_dim = 2;
  config.codomain_dim = 4;
  config.span_rank = 3;
  config.degenerate_rank = 1;
  config.section_mode = oeq::SectionMode::kTrigonometric;
  config.pairing_mode = oeq::PairingMode::kRandomInvertible;
  config.seed = 1234;
  return oeq::gen_instance(config);
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const char* name)
      : path(std::filesystem::temp_directory_path() /
             (std::string("oeq-io-test-") + name)) {}
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("instance serialization is a bitwise round trip") {
  const oeq::Instance original = awkward_instance();
  const std::string text = oeq::instance_to_json(original);
  const oeq::Instance loaded = oeq::instance_from_json(text);

  // Bitwise equality: irrational-looking doubles must survive exactly.
  CHECK((loaded.e_pairing.gram() - original.e_pairing.gram()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.f_pairing.gram() - original.f_pairing.gram()).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(loaded.f_map.size() == original.f_map.size());
  for (std::size_t i = 0; i < original.f_map.size(); ++i) {
    CHECK((loaded.f_map.samples()[i].in - original.f_map.samples()[i].in).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded.f_map.samples()[i].out - original.f_map.samples()[i].out).cwiseAbs().maxCoeff() == 0.0);
  }

  // Serialize-parse-serialize is a fixed point.
  CHECK(oeq::instance_to_json(loaded) == text);
}

TEST_CASE("instance files survive the disk") {
  const oeq::Instance original = parabola_instance();
  TempFile file("instance.json");
  oeq::save_instance(original, file.path);
  const oeq::Instance loaded = oeq::load_instance(file.path);
  CHECK(oeq::residual(loaded).max_abs_residual == doctest::Approx(0.0));
  CHECK(loaded.f_map.size() == 3);
}

TEST_CASE("loading a missing file is a FileFormatError") {
  CHECK_THROWS_AS(oeq::load_instance("/nonexistent/oeq-nowhere.json"),
                  oeq::FileFormatError);
}

TEST_CASE("instance parser rejects schema violations") {
  using Json = nlohmann::ordered_json;
  const std::string text = oeq::instance_to_json(parabola_instance());

  CHECK_THROWS_AS(oeq::instance_from_json("not json at all"),
                  oeq::FileFormatError);
  CHECK_THROWS_AS(oeq::instance_from_json("[1, 2, 3]"), oeq::FileFormatError);

  {
    Json doc = Json::parse(text);
    doc["surprise"] = 1;  // unknown fields are a hard error, not a warning
    CHECK_THROWS_AS(oeq::instance_from_json(doc.dump()), oeq::FileFormatError);
  }
  {
    Json doc = Json::parse(text);
    doc["version"] = 2;
    CHECK_THROWS_AS(oeq::instance_from_json(doc.dump()), oeq::FileFormatError);
  }
  {
    Json doc = Json::parse(text);
    doc.erase("G_E");
    CHECK_THROWS_AS(oeq::instance_from_json(doc.dump()), oeq::FileFormatError);
  }
  {
    Json doc = Json::parse(text);
    doc["G_E"] = Json::array({Json::array({1.0, 0.0})});  // 1x2 is not square
    CHECK_THROWS_AS(oeq::instance_from_json(doc.dump()), oeq::FileFormatError);
  }
  {
    Json doc = Json::parse(text);
    doc["f_samples"][0]["in"] = Json::array({1.0, 2.0});  // wrong length
    CHECK_THROWS_AS(oeq::instance_from_json(doc.dump()), oeq::FileFormatError);
  }
  {
    Json doc = Json::parse(text);
    doc["f_samples"][0]["in"] = Json::array({"x"});  // wrong element type
    CHECK_THROWS_AS(oeq::instance_from_json(doc.dump()), oeq::FileFormatError);
  }
}

TEST_CASE("semantic violations surface as ValidationError") {
  using Json = nlohmann::ordered_json;
  Json doc = Json::parse(oeq::instance_to_json(parabola_instance()));
  // A singular gram parses shape-wise but cannot be a pairing.
  doc["G_F"] = Json::array({Json::array({1.0, 0.0}), Json::array({1.0, 0.0})});
  CHECK_THROWS_AS(oeq::instance_from_json(doc.dump()), oeq::ValidationError);
}

TEST_CASE("decomposition serialization round trips and re-validates") {
  const oeq::Instance instance = awkward_instance();
  const oeq::Decomposition dec = oeq::extract(instance);

  const std::string text = oeq::decomposition_to_json(dec);
  const oeq::Decomposition loaded = oeq::decomposition_from_json(text);
  CHECK(oeq::decomposition_to_json(loaded) == text);
  CHECK(loaded.span.rank() == dec.span.rank());
  CHECK(loaded.degenerate.rank() == dec.degenerate.rank());
  CHECK((loaded.core.matrix() - dec.core.matrix()).cwiseAbs().maxCoeff() == 0.0);

  // The loaded certificate still verifies against the original instance.
  CHECK(oeq::verify_decomposition(loaded, instance).passed);

  TempFile file("decomposition.json");
  oeq::save_decomposition(dec, file.path);
  const oeq::Decomposition reloaded = oeq::load_decomposition(file.path);
  CHECK(oeq::verify_decomposition(reloaded, instance).passed);
}

TEST_CASE("decomposition parser rejects schema and semantic breakage") {
  using Json = nlohmann::ordered_json;
  const oeq::Instance instance = parabola_instance();
  const std::string text = oeq::decomposition_to_json(oeq::extract(instance));

  {
    Json doc = Json::parse(text);
    doc["extra"] = Json::object();
    CHECK_THROWS_AS(oeq::decomposition_from_json(doc.dump()),
                    oeq::FileFormatError);
  }
  {
    Json doc = Json::parse(text);
    doc["version"] = 0;
    CHECK_THROWS_AS(oeq::decomposition_from_json(doc.dump()),
                    oeq::FileFormatError);
  }
  {
    Json doc = Json::parse(text);
    doc.erase("A");
    CHECK_THROWS_AS(oeq::decomposition_from_json(doc.dump()),
                    oeq::FileFormatError);
  }
  {
    // Scaling a span basis vector breaks orthonormality: the parsed value
    // fails the Subspace invariant, which is a semantic error.
    Json doc = Json::parse(text);
    for (auto& entry : doc["L_basis"][0]) entry = 2.0 * entry.get<double>();
    CHECK_THROWS_AS(oeq::decomposition_from_json(doc.dump()),
                    oeq::ValidationError);
  }
}
