#pragma once

#include <filesystem>
#include <string>

#include "oeq/decomposition.hpp"
#include "oeq/equation.hpp"

namespace oeq {

// On-disk schema version both file kinds currently carry.
inline constexpr int kFileVersion = 1;

// Instance files: {version, n, m, G_E, G_F, f_samples, g_samples} with
// samples as {in, out} vectors.  Decomposition files: {version, L_basis,
// M_basis, A, phi_samples, psi_samples, pairings:{G_E, G_F}} with bases as
// lists of vectors.  Parsing is strict: unknown fields, wrong shapes and
// version mismatches are FileFormatErrors; semantic violations surface as
// ValidationErrors from the constructed values.  Serialisation is
// deterministic and numbers survive a round trip bit for bit.

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);
void save_instance(const Instance& instance, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

std::string decomposition_to_json(const Decomposition& dec);
Decomposition decomposition_from_json(const std::string& text);
void save_decomposition(const Decomposition& dec, const std::filesystem::path& path);
Decomposition load_decomposition(const std::filesystem::path& path);

}  // namespace oeq
