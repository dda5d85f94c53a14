#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "pwave/spectrum.hpp"

namespace pwave {

// %.17g formatting used for every number written to disk.
std::string format_double(double v);

// Pretty JSON writer that prints floating-point values with 17 significant digits.
void write_json(std::ostream& os, const nlohmann::json& j, int indent = 2);
std::string dump_json(const nlohmann::json& j, int indent = 2);

nlohmann::json to_json(const SpectrumPair& S);
SpectrumPair spectrum_from_json(const nlohmann::json& j);

SpectrumPair load_spectrum(const std::filesystem::path& path);
void save_spectrum(const SpectrumPair& S, const std::filesystem::path& path);

// Write-then-rename so readers never see partial files.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace pwave
