#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "hle/grid.hpp"
#include "hle/hardy.hpp"
#include "hle/lane_emden.hpp"
#include "hle/spectral.hpp"

namespace hle {

/// CSV with one row per interior node: coordinates then value, full double
/// precision. The sidecar JSON carries dimension, spacing and the shape so a
/// reader can rebuild the domain; extra entries are merged into it.
void write_field_csv(const std::filesystem::path& csv_path, const ScalarField& field);
void write_field_sidecar(const std::filesystem::path& json_path, const ScalarField& field,
                         const std::map<std::string, double>& extra = {});

/// Rebuilds the domain from the sidecar and matches rows to nodes by lattice
/// rounding. Round trips preserve values to 1e-15 relative.
ScalarField read_field(const std::filesystem::path& csv_path,
                       const std::filesystem::path& json_path);

void write_density(const std::filesystem::path& dir, const std::string& stem,
                   const LaneEmdenDensity& d);

void write_spectral(const std::filesystem::path& dir, const std::string& stem,
                    const SpectralResult& r);

/// certificate.json (schema version "1"), a plain-text summary, and the
/// delta-sweep rows as CSV sorted by (delta, test id).
void write_certificate(const std::filesystem::path& dir, const std::string& stem,
                       const BoundCertificate& cert);

std::string certificate_summary(const BoundCertificate& cert);

std::string shape_to_json_text(const ShapeSpec& spec);
ShapeSpec shape_from_json_text(const std::string& text);

} // namespace hle
