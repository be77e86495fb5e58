#ifndef SELFIELD_RECORD_IO_HPP
#define SELFIELD_RECORD_IO_HPP

#include "selfield/model.hpp"

#include <string>

namespace selfield {

inline constexpr const char* kVersion = "0.1.0";

/// Serializes a record to the fixed JSON schema
///   {"ansatz","nodes","n","beta0","delta0","gamma0","epsilon","q","r0",
///    "self_energy","w_binding","w_binding_alt","identity_residual","mu","j",
///    "profiles":{"r","k","n","U","lambda"},"config":{...},"provenance":{...}}
/// Scalars round-trip exactly; profiles are downsampled to at most
/// max_profile_points nodes.
std::string record_to_json(const SolutionRecord& rec, const ShootingProblem& cfg,
                           std::size_t max_profile_points = 4000,
                           const std::string& timestamp = "");

/// Parses a record written by record_to_json.  Profile derivatives are
/// rebuilt from the governing equations (k' from n, n' from the radial
/// system, U' from the enclosed charge).
SolutionRecord record_from_json(const std::string& text, ShootingProblem* cfg_out = nullptr);

void write_record_file(const std::string& path, const SolutionRecord& rec,
                       const ShootingProblem& cfg);
SolutionRecord read_record_file(const std::string& path, ShootingProblem* cfg_out = nullptr);

/// Uniform-grid resample of the stored profiles as CSV (header r,k,n,U,lambda).
std::string profiles_csv(const SolutionRecord& rec, std::size_t samples = 2000);

/// fixed "%.10g" float formatting used by every CSV writer
std::string csv_num(double v);

} // namespace selfield

#endif
