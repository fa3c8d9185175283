#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hjs/observables.hpp"

namespace hjs::csv {

// 17 significant digits, '.' separator, independent of the global locale.
std::string format(double v);

const std::vector<std::string>& series_header();

// One row per sample; oracle cells are left empty when `oracle` is null.
void write_series(const std::filesystem::path& path, const std::vector<double>& times,
                  const std::vector<MomentSet>& simulated, const std::vector<MomentSet>* oracle);

// q,R,S,re_psi,im_psi,born_density. Missing R/S (phase undefined) are empty.
void write_fields(const std::filesystem::path& path, const Grid& grid, const ComplexField& psi,
                  const std::optional<RealField>& R, const std::optional<RealField>& S, const RealField& born);

// Generic table; cells already formatted.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

}  // namespace hjs::csv
