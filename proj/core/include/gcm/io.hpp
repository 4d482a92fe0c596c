// Tabular and binary file formats. CSV files start with '#'-prefixed
// "key: value" metadata lines followed by a single header row.
#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcm/classical.hpp"
#include "gcm/density.hpp"
#include "gcm/eigensolver.hpp"
#include "gcm/spectral_stats.hpp"

namespace gcm {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trip decimal form of a double ("nan", "inf" for
/// non-finite values).
std::string format_double(double v);

struct CsvTable {
  Metadata metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column; throws std::runtime_error when absent.
  std::size_t column(const std::string& name) const;
  std::optional<std::string> meta(const std::string& key) const;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// index,energy,converged
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s, Metadata meta);

/// Levels from a spectrum CSV (converged rows only, in file order) or from
/// a plain list with one energy per line ('#' comments allowed).
std::vector<double> read_levels(const std::filesystem::path& path);

/// centroid_energy,omega,stat_err,bin_start,bin_size,flags
void write_brody_csv(const std::filesystem::path& path, const BrodyCurve& c, Metadata meta);
/// centroid_energy,omega,one_minus_omega,stat_err,syst_err,flags
void write_brody_adjunct_csv(const std::filesystem::path& path, const BrodyCurve& c,
                             Metadata meta);
/// (centroid energy, omega) for unflagged rows of a brody CSV.
std::vector<std::pair<double, double>> read_brody_curve(const std::filesystem::path& path,
                                                        bool include_flagged = false);

/// s,density,poisson,wigner,brody
void write_histogram_csv(const std::filesystem::path& path, const NnsHistogram& h, Metadata meta);

/// omega_true,mean_fit,bias,stddev,trials,sample_size
void write_bias_csv(const std::filesystem::path& path, std::span<const BiasRow> rows,
                    Metadata meta);

/// B,E,f_reg,sigma,n_regular,n_chaotic,n_undecided
void write_freg_csv(const std::filesystem::path& path,
                    std::span<const RegularFractionPoint> points, Metadata meta);
std::vector<RegularFractionPoint> read_freg_csv(const std::filesystem::path& path);

/// Matrix CSV: one row per y value (ascending), one column per x value.
void write_density_csv(const std::filesystem::path& path, const DensityGrid& g, Metadata meta);
/// 8-bit binary PGM scaled to the grid peak; top row is the largest y.
void write_density_pgm(const std::filesystem::path& path, const DensityGrid& g);
/// polyline,x,y
void write_boundary_csv(const std::filesystem::path& path, const DensityGrid& g, Metadata meta);

/// Binary spectrum cache: magic, format version, key digest, scheme,
/// dimension, converged prefix, parameters and little-endian levels.
void save_spectrum_cache(const std::filesystem::path& path, const Spectrum& s,
                         const std::string& key);
/// nullopt when the file is missing, corrupt or was written for another key.
std::optional<Spectrum> load_spectrum_cache(const std::filesystem::path& path,
                                            const std::string& key);

}  // namespace gcm
