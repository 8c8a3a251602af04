#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "turbmax/euler_compressible.hpp"
#include "turbmax/euler_incompressible.hpp"
#include "turbmax/functional.hpp"
#include "turbmax/measure.hpp"
#include "turbmax/selector.hpp"

namespace turbmax {

/// Schema or validation failure in a measure or data file.  The message
/// carries the originating file and the JSON path of the offending entry,
/// e.g. "cells[17].atoms[2]: weights sum to 0.9".
class MeasureFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a measure file.  Grid, growth, and every cell are validated; cells
/// absent from the file default to the declared background atom (interior)
/// or to no content (final layer).
DiscreteYoungMeasure read_measure_file(const std::filesystem::path& path);
DiscreteYoungMeasure parse_measure_json(const std::string& text, const std::string& origin);

/// Serializes with shortest round-trip number formatting and fixed key
/// order, so equal measures produce identical bytes and a write-read cycle
/// reproduces the measure exactly.  Cells equal to the dominant single-atom
/// content are elided behind a declared background atom.
std::string measure_to_json(const DiscreteYoungMeasure& Y);
void write_measure_file(const std::filesystem::path& path, const DiscreteYoungMeasure& Y);

IncompressibleData read_incompressible_data(const std::filesystem::path& path);
CompressibleData read_compressible_data(const std::filesystem::path& path);
std::string incompressible_data_to_json(const IncompressibleData& data);
std::string compressible_data_to_json(const CompressibleData& data);
void write_incompressible_data(const std::filesystem::path& path, const IncompressibleData& data);
void write_compressible_data(const std::filesystem::path& path, const CompressibleData& data);

/// Report serializers used by the command line tool; deterministic key order
/// and number formatting.
std::string weak_form_report_json(const std::string& model, const WeakFormReport& wf,
                                  const AdmissibilityReport& adm, double tol, bool pass);
std::string functional_report_json(const std::string& integrand, const FunctionalReport& rep);
std::string selection_result_json(const SelectionResult& result,
                                  const UniquenessReport* uniqueness);

} // namespace turbmax
