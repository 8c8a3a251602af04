#include "turbmax/measure_io.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace turbmax {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& origin, const std::string& path,
                       const std::string& what) {
    std::ostringstream os;
    os << origin << ": " << path << ": " << what;
    throw MeasureFileError(os.str());
}

double require_number(const json& j, const std::string& origin, const std::string& path) {
    if (!j.is_number()) {
        fail(origin, path, "expected a number");
    }
    return j.get<double>();
}

int require_int(const json& j, const std::string& origin, const std::string& path) {
    if (!j.is_number_integer()) {
        fail(origin, path, "expected an integer");
    }
    return j.get<int>();
}

const json& require_field(const json& j, const char* key, const std::string& origin,
                          const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end()) {
        fail(origin, path, std::string("missing field '") + key + "'");
    }
    return *it;
}

std::vector<double> require_vector(const json& j, std::size_t dim, const std::string& origin,
                                   const std::string& path) {
    if (!j.is_array() || j.size() != dim) {
        std::ostringstream os;
        os << "expected an array of " << dim << " numbers";
        fail(origin, path, os.str());
    }
    std::vector<double> out;
    out.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::ostringstream os;
        os << path << "[" << i << "]";
        out.push_back(require_number(j[i], origin, os.str()));
    }
    return out;
}

GrowthStructure parse_growth(const json& j, const std::string& origin) {
    if (!j.is_object()) {
        fail(origin, "growth", "expected an object");
    }
    const json& kind = require_field(j, "kind", origin, "growth");
    if (!kind.is_string()) {
        fail(origin, "growth.kind", "expected a string");
    }
    const std::string k = kind.get<std::string>();
    try {
        if (k == "quadratic") {
            return GrowthStructure::quadratic();
        }
        if (k == "power") {
            return GrowthStructure::power(
                require_number(require_field(j, "p", origin, "growth"), origin, "growth.p"));
        }
        if (k == "isentropic") {
            return GrowthStructure::isentropic(require_number(
                require_field(j, "gamma", origin, "growth"), origin, "growth.gamma"));
        }
    } catch (const std::invalid_argument& e) {
        fail(origin, "growth", e.what());
    }
    fail(origin, "growth.kind", "unknown kind '" + k + "' (quadratic | power | isentropic)");
}

json growth_to_json(const GrowthStructure& g) {
    json out;
    if (g.kind() == GrowthKind::PowerP) {
        if (g.exponent() == 2.0) {
            out["kind"] = "quadratic";
        } else {
            out["kind"] = "power";
            out["p"] = g.exponent();
        }
    } else {
        out["kind"] = "isentropic";
        out["gamma"] = g.exponent();
    }
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw MeasureFileError("cannot open file: " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw MeasureFileError("cannot open file for writing: " + path.string());
    }
    out << text;
    if (!out) {
        throw MeasureFileError("write failed: " + path.string());
    }
}

json parse_root(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw MeasureFileError(origin + ": not valid JSON");
    }
    if (!j.is_object()) {
        throw MeasureFileError(origin + ": root must be an object");
    }
    return j;
}

void check_schema_version(const json& j, const std::string& origin) {
    const json& v = require_field(j, "schema_version", origin, "(root)");
    if (!v.is_number_integer() || v.get<int>() != 1) {
        fail(origin, "schema_version", "unsupported schema version, expected 1");
    }
}

} // namespace

DiscreteYoungMeasure parse_measure_json(const std::string& text, const std::string& origin) {
    const json j = parse_root(text, origin);
    check_schema_version(j, origin);

    const json& jg = require_field(j, "grid", origin, "(root)");
    if (!jg.is_object()) {
        fail(origin, "grid", "expected an object");
    }
    const double T = require_number(require_field(jg, "T", origin, "grid"), origin, "grid.T");
    const int d = require_int(require_field(jg, "d", origin, "grid"), origin, "grid.d");
    const int nt = require_int(require_field(jg, "nt", origin, "grid"), origin, "grid.nt");
    const int nx = require_int(require_field(jg, "nx", origin, "grid"), origin, "grid.nx");
    bool final_layer = false;
    if (const auto it = jg.find("final_layer"); it != jg.end()) {
        if (!it->is_boolean()) {
            fail(origin, "grid.final_layer", "expected a boolean");
        }
        final_layer = it->get<bool>();
    }

    const GrowthStructure growth = parse_growth(require_field(j, "growth", origin, "(root)"),
                                                origin);
    const int phase_dim =
        require_int(require_field(j, "phase_dim", origin, "(root)"), origin, "phase_dim");
    if (phase_dim < 1 || phase_dim > 16) {
        fail(origin, "phase_dim", "must be in [1, 16]");
    }
    const std::size_t m = static_cast<std::size_t>(phase_dim);

    SpaceTimeGrid grid = [&] {
        try {
            return SpaceTimeGrid(T, d, nt, nx, final_layer);
        } catch (const std::invalid_argument& e) {
            fail(origin, "grid", e.what());
        }
    }();

    std::vector<double> background;
    if (const auto it = j.find("background"); it != j.end()) {
        if (!it->is_object()) {
            fail(origin, "background", "expected an object");
        }
        background =
            require_vector(require_field(*it, "z", origin, "background"), m, origin,
                           "background.z");
    }

    std::vector<CellMeasure> cells(grid.cell_count());
    std::vector<bool> present(grid.cell_count(), false);

    const json& jc = require_field(j, "cells", origin, "(root)");
    if (!jc.is_array()) {
        fail(origin, "cells", "expected an array");
    }
    for (std::size_t e = 0; e < jc.size(); ++e) {
        std::ostringstream base;
        base << "cells[" << e << "]";
        const json& cell = jc[e];
        if (!cell.is_object()) {
            fail(origin, base.str(), "expected an object");
        }
        const int idx = require_int(require_field(cell, "i", origin, base.str()), origin,
                                    base.str() + ".i");
        if (idx < 0 || static_cast<std::size_t>(idx) >= grid.cell_count()) {
            std::ostringstream os;
            os << "cell index " << idx << " out of range [0, " << grid.cell_count() << ")";
            fail(origin, base.str() + ".i", os.str());
        }
        const std::size_t ci = static_cast<std::size_t>(idx);
        if (present[ci]) {
            fail(origin, base.str() + ".i", "duplicate cell index");
        }
        present[ci] = true;
        CellMeasure& cm = cells[ci];

        if (const auto it = cell.find("atoms"); it != cell.end()) {
            if (!it->is_array()) {
                fail(origin, base.str() + ".atoms", "expected an array");
            }
            for (std::size_t a = 0; a < it->size(); ++a) {
                std::ostringstream ap;
                ap << base.str() << ".atoms[" << a << "]";
                const json& atom = (*it)[a];
                if (!atom.is_object()) {
                    fail(origin, ap.str(), "expected an object");
                }
                PhaseAtom pa;
                pa.z = require_vector(require_field(atom, "z", origin, ap.str()), m, origin,
                                      ap.str() + ".z");
                pa.w = require_number(require_field(atom, "w", origin, ap.str()), origin,
                                      ap.str() + ".w");
                cm.atoms.push_back(std::move(pa));
            }
            // Weight sums are re-checked here so the diagnostic can name the
            // cell entry instead of the flattened index.
            if (!cm.atoms.empty()) {
                double wsum = 0.0;
                for (const PhaseAtom& a : cm.atoms) {
                    wsum += a.w;
                }
                if (std::abs(wsum - 1.0) > 1e-12) {
                    std::ostringstream os;
                    os << "weights sum to " << wsum << ", expected 1";
                    fail(origin, base.str() + ".atoms", os.str());
                }
            }
        }
        if (const auto it = cell.find("lambda"); it != cell.end()) {
            cm.lambda_mass = require_number(*it, origin, base.str() + ".lambda");
            if (!(cm.lambda_mass >= 0.0)) {
                fail(origin, base.str() + ".lambda", "must be nonnegative");
            }
        }
        if (const auto it = cell.find("angles"); it != cell.end()) {
            if (!it->is_array()) {
                fail(origin, base.str() + ".angles", "expected an array");
            }
            for (std::size_t a = 0; a < it->size(); ++a) {
                std::ostringstream ap;
                ap << base.str() << ".angles[" << a << "]";
                const json& angle = (*it)[a];
                if (!angle.is_object()) {
                    fail(origin, ap.str(), "expected an object");
                }
                AngleAtom aa;
                aa.theta = require_vector(require_field(angle, "theta", origin, ap.str()), m,
                                          origin, ap.str() + ".theta");
                aa.w = require_number(require_field(angle, "w", origin, ap.str()), origin,
                                      ap.str() + ".w");
                cm.angle_atoms.push_back(std::move(aa));
            }
        }
    }

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        if (present[ci] || grid.is_final_layer(ci)) {
            continue;
        }
        if (cells[ci].atoms.empty()) {
            if (background.empty()) {
                std::ostringstream os;
                os << "interior cell " << ci
                   << " is absent and the file declares no background atom";
                fail(origin, "cells", os.str());
            }
            cells[ci].atoms.push_back(PhaseAtom{background, 1.0});
        }
    }

    try {
        return DiscreteYoungMeasure(grid, phase_dim, growth, std::move(cells));
    } catch (const std::invalid_argument& e) {
        throw MeasureFileError(origin + ": " + e.what());
    }
}

DiscreteYoungMeasure read_measure_file(const std::filesystem::path& path) {
    return parse_measure_json(read_text(path), path.string());
}

std::string measure_to_json(const DiscreteYoungMeasure& Y) {
    const SpaceTimeGrid& g = Y.grid();
    json j;
    j["schema_version"] = 1;
    j["grid"] = {{"T", g.T()}, {"d", g.d()}, {"nt", g.nt()}, {"nx", g.nx()},
                 {"final_layer", g.has_final_layer()}};
    j["growth"] = growth_to_json(Y.growth());
    j["phase_dim"] = Y.phase_dim();

    // Background detection: the most common single-Dirac cell content with no
    // concentration, keyed by the exact bit pattern of the atom location.
    std::map<std::string, std::pair<std::size_t, std::vector<double>>> counts;
    for (std::size_t c = 0; c < g.interior_cell_count(); ++c) {
        const CellMeasure& cm = Y.cell(c);
        if (cm.atoms.size() == 1 && cm.atoms[0].w == 1.0 && cm.lambda_mass == 0.0) {
            std::string key(reinterpret_cast<const char*>(cm.atoms[0].z.data()),
                            cm.atoms[0].z.size() * sizeof(double));
            auto& slot = counts[key];
            ++slot.first;
            slot.second = cm.atoms[0].z;
        }
    }
    std::vector<double> background;
    std::size_t best = 0;
    for (const auto& [key, slot] : counts) {
        if (slot.first > best) {
            best = slot.first;
            background = slot.second;
        }
    }
    if (!background.empty()) {
        j["background"] = {{"z", background}};
    }

    json cells = json::array();
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        const CellMeasure& cm = Y.cell(c);
        const bool boundary = g.is_final_layer(c);
        if (boundary && cm.lambda_mass == 0.0) {
            continue;
        }
        if (!boundary && !background.empty() && cm.lambda_mass == 0.0 && cm.atoms.size() == 1 &&
            cm.atoms[0].w == 1.0 && cm.atoms[0].z.size() == background.size() &&
            std::memcmp(cm.atoms[0].z.data(), background.data(),
                        background.size() * sizeof(double)) == 0) {
            continue;
        }
        json cell;
        cell["i"] = c;
        if (!cm.atoms.empty()) {
            json atoms = json::array();
            for (const PhaseAtom& a : cm.atoms) {
                atoms.push_back({{"z", a.z}, {"w", a.w}});
            }
            cell["atoms"] = std::move(atoms);
        }
        if (cm.lambda_mass > 0.0) {
            cell["lambda"] = cm.lambda_mass;
            json angles = json::array();
            for (const AngleAtom& a : cm.angle_atoms) {
                angles.push_back({{"theta", a.theta}, {"w", a.w}});
            }
            cell["angles"] = std::move(angles);
        }
        cells.push_back(std::move(cell));
    }
    j["cells"] = std::move(cells);
    return j.dump(2) + "\n";
}

void write_measure_file(const std::filesystem::path& path, const DiscreteYoungMeasure& Y) {
    write_text(path, measure_to_json(Y));
}

namespace {

SpatialField parse_vector_field(const json& j, int d, int nx, int dim, const std::string& origin,
                                const std::string& path) {
    SpatialField f(d, nx, dim);
    if (!j.is_array() || j.size() != f.cell_count()) {
        std::ostringstream os;
        os << "expected an array of " << f.cell_count() << " entries";
        fail(origin, path, os.str());
    }
    for (std::size_t c = 0; c < f.cell_count(); ++c) {
        std::ostringstream cp;
        cp << path << "[" << c << "]";
        if (dim == 1) {
            f.at(c)[0] = require_number(j[c], origin, cp.str());
        } else {
            const std::vector<double> v =
                require_vector(j[c], static_cast<std::size_t>(dim), origin, cp.str());
            std::copy(v.begin(), v.end(), f.at(c).begin());
        }
    }
    return f;
}

json field_to_json(const SpatialField& f) {
    json out = json::array();
    for (std::size_t c = 0; c < f.cell_count(); ++c) {
        if (f.value_dim() == 1) {
            out.push_back(f.at(c)[0]);
        } else {
            out.push_back(std::vector<double>(f.at(c).begin(), f.at(c).end()));
        }
    }
    return out;
}

void check_model(const json& j, const char* expected, const std::string& origin) {
    const json& m = require_field(j, "model", origin, "(root)");
    if (!m.is_string() || m.get<std::string>() != expected) {
        fail(origin, "model", std::string("expected \"") + expected + "\"");
    }
}

} // namespace

IncompressibleData read_incompressible_data(const std::filesystem::path& path) {
    const std::string origin = path.string();
    const json j = parse_root(read_text(path), origin);
    check_schema_version(j, origin);
    check_model(j, "incompressible", origin);
    const int d = require_int(require_field(j, "d", origin, "(root)"), origin, "d");
    const int nx = require_int(require_field(j, "nx", origin, "(root)"), origin, "nx");
    try {
        return IncompressibleData(parse_vector_field(require_field(j, "v0", origin, "(root)"), d,
                                                     nx, d, origin, "v0"));
    } catch (const std::invalid_argument& e) {
        throw MeasureFileError(origin + ": " + e.what());
    }
}

CompressibleData read_compressible_data(const std::filesystem::path& path) {
    const std::string origin = path.string();
    const json j = parse_root(read_text(path), origin);
    check_schema_version(j, origin);
    check_model(j, "compressible", origin);
    const int d = require_int(require_field(j, "d", origin, "(root)"), origin, "d");
    const int nx = require_int(require_field(j, "nx", origin, "(root)"), origin, "nx");
    const double gamma =
        require_number(require_field(j, "gamma", origin, "(root)"), origin, "gamma");
    try {
        return CompressibleData(
            gamma,
            parse_vector_field(require_field(j, "rho0", origin, "(root)"), d, nx, 1, origin,
                               "rho0"),
            parse_vector_field(require_field(j, "u0", origin, "(root)"), d, nx, d, origin, "u0"));
    } catch (const std::invalid_argument& e) {
        throw MeasureFileError(origin + ": " + e.what());
    }
}

std::string incompressible_data_to_json(const IncompressibleData& data) {
    json j;
    j["schema_version"] = 1;
    j["model"] = "incompressible";
    j["d"] = data.v0().d();
    j["nx"] = data.v0().nx();
    j["v0"] = field_to_json(data.v0());
    return j.dump(2) + "\n";
}

std::string compressible_data_to_json(const CompressibleData& data) {
    json j;
    j["schema_version"] = 1;
    j["model"] = "compressible";
    j["d"] = data.rho0().d();
    j["nx"] = data.rho0().nx();
    j["gamma"] = data.gamma();
    j["rho0"] = field_to_json(data.rho0());
    j["u0"] = field_to_json(data.u0());
    return j.dump(2) + "\n";
}

void write_incompressible_data(const std::filesystem::path& path, const IncompressibleData& data) {
    write_text(path, incompressible_data_to_json(data));
}

void write_compressible_data(const std::filesystem::path& path, const CompressibleData& data) {
    write_text(path, compressible_data_to_json(data));
}

namespace {

json residual_summary(const std::vector<TestResidual>& rs, std::size_t worst, double max_norm) {
    json out;
    out["count"] = rs.size();
    out["max_normalized"] = max_norm;
    if (!rs.empty()) {
        out["worst"] = {{"label", rs[worst].label},
                        {"raw", rs[worst].raw},
                        {"normalized", rs[worst].normalized}};
    }
    return out;
}

} // namespace

std::string weak_form_report_json(const std::string& model, const WeakFormReport& wf,
                                  const AdmissibilityReport& adm, double tol, bool pass) {
    json j;
    j["model"] = model;
    j["tol"] = tol;
    j["mass"] = residual_summary(wf.mass, wf.worst_mass_index, wf.max_mass);
    j["momentum"] = residual_summary(wf.momentum, wf.worst_momentum_index, wf.max_momentum);
    j["admissibility"] = {{"initial_energy", adm.initial_energy},
                          {"min_margin", adm.min_margin},
                          {"worst_slice", adm.worst_slice},
                          {"slice_margins", adm.slice_margin},
                          {"final_layer_mass", adm.final_layer_mass},
                          {"time_disintegration_ok", adm.time_disintegration_ok},
                          {"admissible", adm.admissible}};
    j["pass"] = pass;
    return j.dump(2) + "\n";
}

std::string functional_report_json(const std::string& integrand, const FunctionalReport& rep) {
    double max_density = 0.0;
    for (const double dsty : rep.defect_density) {
        max_density = std::max(max_density, dsty);
    }
    json j;
    j["integrand"] = integrand;
    j["value"] = rep.value;
    j["oscillation_part"] = rep.oscillation_part;
    j["concentration_part"] = rep.concentration_part;
    j["total_energy"] = rep.total_energy;
    j["max_defect_density"] = max_density;
    j["scale"] = report_scale(rep);
    return j.dump(2) + "\n";
}

std::string selection_result_json(const SelectionResult& result,
                                  const UniquenessReport* uniqueness) {
    json j;
    j["theta"] = result.theta;
    j["value"] = result.value;
    j["gap"] = result.gap;
    j["tol"] = result.tol;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["total_energy"] = result.total_energy;
    j["phase_dim"] = result.phase_dim;
    j["barycenter"] = result.barycenter;
    if (uniqueness != nullptr) {
        j["uniqueness"] = {{"max_barycenter_diff", uniqueness->max_barycenter_diff},
                           {"max_value_diff", uniqueness->max_value_diff},
                           {"max_energy_rel_diff", uniqueness->max_energy_rel_diff},
                           {"barycenter_tol", uniqueness->barycenter_tol},
                           {"energy_rel_tol", uniqueness->energy_rel_tol},
                           {"consistent", uniqueness->consistent}};
    }
    return j.dump(2) + "\n";
}

} // namespace turbmax
