#pragma once

#include <json.hpp>
#include <string>

#include "iqft/deform.hpp"
#include "iqft/fock.hpp"
#include "iqft/nuclear.hpp"
#include "iqft/smatrix.hpp"
#include "iqft/testfunction.hpp"

namespace iqft {

using nlohmann::json;

ParticleSpectrum spectrum_from_json(const json& j);
json spectrum_to_json(const ParticleSpectrum& s);

// {kind, spectrum: {D, masses, conjugation}, params: {...}}
SMatrix smatrix_from_json(const json& j);
json axiom_report_to_json(const AxiomReport& r);
json strip_estimate_to_json(const StripEstimate& e);

// {kind, center, radius|widths, weights, wedge_tag, tag_shift}
TestFunction2D testfunction_from_json(const json& j);

// {sign, zeros: [[re, im], ...]}
DeformationFunction deformation_from_json(const json& j);
// {d, lambda} or {d, kappa, kappa_prime}
QMatrix qmatrix_from_json(const json& j);

NuclearityParams nuclearity_params_from_json(const json& j);

json fock_vector_to_json(const FockVector& v);
FockVector fock_vector_from_json(const json& j);

// atomic write (temp file + rename)
void write_text_atomic(const std::string& path, const std::string& content);

// CSV helpers: header columns theta, re, im (one pair per tensor entry)
std::string function_table_csv(const std::vector<double>& thetas,
                               const std::vector<Eigen::MatrixXcd>& values);
std::string scalar_table_csv(const std::vector<double>& thetas,
                             const std::vector<Complex>& values);

}  // namespace iqft
