#include "iqft/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace iqft {

ParticleSpectrum spectrum_from_json(const json& j) {
  std::size_t d = j.at("D").get<std::size_t>();
  std::vector<double> masses = j.at("masses").get<std::vector<double>>();
  std::vector<std::size_t> conj;
  if (j.contains("conjugation")) {
    conj = j.at("conjugation").get<std::vector<std::size_t>>();
    for (auto& c : conj) {
      if (c == 0 || c > d) throw std::invalid_argument("spectrum: conjugation is 1-based");
      c -= 1;
    }
  } else {
    conj.resize(d);
    for (std::size_t a = 0; a < d; ++a) conj[a] = a;
  }
  return ParticleSpectrum(d, std::move(masses), std::move(conj));
}

json spectrum_to_json(const ParticleSpectrum& s) {
  json j;
  j["D"] = s.species_count();
  j["masses"] = s.masses();
  std::vector<std::size_t> conj;
  for (auto c : s.conjugation()) conj.push_back(c + 1);
  j["conjugation"] = conj;
  return j;
}

namespace {

ScalarAmplitude amplitude_from_json(const json& p) {
  if (p.contains("g2")) return sinh_gordon_amplitude(p.at("g2").get<double>());
  ScalarAmplitude amp;
  amp.epsilon = p.value("epsilon", 1);
  amp.a = p.value("a", 0.0);
  if (p.contains("zeros"))
    for (const auto& z : p.at("zeros"))
      amp.zeros.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  amp.validate();
  return amp;
}

}  // namespace

SMatrix smatrix_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  json params = j.value("params", json::object());
  SMatrix s = [&]() {
    if (kind == "constant") {
      ParticleSpectrum spec = spectrum_from_json(j.at("spectrum"));
      return SMatrix::constant_flip(spec, params.value("sign", -1));
    }
    if (kind == "sinh-gordon")
      return SMatrix::sinh_gordon(j.value("mass", 1.0), params.at("g2").get<double>());
    if (kind == "scalar-family")
      return SMatrix::scalar_family(j.value("mass", 1.0), amplitude_from_json(params));
    if (kind == "diagonal") {
      ParticleSpectrum spec = spectrum_from_json(j.at("spectrum"));
      const std::size_t D = spec.species_count();
      std::vector<std::vector<ScalarAmplitude>> om(D, std::vector<ScalarAmplitude>(D));
      const auto& tab = params.at("omega");
      for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b) om[a][b] = amplitude_from_json(tab.at(a).at(b));
      return SMatrix::diagonal(spec, std::move(om));
    }
    if (kind == "o(n)")
      return SMatrix::o_n(params.at("N").get<int>(), j.value("mass", 1.0));
    if (kind == "user-table") {
      ParticleSpectrum spec = spectrum_from_json(j.at("spectrum"));
      std::vector<double> thetas = params.at("thetas").get<std::vector<double>>();
      std::vector<Eigen::MatrixXcd> vals;
      const std::size_t dd = spec.species_count() * spec.species_count();
      for (const auto& m : params.at("values")) {
        Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(Eigen::Index(dd), Eigen::Index(dd));
        for (std::size_t r = 0; r < dd; ++r)
          for (std::size_t c = 0; c < dd; ++c)
            v(Eigen::Index(r), Eigen::Index(c)) =
                Complex(m.at(r).at(c).at(0).get<double>(), m.at(r).at(c).at(1).get<double>());
        vals.push_back(std::move(v));
      }
      return SMatrix::user_table(spec, std::move(thetas), std::move(vals));
    }
    throw std::invalid_argument("unknown S-matrix kind: " + kind);
  }();
  if (j.contains("strip_width")) s.set_strip_width(j.at("strip_width").get<double>());
  if (j.contains("sup_norm_kappa"))
    s.set_sup_norm_kappa(j.at("sup_norm_kappa").get<double>());
  return s;
}

json axiom_report_to_json(const AxiomReport& r) {
  json j;
  j["unitarity"] = r.unitarity;
  j["hermitian_analyticity"] = r.hermitian_analyticity;
  j["yang_baxter"] = r.yang_baxter;
  j["crossing"] = r.crossing;
  j["pct"] = r.pct;
  j["translational"] = r.translational;
  if (r.gauge)
    j["gauge"] = *r.gauge;
  else
    j["gauge"] = nullptr;
  j["grid"] = r.grid_description;
  return j;
}

json strip_estimate_to_json(const StripEstimate& e) {
  json j;
  j["kappa_est"] = e.kappa_est;
  j["sup_norm_kappa"] = e.sup_norm;
  j["capped_at_pi_half"] = e.capped;
  j["pole_candidates"] = e.pole_candidates;
  j["lambda_samples"] = e.lambda_samples;
  j["theta_samples"] = e.theta_samples;
  j["note"] = "resolution-dependent estimates";
  return j;
}

TestFunction2D testfunction_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  std::vector<Complex> weights;
  if (j.contains("weights"))
    for (const auto& w : j.at("weights")) {
      if (w.is_array())
        weights.emplace_back(w.at(0).get<double>(), w.at(1).get<double>());
      else
        weights.emplace_back(w.get<double>(), 0.0);
    }
  else
    weights.emplace_back(1.0, 0.0);
  std::array<double, 2> center{j.at("center").at(0).get<double>(),
                               j.at("center").at(1).get<double>()};
  if (kind == "bump") {
    WedgeTag tag = WedgeTag::None;
    std::string t = j.value("wedge_tag", "none");
    if (t == "right") tag = WedgeTag::Right;
    else if (t == "left") tag = WedgeTag::Left;
    else if (t != "none") throw std::invalid_argument("unknown wedge tag: " + t);
    std::array<double, 2> shift{0, 0};
    if (j.contains("tag_shift"))
      shift = {j.at("tag_shift").at(0).get<double>(), j.at("tag_shift").at(1).get<double>()};
    return TestFunction2D::bump(center, j.at("radius").get<double>(), weights, tag, shift);
  }
  if (kind == "gaussian-window") {
    std::array<double, 2> widths{j.at("widths").at(0).get<double>(),
                                 j.at("widths").at(1).get<double>()};
    return TestFunction2D::gaussian(center, widths, weights);
  }
  throw std::invalid_argument("unknown test function kind: " + kind);
}

DeformationFunction deformation_from_json(const json& j) {
  std::vector<Complex> zeros;
  if (j.contains("zeros"))
    for (const auto& z : j.at("zeros"))
      zeros.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  return DeformationFunction(j.value("sign", 1), std::move(zeros));
}

QMatrix qmatrix_from_json(const json& j) {
  std::size_t d = j.at("d").get<std::size_t>();
  if (d == 2) return QMatrix::two_dim(j.at("lambda").get<double>());
  if (d == 4)
    return QMatrix::four_dim(j.at("kappa").get<double>(),
                             j.at("kappa_prime").get<double>());
  throw std::invalid_argument("Q matrix: d must be 2 or 4");
}

NuclearityParams nuclearity_params_from_json(const json& j) {
  NuclearityParams p;
  p.D = j.value("D", std::size_t(1));
  p.mass_gap = j.value("mass_gap", 1.0);
  p.kappa = j.value("kappa", 1.0);
  p.s_norm = j.value("s_norm", 1.0);
  if (j.contains("gamma")) {
    p.gamma = j.at("gamma").get<double>();
    p.gamma_prime = j.value("gamma_prime", p.gamma);
  } else {
    p.gamma = p.gamma_prime = std::sqrt(p.s_norm);
  }
  p.validate();
  return p;
}

json fock_vector_to_json(const FockVector& v) {
  json j;
  j["grid"] = {{"points", v.grid().points}, {"weights", v.grid().weights}};
  j["spectrum"] = spectrum_to_json(v.spectrum());
  j["truncated"] = v.truncated();
  json layers = json::array();
  for (std::size_t n = 0; n <= v.n_max(); ++n) {
    json layer = json::array();
    for (std::size_t t = 0; t < v.layer(n).size(); ++t)
      layer.push_back({v.layer(n)[t].real(), v.layer(n)[t].imag()});
    layers.push_back(std::move(layer));
  }
  j["layers"] = std::move(layers);
  return j;
}

FockVector fock_vector_from_json(const json& j) {
  RapidityGrid g;
  g.points = j.at("grid").at("points").get<std::vector<double>>();
  g.weights = j.at("grid").at("weights").get<std::vector<double>>();
  ParticleSpectrum spec = spectrum_from_json(j.at("spectrum"));
  const auto& layers = j.at("layers");
  FockVector v(g, spec, layers.size() - 1);
  for (std::size_t n = 0; n < layers.size(); ++n) {
    if (layers.at(n).size() != v.layer(n).size())
      throw std::invalid_argument("fock vector: layer size mismatch");
    for (std::size_t t = 0; t < v.layer(n).size(); ++t)
      v.layer(n)[t] = Complex(layers.at(n).at(t).at(0).get<double>(),
                              layers.at(n).at(t).at(1).get<double>());
  }
  if (j.value("truncated", false)) v.mark_truncated();
  return v;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename into " + path);
}

std::string function_table_csv(const std::vector<double>& thetas,
                               const std::vector<Eigen::MatrixXcd>& values) {
  std::ostringstream out;
  out.precision(17);
  out << "theta";
  if (!values.empty())
    for (Eigen::Index r = 0; r < values[0].rows(); ++r)
      for (Eigen::Index c = 0; c < values[0].cols(); ++c)
        out << ",re_" << r << "_" << c << ",im_" << r << "_" << c;
  out << "\n";
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    out << thetas[i];
    for (Eigen::Index r = 0; r < values[i].rows(); ++r)
      for (Eigen::Index c = 0; c < values[i].cols(); ++c)
        out << "," << values[i](r, c).real() << "," << values[i](r, c).imag();
    out << "\n";
  }
  return out.str();
}

std::string scalar_table_csv(const std::vector<double>& thetas,
                             const std::vector<Complex>& values) {
  std::ostringstream out;
  out.precision(17);
  out << "theta,re,im\n";
  for (std::size_t i = 0; i < thetas.size(); ++i)
    out << thetas[i] << "," << values[i].real() << "," << values[i].imag() << "\n";
  return out.str();
}

}  // namespace iqft
