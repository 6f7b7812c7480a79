#include "bell/json_io.hpp"

#include <cmath>
#include <fstream>

namespace bell {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json bloch_to_json(const BlochVector& b) { return ordered_json::array({b.x, b.y, b.z}); }

BlochVector bloch_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3)
    throw invalid_input_error("bloch vector must be an array of 3 numbers");
  return BlochVector{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// A factor is pure iff the state matrix has unit trace of rho^2; exported
// factors that came in as Bloch vectors round-trip through the matrix form.
ordered_json factor_to_json(const DensityMatrix& f) {
  ordered_json m = ordered_json::array();
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      const cplx v = f.matrix.at(r, c);
      m.push_back(ordered_json::array({v.real(), v.imag()}));
    }
  return ordered_json::object({{"matrix", m}});
}

DensityMatrix factor_from_json(const json& j) {
  if (j.is_array()) {
    return pure_from_bloch(bloch_from_json(j));
  }
  if (j.is_object() && j.contains("matrix")) {
    const json& m = j["matrix"];
    if (!m.is_array() || m.size() != 4)
      throw invalid_input_error("factor matrix must have 4 [re, im] entries");
    ComplexMatrix mat(2);
    for (std::size_t i = 0; i < 4; ++i) {
      const json& e = m[i];
      if (!e.is_array() || e.size() != 2)
        throw invalid_input_error("factor matrix entries must be [re, im]");
      mat.a[i] = cplx(e[0].get<double>(), e[1].get<double>());
    }
    return DensityMatrix::from_matrix(std::move(mat));
  }
  throw invalid_input_error("factor must be [x,y,z] or {\"matrix\": ...}");
}

}  // namespace

ordered_json separable_to_json(const SeparableState& s) {
  s.validate();
  ordered_json out;
  out["n"] = s.n_parties;
  ordered_json terms = ordered_json::array();
  for (const SeparableState::Term& t : s.terms) {
    ordered_json term;
    term["p"] = t.p;
    ordered_json factors = ordered_json::array();
    for (const DensityMatrix& f : t.factors) factors.push_back(factor_to_json(f));
    term["bloch"] = factors;
    terms.push_back(term);
  }
  out["terms"] = terms;
  return out;
}

SeparableState separable_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("terms"))
    throw invalid_input_error("separable state file must contain \"n\" and \"terms\"");
  SeparableState s;
  s.n_parties = j["n"].get<int>();
  for (const json& tj : j["terms"]) {
    if (!tj.contains("p") || !tj.contains("bloch"))
      throw invalid_input_error("separable term must contain \"p\" and \"bloch\"");
    SeparableState::Term t;
    t.p = tj["p"].get<double>();
    const json& factors = tj["bloch"];
    if (!factors.is_array() || static_cast<int>(factors.size()) != s.n_parties)
      throw invalid_input_error("separable term must list one factor per party");
    for (const json& f : factors) t.factors.push_back(factor_from_json(f));
    s.terms.push_back(std::move(t));
  }
  s.validate();
  return s;
}

ordered_json settings_to_json(const MeasurementSettings& s) {
  ordered_json out;
  out["n"] = s.n();
  ordered_json pairs = ordered_json::array();
  for (const auto& p : s.parties)
    pairs.push_back(ordered_json::array({bloch_to_json(p.a), bloch_to_json(p.a_prime)}));
  out["pairs"] = pairs;
  return out;
}

MeasurementSettings settings_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n"))
    throw invalid_input_error("settings file must contain \"n\"");
  const int n = j["n"].get<int>();
  MeasurementSettings s;
  if (j.contains("angles")) {
    const json& angles = j["angles"];
    if (!angles.is_array() || static_cast<int>(angles.size()) != n)
      throw invalid_input_error("settings: \"angles\" must list one angle per party");
    for (const json& a : angles) {
      const double phi = a.get<double>();
      const double c = std::cos(phi), sn = std::sin(phi);
      s.parties.push_back({BlochVector{c, sn, 0.0}, BlochVector{-sn, c, 0.0}});
    }
  } else if (j.contains("pairs")) {
    const json& pairs = j["pairs"];
    if (!pairs.is_array() || static_cast<int>(pairs.size()) != n)
      throw invalid_input_error("settings: \"pairs\" must list one pair per party");
    for (const json& p : pairs) {
      if (!p.is_array() || p.size() != 2)
        throw invalid_input_error("settings: each pair must hold two Bloch vectors");
      s.parties.push_back({bloch_from_json(p[0]), bloch_from_json(p[1])});
    }
  } else {
    throw invalid_input_error("settings file must contain \"angles\" or \"pairs\"");
  }
  s.validate();
  return s;
}

ordered_json lhv_model_to_json(const LHVModel& m) {
  m.validate();
  ordered_json out;
  out["lambdas"] = m.n_lambdas();
  out["probs"] = m.probs;
  ordered_json responses = ordered_json::array();
  for (const auto& per_lambda : m.responses) {
    ordered_json parties = ordered_json::array();
    for (const auto& pair : per_lambda) parties.push_back(ordered_json::array({pair[0], pair[1]}));
    responses.push_back(parties);
  }
  out["responses"] = responses;
  return out;
}

LHVModel lhv_model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("probs") || !j.contains("responses"))
    throw invalid_input_error("lhv model file must contain \"probs\" and \"responses\"");
  LHVModel m;
  m.probs = j["probs"].get<std::vector<double>>();
  for (const json& per_lambda : j["responses"]) {
    std::vector<std::array<double, 2>> parties;
    for (const json& pair : per_lambda) {
      if (!pair.is_array() || pair.size() != 2)
        throw invalid_input_error("lhv model responses must be [r0, r1] pairs");
      parties.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    m.responses.push_back(std::move(parties));
  }
  if (j.contains("lambdas") && j["lambdas"].get<int>() != m.n_lambdas())
    throw invalid_input_error("lhv model: \"lambdas\" does not match probs length");
  m.validate();
  return m;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input_error("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error(path + ": " + e.what(), e.byte);
  }
}

void save_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw invalid_input_error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace bell
