#include "qholo/quantum.hpp"

#include <cmath>

namespace qholo {

namespace {

cplx field_inner(const ComplexField& a, const ComplexField& b) {
  cplx acc(0.0, 0.0);
  for (std::size_t k = 0; k < a.samples.size(); ++k) acc += std::conj(a.samples[k]) * b.samples[k];
  return acc;
}

}  // namespace

bool TwoPhotonState::signal_projected() const {
  for (const StateTerm& t : terms)
    if (t.signal_pol.has_value()) return false;
  return true;
}

double TwoPhotonState::norm_sq() const {
  double acc = 0.0;
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = 0; b < terms.size(); ++b) {
      cplx g = std::conj(terms[a].weight) * terms[b].weight;
      g *= inner(terms[a].idler, terms[b].idler);
      if (terms[a].signal_pol.has_value() != terms[b].signal_pol.has_value())
        throw ValidationError("TwoPhotonState: mixed projected/unprojected signal slots");
      if (terms[a].signal_pol.has_value())
        g *= inner(*terms[a].signal_pol, *terms[b].signal_pol);
      g *= field_inner(terms[a].field, terms[b].field);
      acc += g.real();
    }
  }
  return acc;
}

void TwoPhotonState::validate() const {
  if (terms.empty()) throw ValidationError("TwoPhotonState: no terms");
  const GridSpec& g = terms.front().field.grid;
  for (const StateTerm& t : terms) {
    t.field.validate();
    if (t.field.grid != g) throw ValidationError("TwoPhotonState: term fields on different grids");
  }
}

TwoPhotonState bell_state(const GridSpec& grid) {
  grid.validate();
  ComplexField flat(grid);
  const double v = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  for (cplx& s : flat.samples) s = v;

  const double w = 1.0 / std::sqrt(2.0);
  TwoPhotonState state;
  state.terms.push_back({cplx(w, 0.0), PolarizationKet::L(), PolarizationKet::L(), flat});
  state.terms.push_back({cplx(-w, 0.0), PolarizationKet::R(), PolarizationKet::R(), flat});
  return state;
}

TwoPhotonState apply_metasurface(const TwoPhotonState& state, const ComplexField& psi_L,
                                 const ComplexField& psi_R) {
  state.validate();
  psi_L.validate();
  psi_R.validate();
  if (psi_L.grid != psi_R.grid) throw ValidationError("apply_metasurface: psi grids differ");
  if (psi_L.grid != state.terms.front().field.grid)
    throw ValidationError("apply_metasurface: psi grid does not match state grid");

  TwoPhotonState out;
  out.idler_projected = state.idler_projected;
  for (const StateTerm& t : state.terms) {
    if (!t.signal_pol.has_value())
      throw ValidationError("apply_metasurface: signal polarization slot already projected");
    // The operator replaces the spatial mode: |L> -> |R, psi_L>.
    if (std::abs(t.signal_pol->amp_L) > 0.0) {
      StateTerm nt;
      nt.weight = t.weight * t.signal_pol->amp_L;
      nt.idler = t.idler;
      nt.signal_pol = PolarizationKet::R();
      nt.field = psi_L;
      out.terms.push_back(std::move(nt));
    }
    if (std::abs(t.signal_pol->amp_R) > 0.0) {
      StateTerm nt;
      nt.weight = t.weight * t.signal_pol->amp_R;
      nt.idler = t.idler;
      nt.signal_pol = PolarizationKet::L();
      nt.field = psi_R;
      out.terms.push_back(std::move(nt));
    }
  }
  return out;
}

TwoPhotonState hybrid_state(const ComplexField& psi_L, const ComplexField& psi_R) {
  psi_L.validate();
  psi_R.validate();
  if (psi_L.grid != psi_R.grid) throw ValidationError("hybrid_state: psi grids differ");
  const double w = 1.0 / std::sqrt(2.0);
  TwoPhotonState state;
  state.terms.push_back({cplx(w, 0.0), PolarizationKet::L(), std::nullopt, psi_L});
  state.terms.push_back({cplx(-w, 0.0), PolarizationKet::R(), std::nullopt, psi_R});
  return state;
}

HeraldedState project_idler(const TwoPhotonState& state, const PolarizationKet& polarizer) {
  state.validate();
  if (state.idler_projected) throw ValidationError("project_idler: idler slot already projected");
  if (!polarizer.is_normalized()) throw ValidationError("project_idler: polarizer not normalized");

  HeraldedState out;
  out.state.idler_projected = true;
  for (const StateTerm& t : state.terms) {
    StateTerm nt = t;
    nt.weight = t.weight * inner(polarizer, t.idler);  // <xi|idler>
    nt.idler = polarizer;                              // collapsed; kept for bookkeeping
    out.state.terms.push_back(std::move(nt));
  }
  out.probability = out.state.norm_sq();
  return out;
}

TwoPhotonState project_signal_polarizer(const TwoPhotonState& state, double phi_s) {
  state.validate();
  const PolarizationKet p = PolarizationKet::linear(phi_s);
  TwoPhotonState out;
  out.idler_projected = state.idler_projected;
  for (const StateTerm& t : state.terms) {
    if (!t.signal_pol.has_value())
      throw ValidationError("project_signal_polarizer: state already signal-projected");
    StateTerm nt;
    nt.weight = t.weight * inner(p, *t.signal_pol);
    nt.idler = t.idler;
    nt.signal_pol = std::nullopt;
    nt.field = t.field;
    out.terms.push_back(std::move(nt));
  }
  return out;
}

IntensityMap heralded_intensity(const TwoPhotonState& state) {
  state.validate();
  if (!state.idler_projected)
    throw ValidationError("heralded_intensity: idler slot not projected");
  if (!state.signal_projected())
    throw ValidationError("heralded_intensity: signal polarization slot not projected");

  const GridSpec& grid = state.terms.front().field.grid;
  ComplexField sum(grid);
  for (const StateTerm& t : state.terms)
    for (std::size_t k = 0; k < sum.samples.size(); ++k)
      sum.samples[k] += t.weight * t.field.samples[k];

  IntensityMap map(grid);
  for (std::size_t k = 0; k < map.values.size(); ++k) {
    map.values[k] = std::norm(sum.samples[k]);
    map.total_weight += map.values[k];
  }
  return map;
}

IntensityMap unheralded_intensity(const TwoPhotonState& state) {
  state.validate();
  if (state.idler_projected)
    throw ValidationError("unheralded_intensity: idler slot already projected");

  const GridSpec& grid = state.terms.front().field.grid;
  IntensityMap map(grid);

  const PolarizationKet idler_basis[2] = {PolarizationKet::L(), PolarizationKet::R()};
  const bool signal_open = !state.signal_projected();
  const PolarizationKet signal_basis[2] = {PolarizationKet::L(), PolarizationKet::R()};

  for (const PolarizationKet& ib : idler_basis) {
    const int n_sig = signal_open ? 2 : 1;
    for (int s = 0; s < n_sig; ++s) {
      ComplexField sum(grid);
      for (const StateTerm& t : state.terms) {
        cplx w = t.weight * inner(ib, t.idler);
        if (signal_open) w *= inner(signal_basis[s], *t.signal_pol);
        if (w == cplx(0.0, 0.0)) continue;
        for (std::size_t k = 0; k < sum.samples.size(); ++k)
          sum.samples[k] += w * t.field.samples[k];
      }
      for (std::size_t k = 0; k < map.values.size(); ++k) map.values[k] += std::norm(sum.samples[k]);
    }
  }
  for (double v : map.values) map.total_weight += v;
  return map;
}

double letter_intensity_law(double phi_s, double theta_letter) {
  const double s = std::sin(phi_s - theta_letter / 2.0);
  return s * s;
}

}  // namespace qholo
