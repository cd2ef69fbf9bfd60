#ifndef WSHIFT_ORACLE_REPORT_HPP
#define WSHIFT_ORACLE_REPORT_HPP

// Primary-versus-oracle comparison suites behind `oracle compare`.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "wshift/lattice2d.hpp"
#include "wshift/measures.hpp"
#include "wshift/oracle.hpp"
#include "wshift/positivity.hpp"
#include "wshift/weights1d.hpp"

namespace wshift::oracle {

struct SuiteCheck {
  std::string name;
  bool pass = false;
  double max_error = 0.0;
  std::string detail;
};

/// One instance of every family, with the parameters used across the docs.
inline std::vector<WeightDiagram2D> sample_diagrams() {
  std::vector<WeightDiagram2D> out;
  out.push_back(make_thm_compactper(make_two_atom_shift(3.0), make_unilateral_shift(),
                                    make_shift({0.5}, ConstantTail{1.0}, "col0")));
  out.push_back(make_example_bergman());
  out.push_back(make_example_exof1atom(0.5, 0.8));
  out.push_back(make_thm_important({4, 3, 2}, geometric_cap_column(1.0, 0.5)));
  out.push_back(make_example_stair(0.5));
  out.push_back(make_thm_khypo(2.0, 0.7));
  out.push_back(make_adhoc({make_bergman_like(2), make_unilateral_shift()}, make_shift({0.6}, ConstantTail{1.0})));
  return out;
}

/// gamma_bruteforce against gamma2d on [0, n)^2, relative error, wherever the
/// product is a normal double; log moments against MomentGrid everywhere.
inline std::vector<SuiteCheck> gamma_suite(std::size_t n = 30) {
  std::vector<SuiteCheck> out;
  for (const auto& d : sample_diagrams()) {
    SuiteCheck c{"gamma:" + d.family_name(), true, 0.0, ""};
    const MomentGrid grid(d, n - 1, n - 1);
    std::size_t underflow = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double lb = log_gamma_bruteforce(d, {i, j});
        c.max_error = std::max(c.max_error, std::abs(grid.log_gamma(i, j) - lb) / std::max(1.0, std::abs(lb)));
        const double a = gamma2d(d, {i, j}), b = gamma_bruteforce(d, {i, j});
        if (std::abs(a) < 1e-290 || std::abs(b) < 1e-290) {
          ++underflow;
          continue;
        }
        c.max_error = std::max(c.max_error, std::abs(a - b) / std::abs(a));
      }
    c.pass = c.max_error <= 1e-12;
    if (underflow > 0) c.detail = std::to_string(underflow) + " points compared in log form only";
    out.push_back(c);
  }
  return out;
}

struct PsdAgreement {
  std::size_t trials = 0;
  std::size_t agreements = 0;
  std::size_t band_cases = 0;  // disagreements inside the boundary band
  std::size_t failures = 0;    // disagreements outside it
};

/// Moment matrices of random atomic 2-variable measures, shifted by
/// delta * I with delta of random sign and magnitude 10^-u, u in [1, 9], or
/// left exact. Cholesky and Jacobi classifications must agree, except where
/// both report |lambda_min| <= 1e-9.
inline PsdAgreement psd_agreement(std::size_t trials = 200, unsigned seed = 20240601u) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PsdAgreement r;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t natoms = 1 + static_cast<std::size_t>(unit(rng) * 4.0);
    std::vector<Atom2D> atoms;
    for (std::size_t a = 0; a < natoms; ++a) atoms.push_back({2.0 * unit(rng), 2.0 * unit(rng), 0.05 + unit(rng)});
    const AtomicMeasure2D mu(atoms);
    const std::size_t k = 1 + (t % 2);
    const auto idx = graded_lex_indices(k);
    SymmetricMatrix m(idx.size());
    for (std::size_t p = 0; p < idx.size(); ++p)
      for (std::size_t q = 0; q < idx.size(); ++q)
        m(p, q) = measure_moment(mu, idx[p].m1 + idx[q].m1, idx[p].m2 + idx[q].m2);
    if (t % 5 != 0) {
      const double delta = (unit(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, -1.0 - 8.0 * unit(rng));
      for (std::size_t i = 0; i < idx.size(); ++i) m(i, i) += delta;
    }
    const PsdResult primary = is_psd(m);
    const JacobiSpectrum js = psd_bruteforce(m);
    const bool jacobi_psd = js.min() >= -kPsdTol * std::max(1.0, m.trace());
    ++r.trials;
    if (primary.psd == jacobi_psd)
      ++r.agreements;
    else if (std::abs(js.min()) <= 1e-9 && std::abs(primary.lambda_min) <= 1e-9)
      ++r.band_cases;
    else
      ++r.failures;
  }
  return r;
}

inline std::vector<SuiteCheck> psd_suite() {
  const auto r = psd_agreement();
  return {{"psd:cholesky-vs-jacobi", r.failures == 0, static_cast<double>(r.failures),
           std::to_string(r.agreements) + "/" + std::to_string(r.trials) + " agree, " +
               std::to_string(r.band_cases) + " inside the boundary band"}};
}

inline std::vector<SuiteCheck> moments_suite() {
  std::vector<SuiteCheck> out;
  for (double kappa : {1.5, 2.0, 3.0}) {
    const auto m = measure_moment_match(make_two_atom_shift(kappa), two_atom_measure(kappa), 30, 1e-12);
    out.push_back({"moments:W_kappa=" + std::to_string(kappa).substr(0, 3), m.pass, m.worst_relative, ""});
  }
  for (int ell : {1, 2}) {
    const DensityMeasure1D mu{ell == 1 ? DensityFamily::Bergman1 : DensityFamily::Bergman2};
    const auto m = measure_moment_match(make_bergman_like(ell), mu, 10, 1e-8);
    out.push_back({"moments:B+(" + std::to_string(ell) + ")", m.pass, m.worst_relative, ""});
  }
  return out;
}

/// Sturm-bisection section singular values against Givens QR plus inverse iteration.
inline std::vector<SuiteCheck> sections_suite() {
  struct Case {
    UnilateralShift shift;
    std::complex<double> lambda;
    std::size_t n;
  };
  const std::vector<Case> cases{{make_unilateral_shift(), 0.0, 50},
                                {make_unilateral_shift(), 0.9, 200},
                                {make_shift({0.5}, ConstantTail{1.0}), 0.0, 200},
                                {make_shift({0.5, 0.5}, ConstantTail{1.0}), {0.3, 0.4}, 128},
                                {make_bergman_like(2), {0.5, -0.5}, 64},
                                {make_two_atom_shift(2.0), 1.2, 64}};
  SuiteCheck c{"sections:bisection-vs-qr", true, 0.0, ""};
  for (const auto& cs : cases) {
    const double a = section_min_singular(cs.shift, cs.lambda, cs.n);
    const double b = min_singular(make_section(cs.shift, cs.lambda, cs.n));
    c.max_error = std::max(c.max_error, std::abs(a - b));
  }
  c.pass = c.max_error <= 1e-10;
  return {c};
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gamma", "psd", "moments", "sections", "all"};
  return names;
}

inline std::vector<SuiteCheck> run_suite(const std::string& name) {
  if (name == "gamma") return gamma_suite();
  if (name == "psd") return psd_suite();
  if (name == "moments") return moments_suite();
  if (name == "sections") return sections_suite();
  if (name == "all") {
    std::vector<SuiteCheck> out;
    for (const auto& s : {"gamma", "psd", "moments", "sections"}) {
      auto part = run_suite(s);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  throw DomainError("unknown oracle suite '" + name + "'");
}

}  // namespace wshift::oracle

#endif  // WSHIFT_ORACLE_REPORT_HPP
