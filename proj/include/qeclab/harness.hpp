#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qeclab/codes.hpp"
#include "qeclab/decode.hpp"
#include "qeclab/noise.hpp"
#include "qeclab/pauli.hpp"

namespace qeclab {

// ---------------------------------------------------------------------------
// counter-based trial RNG: the stream for trial i depends only on
// (master seed, i), so results are identical for any worker count

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(trial)));
}

// ---------------------------------------------------------------------------

struct TrialRecord {
  std::uint64_t trial = 0;
  PauliTerm error{1};
  SyndromeRecord syndrome;
  PauliTerm correction{1};
  bool decoded = false;  // lookup produced a correction at all
  bool success = false;
};

struct RateEstimate {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double estimate = 0;
  double wilson_low = 0, wilson_high = 0;

  static RateEstimate from_counts(std::size_t trials, std::size_t failures) {
    if (trials == 0) throw std::invalid_argument("RateEstimate: zero trials");
    RateEstimate r;
    r.trials = trials;
    r.failures = failures;
    r.estimate = static_cast<double>(failures) / static_cast<double>(trials);
    const double z = 1.959963984540054;  // 95%
    const double n = static_cast<double>(trials), ph = r.estimate;
    const double denom = 1.0 + z * z / n;
    const double centre = ph + z * z / (2 * n);
    const double half = z * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n));
    r.wilson_low = (centre - half) / denom;
    r.wilson_high = (centre + half) / denom;
    return r;
  }
};

namespace detail {

/// Runs `trial(i)` for i in [0, trials) across workers; trial returns
/// whether the run failed.  Any per-trial side effects must be indexed by i.
inline std::size_t run_trials(std::size_t trials, std::size_t workers,
                              const std::function<bool(std::uint64_t)>& trial) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, trials);
  if (workers <= 1) {
    std::size_t failures = 0;
    for (std::uint64_t i = 0; i < trials; ++i) failures += trial(i) ? 1 : 0;
    return failures;
  }
  std::vector<std::size_t> partial(workers, 0);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      std::size_t local = 0;
      for (std::uint64_t i = w; i < trials; i += workers) local += trial(i) ? 1 : 0;
      partial[w] = local;
    });
  }
  for (auto& th : pool) th.join();
  std::size_t failures = 0;
  for (auto f : partial) failures += f;
  return failures;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// lookup-decoded Monte Carlo

/// Code-capacity pipeline: sample error, classical syndrome, table lookup,
/// residual classification.  A syndrome missing from the table counts as a
/// logical failure (the decoder surrenders).
inline RateEstimate logical_error_rate(const CodeSpec& code, const PauliChannel& channel,
                                       std::size_t trials, std::uint64_t seed,
                                       std::size_t workers = 1,
                                       std::vector<TrialRecord>* trace = nullptr) {
  channel.check();
  const SyndromeTable table = build_lookup(code);
  if (trace) trace->assign(trials, TrialRecord{});
  auto one = [&](std::uint64_t i) -> bool {
    auto rng = trial_rng(seed, i);
    const PauliTerm error = sample_pauli_error(channel, code.n, rng);
    const SyndromeRecord syn = syndrome_of(code, error);
    auto corr = table.lookup(syn);
    bool success = false;
    if (corr) {
      const auto verdict = classify_residual(code, multiply(error, *corr));
      success = verdict.success;
    }
    if (trace) {
      auto& rec = (*trace)[i];
      rec.trial = i;
      rec.error = error;
      rec.syndrome = syn;
      rec.correction = corr.value_or(PauliTerm::identity(code.n));
      rec.decoded = corr.has_value();
      rec.success = success;
    }
    return !success;
  };
  const std::size_t failures = detail::run_trials(trials, workers, one);
  return RateEstimate::from_counts(trials, failures);
}

// ---------------------------------------------------------------------------
// concatenation analytics

struct ConcatenationCurve {
  std::vector<double> level_rates;  // p^k_L for k = 0..k_max
  double threshold = 0;             // p_th = 1/c
};

/// p^k_L = (c p)^{2^k} / c; level 0 reduces to p itself.
inline ConcatenationCurve concatenation_curve(double c, double p, std::size_t k_max) {
  if (c <= 0) throw std::invalid_argument("concatenation_curve: need c > 0");
  if (p < 0 || p > 1) throw std::invalid_argument("concatenation_curve: p outside [0,1]");
  ConcatenationCurve out;
  out.threshold = 1.0 / c;
  for (std::size_t k = 0; k <= k_max; ++k)
    out.level_rates.push_back(std::pow(c * p, std::pow(2.0, static_cast<double>(k))) / c);
  return out;
}

// ---------------------------------------------------------------------------
// surface-code scaling

struct ScanCell {
  std::size_t N = 0;
  double p = 0;
  RateEstimate rate;
};

/// I.i.d. X errors on a clean surface, matched with mwpm_decode; a trial
/// fails when the residual spans the north/south boundaries (anticommutes
/// with the fixed logical Z chain).
inline RateEstimate surface_logical_rate(const SurfaceLattice& lat, double p,
                                         std::size_t trials, std::uint64_t seed,
                                         std::size_t workers = 1) {
  auto one = [&](std::uint64_t i) -> bool {
    auto rng = trial_rng(seed, i);
    std::bernoulli_distribution flip(p);
    PauliTerm error(lat.n);
    for (std::size_t q = 0; q < lat.n; ++q)
      if (flip(rng)) error.set_op(q, 'X');
    const auto defects = defects_from_error(lat, error);
    const auto match = mwpm_decode(lat, defects);
    const PauliTerm residual = multiply(error, match.correction);
    return !commutes(residual, lat.logical_z);
  };
  const std::size_t failures = detail::run_trials(trials, workers, one);
  return RateEstimate::from_counts(trials, failures);
}

inline std::vector<ScanCell> surface_scaling_scan(const std::vector<std::size_t>& n_list,
                                                  const std::vector<double>& p_list,
                                                  std::size_t trials, std::uint64_t seed,
                                                  std::size_t workers = 1) {
  std::vector<ScanCell> cells;
  for (auto N : n_list) {
    const SurfaceLattice lat = make_surface(N);
    for (auto p : p_list) {
      ScanCell cell;
      cell.N = N;
      cell.p = p;
      // distinct stream per cell, still reproducible
      const std::uint64_t cell_seed =
          splitmix64(seed ^ splitmix64(N * 1000003ULL + std::uint64_t(p * 1e9)));
      cell.rate = surface_logical_rate(lat, p, trials, cell_seed, workers);
      cells.push_back(cell);
    }
  }
  return cells;
}

// ---------------------------------------------------------------------------
// resource accounting

/// Physical qubits per code family: surface 2N^2, Bacon-Shor n1*n2,
/// level-k concatenation n^k, parity code N*q.
inline std::size_t qubit_resource_count(const std::string& family, std::size_t a,
                                        std::size_t b = 0) {
  auto ipow = [](std::size_t base, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= base;
    return r;
  };
  if (family == "surface") return 2 * a * a;
  if (family == "bacon_shor") return a * b;
  if (family == "parity_loss") return a * b;
  if (family == "steane_concat") return ipow(7, a);
  if (family == "shor_concat") return ipow(9, a);
  if (family == "rep3_concat") return ipow(3, a);
  throw std::invalid_argument("qubit_resource_count: unknown family " + family);
}

}  // namespace qeclab
