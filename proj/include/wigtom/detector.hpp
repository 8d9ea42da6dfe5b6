#pragma once

#include <string>
#include <vector>

namespace wigtom::detector {

enum class Kind { IdealPnr, LossyPnr, GeneralDiagonal };

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);

/// One diagonal POVM element: weights[m] = <m|M_k|m> for m = 0..m0.
struct PovmElement {
  int outcome_index = 0;
  std::vector<double> weights;
  bool overflow = false;  // declared bin for residual completeness mass

  int m0() const { return static_cast<int>(weights.size()) - 1; }
};

struct CompletenessReport {
  double max_deviation = 0.0;
  int worst_m = 0;
};

/// A diagonal POVM set over the truncated Fock space. Immutable after
/// construction; freely shareable across workers.
struct DetectorModel {
  Kind kind = Kind::IdealPnr;
  double eta = 1.0;
  int m0 = 50;
  std::vector<PovmElement> elements;
  bool has_overflow = false;

  int outcome_count() const { return static_cast<int>(elements.size()); }

  /// Perfect PNR detector: projectors |k><k| for k = 0..m0, plus an
  /// overflow bin (zero mass here) when with_overflow is set.
  static DetectorModel ideal_pnr(int m0, bool with_overflow = true);

  /// PNR detector with efficiency eta; clicks is the number of regular
  /// outcomes (default m0+1). Residual mass 1 - sum_k p(k|m) lands in the
  /// overflow bin so the set stays complete even when clicks < m0+1.
  static DetectorModel lossy_pnr(double eta, int m0, int clicks = -1,
                                 bool with_overflow = true);

  /// User-supplied diagonals (dark counts etc.); the reconstruction
  /// pipeline is agnostic to where the weights came from.
  static DetectorModel general_diagonal(std::vector<std::vector<double>> diags);
};

/// Projector element |k><k| on a space truncated at m0.
PovmElement ideal_pnr_povm(int k, int m0);

/// Element with weights[m] = p(k|m) for m >= k, zero below k.
PovmElement lossy_pnr_povm(int k, double eta, int m0);

/// Closed-form Wigner value of a diagonal element:
/// (2/pi) e^{-2x} sum_m (-1)^m w[m] L_m(4x), x = |alpha|^2.
/// Bounded in [-2/pi, 2/pi] for weights in [0, 1].
double analytic_wigner(const PovmElement& element, double alpha_sq);

/// Max over m of |1 - sum_k weights_k[m]| and the offending m.
/// Violations are reported, never thrown.
CompletenessReport check_completeness(const DetectorModel& model);

/// Plain-text tabular POVM format, version "wigtom-povm v1": header rows
/// carry kind/eta/m0/outcomes/overflow, then one row per m with one column
/// per outcome. Values round-trip bit-exactly.
void save_povm(const DetectorModel& model, const std::string& path);
DetectorModel load_povm(const std::string& path);

}  // namespace wigtom::detector
