#include "wigtom/detector.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>

#include "wigtom/errors.hpp"
#include "wigtom/fockspace.hpp"
#include "wigtom/textio.hpp"

namespace wigtom::detector {

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::IdealPnr: return "ideal_pnr";
    case Kind::LossyPnr: return "lossy_pnr";
    case Kind::GeneralDiagonal: return "general_diagonal";
  }
  return "unknown";
}

Kind kind_from_name(const std::string& name) {
  if (name == "ideal_pnr") return Kind::IdealPnr;
  if (name == "lossy_pnr") return Kind::LossyPnr;
  if (name == "general_diagonal") return Kind::GeneralDiagonal;
  throw ConfigError("unknown detector kind '" + name + "'");
}

PovmElement ideal_pnr_povm(int k, int m0) {
  if (m0 < 0) throw DomainError("ideal_pnr_povm: m0 must be >= 0");
  if (k < 0 || k > m0) {
    throw DomainError("ideal_pnr_povm: outcome " + std::to_string(k) +
                      " out of range for m0=" + std::to_string(m0));
  }
  PovmElement e;
  e.outcome_index = k;
  e.weights.assign(m0 + 1, 0.0);
  e.weights[k] = 1.0;
  return e;
}

PovmElement lossy_pnr_povm(int k, double eta, int m0) {
  if (m0 < 0) throw DomainError("lossy_pnr_povm: m0 must be >= 0");
  if (k < 0 || k > m0) {
    throw DomainError("lossy_pnr_povm: outcome " + std::to_string(k) +
                      " out of range for m0=" + std::to_string(m0));
  }
  if (eta <= 0.0 || eta > 1.0) {
    throw DomainError("lossy_pnr_povm: eta must lie in (0, 1]");
  }
  PovmElement e;
  e.outcome_index = k;
  e.weights.assign(m0 + 1, 0.0);
  for (int m = k; m <= m0; ++m) e.weights[m] = fock::binomial_loss(k, m, eta);
  return e;
}

DetectorModel DetectorModel::ideal_pnr(int m0, bool with_overflow) {
  DetectorModel model;
  model.kind = Kind::IdealPnr;
  model.eta = 1.0;
  model.m0 = m0;
  for (int k = 0; k <= m0; ++k) model.elements.push_back(ideal_pnr_povm(k, m0));
  if (with_overflow) {
    PovmElement ov;
    ov.outcome_index = m0 + 1;
    ov.weights.assign(m0 + 1, 0.0);
    ov.overflow = true;
    model.elements.push_back(std::move(ov));
    model.has_overflow = true;
  }
  return model;
}

DetectorModel DetectorModel::lossy_pnr(double eta, int m0, int clicks,
                                       bool with_overflow) {
  if (clicks < 0) clicks = m0 + 1;
  if (clicks < 1 || clicks > m0 + 1) {
    throw DomainError("lossy_pnr: clicks must lie in [1, m0+1]");
  }
  DetectorModel model;
  model.kind = Kind::LossyPnr;
  model.eta = eta;
  model.m0 = m0;
  for (int k = 0; k < clicks; ++k) {
    model.elements.push_back(lossy_pnr_povm(k, eta, m0));
  }
  if (with_overflow) {
    // Residual per m, accumulated as 1 - partial sum so the set sums to
    // one to round-off even when clicks < m0+1.
    PovmElement ov;
    ov.outcome_index = clicks;
    ov.overflow = true;
    ov.weights.assign(m0 + 1, 0.0);
    for (int m = 0; m <= m0; ++m) {
      double covered = 0.0;
      for (int k = 0; k < clicks; ++k) covered += model.elements[k].weights[m];
      double res = 1.0 - covered;
      ov.weights[m] = res > 0.0 ? res : 0.0;
    }
    model.elements.push_back(std::move(ov));
    model.has_overflow = true;
  }
  return model;
}

DetectorModel DetectorModel::general_diagonal(
    std::vector<std::vector<double>> diags) {
  if (diags.empty()) throw DomainError("general_diagonal: no outcomes");
  const std::size_t len = diags[0].size();
  if (len == 0) throw DomainError("general_diagonal: empty diagonals");
  DetectorModel model;
  model.kind = Kind::GeneralDiagonal;
  model.m0 = static_cast<int>(len) - 1;
  for (std::size_t k = 0; k < diags.size(); ++k) {
    if (diags[k].size() != len) {
      throw DomainError("general_diagonal: ragged diagonals");
    }
    for (double w : diags[k]) {
      if (!(w >= 0.0 && w <= 1.0)) {
        throw DomainError("general_diagonal: weights must lie in [0, 1]");
      }
    }
    PovmElement e;
    e.outcome_index = static_cast<int>(k);
    e.weights = std::move(diags[k]);
    model.elements.push_back(std::move(e));
  }
  return model;
}

double analytic_wigner(const PovmElement& element, double alpha_sq) {
  if (alpha_sq < 0) throw DomainError("analytic_wigner: alpha_sq must be >= 0");
  const double y = 4.0 * alpha_sq;
  long double acc = 0.0L;
  double sign = 1.0;
  for (int m = 0; m < static_cast<int>(element.weights.size()); ++m) {
    if (element.weights[m] != 0.0) {
      acc += sign * element.weights[m] * fock::laguerre(m, y);
    }
    sign = -sign;
  }
  return (2.0 / std::numbers::pi) * std::exp(-2.0 * alpha_sq) *
         static_cast<double>(acc);
}

CompletenessReport check_completeness(const DetectorModel& model) {
  CompletenessReport report;
  for (int m = 0; m <= model.m0; ++m) {
    double sum = 0.0;
    for (const auto& e : model.elements) sum += e.weights[m];
    const double dev = std::abs(1.0 - sum);
    if (dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst_m = m;
    }
  }
  return report;
}

void save_povm(const DetectorModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "# wigtom-povm v1\n";
  out << "# kind " << kind_name(model.kind) << "\n";
  out << "# eta " << textio::fmt_g17(model.eta) << "\n";
  out << "# m0 " << model.m0 << "\n";
  out << "# outcomes " << model.outcome_count() << "\n";
  out << "# overflow " << (model.has_overflow ? 1 : 0) << "\n";
  out << "m";
  for (const auto& e : model.elements) out << "\tk" << e.outcome_index;
  out << "\n";
  for (int m = 0; m <= model.m0; ++m) {
    out << m;
    for (const auto& e : model.elements) {
      out << "\t" << textio::fmt_g17(e.weights[m]);
    }
    out << "\n";
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

namespace {

std::string header_value(const std::string& line, const std::string& key,
                         std::size_t line_no) {
  const std::string prefix = "# " + key + " ";
  if (line.rfind(prefix, 0) != 0) {
    throw ParseError("expected '" + prefix + "...'", line_no, 1);
  }
  return line.substr(prefix.size());
}

}  // namespace

DetectorModel load_povm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() {
    if (!std::getline(in, line)) {
      throw ParseError("unexpected end of file", line_no + 1, 1);
    }
    ++line_no;
  };

  next_line();
  if (line != "# wigtom-povm v1") {
    throw ParseError("not a wigtom-povm v1 file", line_no, 1);
  }
  next_line();
  const Kind kind = kind_from_name(header_value(line, "kind", line_no));
  next_line();
  const double eta = std::strtod(header_value(line, "eta", line_no).c_str(), nullptr);
  next_line();
  const int m0 = std::atoi(header_value(line, "m0", line_no).c_str());
  next_line();
  const int outcomes = std::atoi(header_value(line, "outcomes", line_no).c_str());
  next_line();
  const bool overflow = header_value(line, "overflow", line_no) == "1";
  if (m0 < 0 || outcomes < 1) {
    throw ParseError("invalid m0/outcomes header", line_no, 1);
  }

  next_line();  // column header row
  auto head = textio::split_fields(line);
  if (static_cast<int>(head.values.size()) != outcomes + 1 ||
      head.values[0] != "m") {
    throw ParseError("column header does not match declared outcomes",
                     line_no, 1);
  }

  DetectorModel model;
  model.kind = kind;
  model.eta = eta;
  model.m0 = m0;
  model.has_overflow = overflow;
  model.elements.resize(outcomes);
  for (int k = 0; k < outcomes; ++k) {
    const std::string& name = head.values[k + 1];
    if (name.empty() || name[0] != 'k') {
      throw ParseError("outcome column must be named k<index>", line_no,
                       head.columns[k + 1]);
    }
    model.elements[k].outcome_index = std::atoi(name.c_str() + 1);
    model.elements[k].weights.assign(m0 + 1, 0.0);
  }
  if (overflow) model.elements.back().overflow = true;

  for (int m = 0; m <= m0; ++m) {
    next_line();
    auto f = textio::split_fields(line);
    if (static_cast<int>(f.values.size()) != outcomes + 1) {
      throw ParseError("expected " + std::to_string(outcomes + 1) + " fields",
                       line_no, 1);
    }
    if (std::atoi(f.values[0].c_str()) != m) {
      throw ParseError("row index mismatch", line_no, f.columns[0]);
    }
    for (int k = 0; k < outcomes; ++k) {
      char* end = nullptr;
      const double w = std::strtod(f.values[k + 1].c_str(), &end);
      if (end == f.values[k + 1].c_str() || *end != '\0') {
        throw ParseError("malformed weight", line_no, f.columns[k + 1]);
      }
      if (!(w >= 0.0 && w <= 1.0)) {
        throw ParseError("weight outside [0, 1]", line_no, f.columns[k + 1]);
      }
      model.elements[k].weights[m] = w;
    }
  }
  return model;
}

}  // namespace wigtom::detector
