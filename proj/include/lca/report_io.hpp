/**
 * @brief JSON documents and plain-text rendering for landscape reports.
 *
 * Integers (counts, dimensions, indices) are written as JSON integers, reals
 * in shortest round-trip form.
 */
#pragma once

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "lca/error.hpp"
#include "lca/spectra.hpp"
#include "lca/tables.hpp"
#include "lca/topology.hpp"

namespace lca {

using Json = nlohmann::json;

/// Shortest decimal text that parses back to the same double.
inline std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Exact count as a JSON integer when it fits in 64 bits, else as a decimal string.
inline Json count_to_json(const BigCount& c) {
  if (c <= std::numeric_limits<std::uint64_t>::max()) return Json(static_cast<std::uint64_t>(c));
  return Json(c.str());
}

inline Json spectrum_to_json(const Spectrum& s) {
  return Json{{"distinct", s.distinct()}, {"multiplicities", s.multiplicities()}};
}

inline Json table_to_json(const ContingencyTable& k) { return Json(k.to_rows()); }

inline ContingencyTable table_from_json(const Json& j) {
  return ContingencyTable::from_rows(j.get<std::vector<std::vector<int>>>());
}

inline Json record_to_json(const SubmanifoldRecord& r) {
  return Json{{"table", table_to_json(r.table)},
              {"J", r.j},
              {"d0", r.d0},
              {"dplus", r.dplus},
              {"dminus", r.dminus},
              {"kind", std::string(to_string(r.kind))},
              {"nonzero_entries", r.table.nonzero_fingerprint()}};
}

inline SubmanifoldRecord record_from_json(const Json& j) {
  SubmanifoldRecord r;
  r.table = table_from_json(j.at("table"));
  r.j = j.at("J").get<double>();
  r.d0 = j.at("d0").get<std::int64_t>();
  r.dplus = j.at("dplus").get<std::int64_t>();
  r.dminus = j.at("dminus").get<std::int64_t>();
  r.kind = kind_from_string(j.at("kind").get<std::string>());
  return r;
}

struct KindCounts {
  std::size_t maxima = 0, minima = 0, saddles = 0, flats = 0;
};

inline KindCounts count_kinds(const std::vector<SubmanifoldRecord>& recs) {
  KindCounts c;
  for (const auto& r : recs) {
    switch (r.kind) {
      case Kind::maximum: ++c.maxima; break;
      case Kind::minimum: ++c.minima; break;
      case Kind::saddle: ++c.saddles; break;
      case Kind::flat: ++c.flats; break;
    }
  }
  return c;
}

/// {"n", "profiles", "records", "summary", "warnings"}; the caller adds "seed" and "command".
inline Json report_to_json(const LandscapeReport& rep) {
  Json records = Json::array();
  for (const auto& r : rep.records) records.push_back(record_to_json(r));
  const KindCounts kc = count_kinds(rep.records);
  return Json{{"n", rep.summary.n},
              {"profiles", {{"rho", spectrum_to_json(rep.rho)}, {"theta", spectrum_to_json(rep.theta)}}},
              {"records", std::move(records)},
              {"summary",
               {{"n", rep.summary.n},
                {"table_count", rep.summary.table_count},
                {"j_max", rep.summary.j_max},
                {"j_min", rep.summary.j_min},
                {"maxima", kc.maxima},
                {"minima", kc.minima},
                {"saddles", kc.saddles},
                {"flats", kc.flats}}},
              {"warnings", rep.summary.warnings}};
}

inline LandscapeReport report_from_json(const Json& j) {
  LandscapeReport rep;
  const auto& prof = j.at("profiles");
  rep.rho = Spectrum(prof.at("rho").at("distinct").get<std::vector<double>>(),
                     prof.at("rho").at("multiplicities").get<std::vector<int>>());
  rep.theta = Spectrum(prof.at("theta").at("distinct").get<std::vector<double>>(),
                       prof.at("theta").at("multiplicities").get<std::vector<int>>());
  for (const auto& r : j.at("records")) rep.records.push_back(record_from_json(r));
  const auto& s = j.at("summary");
  rep.summary.n = s.at("n").get<int>();
  rep.summary.table_count = s.at("table_count").get<std::uint64_t>();
  rep.summary.j_max = s.at("j_max").get<double>();
  rep.summary.j_min = s.at("j_min").get<double>();
  rep.summary.warnings = j.at("warnings").get<std::vector<std::string>>();
  return rep;
}

inline std::string table_inline(const ContingencyTable& k) {
  std::string s = "[";
  for (int i = 0; i < k.rows(); ++i) {
    s += i ? ",[" : "[";
    for (int j = 0; j < k.cols(); ++j) s += (j ? "," : "") + std::to_string(k(i, j));
    s += "]";
  }
  return s + "]";
}

inline std::string margins_inline(const std::vector<int>& m) {
  std::string s = "(";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
  return s + ")";
}

/// Characteristics laid out one submanifold per column, in report order.
inline std::string render_table(const LandscapeReport& rep) {
  std::ostringstream os;
  os << "Critical submanifolds: N=" << rep.summary.n << ", rho degeneracies "
     << margins_inline(rep.rho.multiplicities()) << ", theta degeneracies "
     << margins_inline(rep.theta.multiplicities()) << "\n";

  std::vector<std::vector<std::string>> rows = {
      {"No."}, {"Landscape value"}, {"Manifold dimension"}, {"Positive axis direction"}, {"Negative axis direction"},
      {"Type"}};
  for (std::size_t c = 0; c < rep.records.size(); ++c) {
    const auto& r = rep.records[c];
    rows[0].push_back(std::to_string(c + 1));
    rows[1].push_back(shortest(r.j));
    rows[2].push_back(std::to_string(r.d0));
    rows[3].push_back(std::to_string(r.dplus));
    rows[4].push_back(std::to_string(r.dminus));
    rows[5].push_back(std::string(to_string(r.kind)));
  }
  std::size_t label_w = 0, cell_w = 0;
  for (const auto& row : rows) {
    label_w = std::max(label_w, row[0].size());
    for (std::size_t c = 1; c < row.size(); ++c) cell_w = std::max(cell_w, row[c].size());
  }
  for (const auto& row : rows) {
    os << std::left << std::setw(static_cast<int>(label_w)) << row[0];
    for (std::size_t c = 1; c < row.size(); ++c) os << "  " << std::right << std::setw(static_cast<int>(cell_w)) << row[c];
    os << "\n";
  }
  os << "Contingency tables:\n";
  for (std::size_t c = 0; c < rep.records.size(); ++c) {
    os << "  " << (c + 1) << ": " << table_inline(rep.records[c].table) << "\n";
  }
  for (const auto& w : rep.summary.warnings) os << "warning: " << w << "\n";
  return os.str();
}

/// Parse a spectrum object: {"distinct", "multiplicities"} or {"diagonal", "cluster_tol"?}.
/// With allow_margins_only, {"multiplicities"} alone yields stand-in values (r-1, ..., 0).
inline Spectrum spectrum_from_json(const Json& j, double default_tol, bool allow_margins_only) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidSpectrum, "spectrum must be a JSON object");
  try {
    if (j.contains("diagonal")) {
      const double tol = j.contains("cluster_tol") ? j.at("cluster_tol").get<double>() : default_tol;
      return build_spectrum(j.at("diagonal").get<std::vector<double>>(), tol);
    }
    if (j.contains("distinct")) {
      return Spectrum(j.at("distinct").get<std::vector<double>>(), j.at("multiplicities").get<std::vector<int>>());
    }
    if (j.contains("multiplicities")) {
      if (!allow_margins_only) {
        throw Error(ErrorCode::InvalidSpectrum, "this command needs eigenvalues (\"distinct\" or \"diagonal\")");
      }
      auto m = j.at("multiplicities").get<std::vector<int>>();
      std::vector<double> d;
      for (std::size_t i = 0; i < m.size(); ++i) d.push_back(double(m.size() - 1 - i));
      return Spectrum(std::move(d), std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpectrum, std::string("malformed spectrum: ") + e.what());
  }
  throw Error(ErrorCode::InvalidSpectrum, "spectrum needs \"distinct\"+\"multiplicities\" or \"diagonal\"");
}

}  // namespace lca
