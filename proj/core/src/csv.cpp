#include "qmboot/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmboot/errors.hpp"

namespace qmboot {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + tmp);
    out << content;
    out.flush();
    if (!out) throw InputError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw InputError("cannot move " + tmp + " into place");
  }
}

namespace {

std::string header(const std::string& config_hash) {
  return "# config=" + config_hash + " version=1\n";
}

}  // namespace

std::string spectrum_csv(const std::vector<SpectrumPoint>& pts, const std::string& config_hash) {
  std::string out = header(config_hash);
  out += "g,n,depth,E0,E0_err,E1,E1_err,gap_raw,gap_anharmonic,gap_err\n";
  for (const auto& pt : pts) {
    GapSample s = gap(pt);
    out += fmt17(pt.g) + "," + std::to_string(pt.n) + "," + std::to_string(pt.depth) + "," +
           fmt17(pt.E0) + "," + fmt17(pt.E0_err) + "," + fmt17(pt.E1) + "," + fmt17(pt.E1_err) +
           "," + fmt17(s.gap_raw) + "," + fmt17(s.gap_anharmonic) + "," + fmt17(s.uncertainty) +
           "\n";
  }
  return out;
}

std::string grid_csv(const FeasibilityGrid& grid, const std::string& config_hash) {
  std::string out = header(config_hash);
  for (std::size_t d = 0; d < grid.box.dims.size(); ++d) {
    out += grid.box.dims[d].name;
    out += ",";
  }
  out += "feasible,min_eigenvalue\n";
  for (std::size_t i = 0; i < grid.feasible.size(); ++i) {
    std::vector<double> c = grid.box.point(i);
    for (double v : c) {
      out += fmt17(v);
      out += ",";
    }
    out += grid.feasible[i] ? "1," : "0,";
    out += fmt17(grid.min_eig[i]);
    out += "\n";
  }
  return out;
}

std::string susceptibility_csv(const std::vector<SusceptibilityPoint>& pts,
                               const std::string& config_hash) {
  std::string out = header(config_hash);
  out += "g,side,dgap_dg\n";
  for (const auto& p : pts) {
    out += fmt17(p.g);
    out += ",";
    out += p.side;
    out += "," + fmt17(p.slope) + "\n";
  }
  return out;
}

std::string oneloop_csv(const OneLoopCurve& curve, const std::string& config_hash) {
  std::string out = header(config_hash);
  out += "g,E0_oneloop,E0_asymptotic_1term\n";
  for (std::size_t i = 0; i < curve.g.size(); ++i)
    out += fmt17(curve.g[i]) + "," + fmt17(curve.E0[i]) + "," + fmt17(curve.asym1[i]) + "\n";
  return out;
}

std::string islands_json(const std::vector<Island>& islands) {
  nlohmann::json j;
  j["islands"] = nlohmann::json::array();
  for (const auto& isl : islands) {
    nlohmann::json e;
    e["E_min"] = isl.E_min();
    e["E_max"] = isl.E_max();
    e["centroid"] = isl.centroid;
    nlohmann::json ext = nlohmann::json::array();
    for (std::size_t d = 0; d < isl.lo.size(); ++d) ext.push_back(isl.extent(d));
    e["extent"] = ext;
    e["depth"] = isl.depth;
    e["tol"] = isl.tol;
    e["merged"] = isl.merged;
    e["source"] = isl.from_profile ? "profile" : "lattice";
    nlohmann::json dims = nlohmann::json::array();
    for (const auto& d : isl.source.dims) dims.push_back(d.name);
    e["dims"] = dims;
    j["islands"].push_back(e);
  }
  return j.dump(2) + "\n";
}

std::string fit_json(const FitParams& fit, int n) {
  nlohmann::json j;
  j["n"] = n;
  j["a"] = fit.a;
  j["b"] = fit.b;
  j["c"] = fit.c;
  j["d"] = fit.d;
  j["anchor"] = fit.anchor;
  j["rms"] = fit.rms;
  j["n_points"] = fit.n_points;
  j["starts_converged"] = fit.starts_converged;
  j["param_err"] = fit.param_err;
  j["at_bound"] = fit.at_bound;
  return j.dump(2) + "\n";
}

GapCurve read_spectrum_csv(const std::string& text) {
  GapCurve curve;
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!saw_header) {
      if (line != "g,n,depth,E0,E0_err,E1,E1_err,gap_raw,gap_anharmonic,gap_err")
        throw InputError("unrecognized spectrum CSV header: " + line);
      saw_header = true;
      continue;
    }
    if (cells.size() != 10)
      throw InputError("bad spectrum CSV row at line " + std::to_string(lineno));
    auto val = [&](std::size_t i) {
      errno = 0;
      char* end = nullptr;
      double v = std::strtod(cells[i].c_str(), &end);
      if (end != cells[i].c_str() + cells[i].size() || errno == ERANGE)
        throw InputError("bad number \"" + cells[i] + "\" at line " + std::to_string(lineno));
      return v;
    };
    GapSample s;
    s.g = val(0);
    curve.n = static_cast<int>(val(1));
    curve.depth = static_cast<int>(val(2));
    s.gap_raw = val(7);
    s.gap_anharmonic = val(8);
    s.uncertainty = val(9);
    curve.samples.push_back(s);
  }
  if (!saw_header) throw InputError("spectrum CSV has no header row");
  return curve;
}

}  // namespace qmboot
