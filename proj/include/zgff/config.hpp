#ifndef ZGFF_CONFIG_HPP
#define ZGFF_CONFIG_HPP

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "zgff/errors.hpp"
#include "zgff/io.hpp"
#include "zgff/surface.hpp"

namespace zgff {

enum class Pipeline { Surface, LevelLines, Scales, Fs, Rw, Tension, EndToEnd };

inline std::string toString(Pipeline p) {
  switch (p) {
    case Pipeline::Surface: return "surface";
    case Pipeline::LevelLines: return "levellines";
    case Pipeline::Scales: return "scales";
    case Pipeline::Fs: return "fs";
    case Pipeline::Rw: return "rw";
    case Pipeline::Tension: return "tension";
    case Pipeline::EndToEnd: return "endtoend";
  }
  return "?";
}

inline Pipeline parsePipeline(const std::string& s) {
  for (auto p : {Pipeline::Surface, Pipeline::LevelLines, Pipeline::Scales, Pipeline::Fs, Pipeline::Rw, Pipeline::Tension,
                 Pipeline::EndToEnd})
    if (toString(p) == s) return p;
  if (s == "simulate") return Pipeline::Surface;
  if (s == "rw-oracle") return Pipeline::Rw;
  throw ConfigError("unknown pipeline '" + s + "'");
}

/// Flat key = value configuration with sections. Every field has a
/// default; unknown keys are rejected.
struct ExperimentConfig {
  Pipeline pipeline = Pipeline::Surface;

  // [model]
  double p = 2.0;
  double beta = 1.0;
  std::string boundary = "all-k";  // all-k | split-arc
  int boundaryK = 0;
  std::string arcSides = "0111";   // bottom right top left, split-arc only
  int plateau = 0;                 // H for split-arc
  int level = 0;                   // n for split-arc
  std::optional<int> floor = 0;
  std::optional<int> ceiling;
  int L = 64;

  // [run]
  std::uint64_t sweeps = 2000;
  std::uint64_t burnIn = 500;
  std::uint64_t thin = 10;
  std::vector<std::uint64_t> seeds{1};
  std::string outDir = "out";

  // [levels]
  int levels = 1;               // m
  double profileNn = 0.0;       // 0: (L/4)^{3/2}

  // [scales]
  int box = 0;                  // 0: default proxy box
  std::uint64_t heightSamples = 20000;
  double thresholdConstant = 5.0;
  std::string heightTable;      // "h:P,h:P,..." overrides estimation

  // [fs]
  double sigma = 1.0;
  double fsT = 10.0;
  double fsDt = 1e-3;
  int fsPoints = 400;

  // [rw]
  double rwQ = 0.25;
  double rwN = 200.0;
  int rwWidth = 0;              // 0: smallest even width >= 6 N^{2/3}
  std::uint64_t rwSamples = 2000;
  std::string rwMethod = "transfer";  // transfer | mcmc | enumeration | auto
  long rwThin = 5;

  // [tension]
  int tensionAngles = 64;
  long tensionColumns = 1024;

  // [endtoend]
  int kMax = 6;

  ModelParams model() const {
    ModelParams m;
    m.p = p;
    m.beta = beta;
    const auto kind = parseBoundaryKind(boundary);
    if (kind == BoundarySpec::Kind::Custom) throw ConfigError("custom boundaries cannot be given in a config file");
    if (kind == BoundarySpec::Kind::AllK) {
      m.boundary = BoundarySpec::allK(boundaryK);
    } else {
      std::array<bool, 4> sides{};
      for (std::size_t i = 0; i < 4; ++i) sides[i] = arcSides[i] == '1';
      m.boundary = BoundarySpec::splitArc(sides);
    }
    m.plateau = plateau;
    m.level = level;
    if (floor) m.floor = BoundSpec::uniform(*floor);
    if (ceiling) m.ceiling = BoundSpec::uniform(*ceiling);
    m.validate();
    return m;
  }

  std::map<int, double> parsedHeightTable() const {
    std::map<int, double> t;
    std::stringstream ss(heightTable);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto c = item.find(':');
      if (c == std::string::npos) throw ConfigError("height table entries must look like h:P");
      try {
        t[std::stoi(item.substr(0, c))] = std::stod(item.substr(c + 1));
      } catch (const std::exception&) {
        throw ConfigError("bad height table entry '" + item + "'");
      }
    }
    return t;
  }

  void validate() const {
    if (L < 2) throw ConfigError("L must be at least 2");
    if (!(beta > 0)) throw ConfigError("beta must be positive");
    if (!(p >= 1)) throw ConfigError("p must be at least 1");
    if (arcSides.size() != 4 || arcSides.find_first_not_of("01") != std::string::npos)
      throw ConfigError("arc_sides must be four characters from {0,1}");
    if (sweeps <= burnIn) throw ConfigError("sweeps must exceed burn_in");
    if (thin == 0) throw ConfigError("thin must be positive");
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    if (levels < 1) throw ConfigError("levels must be positive");
    if (!(sigma > 0) || !(fsT > 0) || !(fsDt > 0) || fsPoints < 2) throw ConfigError("invalid [fs] parameters");
    if (!(rwQ > 0 && rwQ < 0.5) || !(rwN > 0) || rwSamples < 20) throw ConfigError("invalid [rw] parameters");
    if (tensionAngles < 16) throw ConfigError("tension needs at least 16 angles");
    if (kMax < 1 || kMax > 8) throw ConfigError("k_max must lie in [1, 8]");
    if (!heightTable.empty()) parsedHeightTable();
    parseBoundaryKind(boundary);
  }
};

namespace detail {

template <class T>
T parseValue(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T out{};
  is >> out;
  if (is.fail() || !(is >> std::ws).eof()) throw ConfigError("bad value '" + v + "' for " + key);
  return out;
}

inline std::optional<int> parseOptionalInt(const std::string& key, const std::string& v) {
  if (v == "none" || v.empty()) return std::nullopt;
  return parseValue<int>(key, v);
}

}  // namespace detail

inline ExperimentConfig parseConfig(std::istream& is) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::ini_parser::read_ini(is, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig c;
  static const std::set<std::string> known{
      "pipeline", "model.p", "model.beta", "model.boundary", "model.boundary_k", "model.arc_sides", "model.plateau",
      "model.level", "model.floor", "model.ceiling", "model.L", "run.sweeps", "run.burn_in", "run.thin", "run.seeds",
      "run.out", "levels.m", "levels.nn", "scales.box", "scales.samples", "scales.threshold_constant", "scales.table",
      "fs.sigma", "fs.T", "fs.dt", "fs.points", "rw.q", "rw.N", "rw.width", "rw.samples", "rw.method", "rw.thin",
      "tension.angles", "tension.columns", "endtoend.k_max"};
  for (const auto& [section, sub] : pt) {
    if (sub.empty()) {
      if (!known.count(section)) throw ConfigError("unknown key '" + section + "'");
      continue;
    }
    for (const auto& [key, node] : sub) {
      const std::string full = section + "." + key;
      if (!known.count(full)) throw ConfigError("unknown key '" + full + "'");
      (void)node;
    }
  }
  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = pt.get_optional<std::string>(boost::property_tree::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  };
  using detail::parseValue;
  if (auto v = get("pipeline")) c.pipeline = parsePipeline(*v);
  if (auto v = get("model.p")) c.p = parseValue<double>("p", *v);
  if (auto v = get("model.beta")) c.beta = parseValue<double>("beta", *v);
  if (auto v = get("model.boundary")) c.boundary = *v;
  if (auto v = get("model.boundary_k")) c.boundaryK = parseValue<int>("boundary_k", *v);
  if (auto v = get("model.arc_sides")) c.arcSides = *v;
  if (auto v = get("model.plateau")) c.plateau = parseValue<int>("plateau", *v);
  if (auto v = get("model.level")) c.level = parseValue<int>("level", *v);
  if (auto v = get("model.floor")) c.floor = detail::parseOptionalInt("floor", *v);
  if (auto v = get("model.ceiling")) c.ceiling = detail::parseOptionalInt("ceiling", *v);
  if (auto v = get("model.L")) c.L = parseValue<int>("L", *v);
  if (auto v = get("run.sweeps")) c.sweeps = parseValue<std::uint64_t>("sweeps", *v);
  if (auto v = get("run.burn_in")) c.burnIn = parseValue<std::uint64_t>("burn_in", *v);
  if (auto v = get("run.thin")) c.thin = parseValue<std::uint64_t>("thin", *v);
  if (auto v = get("run.seeds")) {
    c.seeds.clear();
    std::stringstream ss(*v);
    std::string s;
    while (std::getline(ss, s, ','))
      if (!s.empty()) c.seeds.push_back(parseValue<std::uint64_t>("seeds", s));
  }
  if (auto v = get("run.out")) c.outDir = *v;
  if (auto v = get("levels.m")) c.levels = parseValue<int>("m", *v);
  if (auto v = get("levels.nn")) c.profileNn = parseValue<double>("nn", *v);
  if (auto v = get("scales.box")) c.box = parseValue<int>("box", *v);
  if (auto v = get("scales.samples")) c.heightSamples = parseValue<std::uint64_t>("samples", *v);
  if (auto v = get("scales.threshold_constant")) c.thresholdConstant = parseValue<double>("threshold_constant", *v);
  if (auto v = get("scales.table")) c.heightTable = *v;
  if (auto v = get("fs.sigma")) c.sigma = parseValue<double>("sigma", *v);
  if (auto v = get("fs.T")) c.fsT = parseValue<double>("T", *v);
  if (auto v = get("fs.dt")) c.fsDt = parseValue<double>("dt", *v);
  if (auto v = get("fs.points")) c.fsPoints = parseValue<int>("points", *v);
  if (auto v = get("rw.q")) c.rwQ = parseValue<double>("q", *v);
  if (auto v = get("rw.N")) c.rwN = parseValue<double>("N", *v);
  if (auto v = get("rw.width")) c.rwWidth = parseValue<int>("width", *v);
  if (auto v = get("rw.samples")) c.rwSamples = parseValue<std::uint64_t>("samples", *v);
  if (auto v = get("rw.method")) c.rwMethod = *v;
  if (auto v = get("rw.thin")) c.rwThin = parseValue<long>("thin", *v);
  if (auto v = get("tension.angles")) c.tensionAngles = parseValue<int>("angles", *v);
  if (auto v = get("tension.columns")) c.tensionColumns = parseValue<long>("columns", *v);
  if (auto v = get("endtoend.k_max")) c.kMax = parseValue<int>("k_max", *v);
  c.validate();
  return c;
}

inline ExperimentConfig parseConfigString(const std::string& text) {
  std::istringstream is(text);
  return parseConfig(is);
}

inline ExperimentConfig loadConfigFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  return parseConfig(is);
}

/// Canonical serialization; parsing it back gives the same config.
inline std::string toText(const ExperimentConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("none"); };
  os << "pipeline = " << toString(c.pipeline) << "\n\n";
  os << "[model]\np = " << c.p << "\nbeta = " << c.beta << "\nboundary = " << c.boundary << "\nboundary_k = " << c.boundaryK
     << "\narc_sides = " << c.arcSides << "\nplateau = " << c.plateau << "\nlevel = " << c.level << "\nfloor = " << opt(c.floor)
     << "\nceiling = " << opt(c.ceiling) << "\nL = " << c.L << "\n\n";
  os << "[run]\nsweeps = " << c.sweeps << "\nburn_in = " << c.burnIn << "\nthin = " << c.thin << "\nseeds = ";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) os << (i ? "," : "") << c.seeds[i];
  os << "\nout = " << c.outDir << "\n\n";
  os << "[levels]\nm = " << c.levels << "\nnn = " << c.profileNn << "\n\n";
  os << "[scales]\nbox = " << c.box << "\nsamples = " << c.heightSamples << "\nthreshold_constant = " << c.thresholdConstant
     << "\ntable = " << c.heightTable << "\n\n";
  os << "[fs]\nsigma = " << c.sigma << "\nT = " << c.fsT << "\ndt = " << c.fsDt << "\npoints = " << c.fsPoints << "\n\n";
  os << "[rw]\nq = " << c.rwQ << "\nN = " << c.rwN << "\nwidth = " << c.rwWidth << "\nsamples = " << c.rwSamples
     << "\nmethod = " << c.rwMethod << "\nthin = " << c.rwThin << "\n\n";
  os << "[tension]\nangles = " << c.tensionAngles << "\ncolumns = " << c.tensionColumns << "\n\n";
  os << "[endtoend]\nk_max = " << c.kMax << "\n";
  return os.str();
}

/// Hash of the scientific content; the output directory is excluded so
/// that the same experiment written elsewhere keeps its hash.
inline std::string configHash(const ExperimentConfig& c) {
  ExperimentConfig k = c;
  k.outDir.clear();
  return hex64(fnv1a(toText(k)));
}

}  // namespace zgff

#endif  // ZGFF_CONFIG_HPP
