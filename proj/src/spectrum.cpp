#include "resdet/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "resdet/errors.hpp"

namespace resdet {

Spectrum::Spectrum(std::vector<double> eigenvalues, int dimension, double shift,
                   std::optional<double> weyl_constant, std::optional<RootLaw> law)
    : lambda_(std::move(eigenvalues)),
      dim_(dimension),
      shift_(shift),
      weyl_(weyl_constant),
      law_(law) {
  if (dim_ < 1) throw ValidationError("dimension", "must be a positive integer");
  for (std::size_t n = 0; n < lambda_.size(); ++n) {
    if (!(lambda_[n] > 0) || !std::isfinite(lambda_[n]))
      throw ValidationError("positivity", "eigenvalue " + std::to_string(n + 1) +
                                              " is not a positive finite number");
    if (n > 0 && lambda_[n] < lambda_[n - 1])
      throw ValidationError("nondecreasing",
                            "eigenvalue " + std::to_string(n + 1) + " decreases");
  }
  if (weyl_ && !(*weyl_ > 0))
    throw ValidationError("weyl_constant", "must be positive");
  if (law_) {
    if (!(law_->slope > 0)) throw ValidationError("root_law", "slope must be positive");
    if (law_->root(law_->first_level) <= 0 ||
        law_->multiplicity(law_->first_level) <= 0 || law_->mult1 < 0)
      throw ValidationError("root_law", "roots and multiplicities must be positive");
    if (!lambda_.empty() &&
        law_->root(law_->first_level) < std::sqrt(lambda_.back()) * (1 - 1e-12))
      throw ValidationError("root_law", "law continues below the stored spectrum");
  }
  rho_.reserve(lambda_.size());
  for (double l : lambda_) rho_.push_back(std::sqrt(l));
}

Spectrum Spectrum::circle(long levels) {
  std::vector<double> ev;
  for (long n = 1; n <= levels; ++n) {
    ev.push_back(double(n) * n);
    ev.push_back(double(n) * n);
  }
  return Spectrum(std::move(ev), 1, 0, 0.25, RootLaw{1, 0, 2, 0, levels + 1});
}

Spectrum Spectrum::sphere(long levels) {
  std::vector<double> ev;
  for (long j = 0; j < levels; ++j)
    for (long k = 0; k < 2 * j + 1; ++k) ev.push_back((j + 0.5) * (j + 0.5));
  return Spectrum(std::move(ev), 2, 0.25, 1.0, RootLaw{1, 0.5, 1, 2, levels});
}

std::optional<double> Spectrum::weyl_deviation() const {
  if (!weyl_) return std::nullopt;
  double dev = 0;
  for (std::size_t n = 0; n < lambda_.size(); ++n)
    dev = std::max(dev, std::abs(lambda_[n] / std::pow(double(n + 1), 2.0 / dim_) - *weyl_));
  return dev;
}

LengthSpectrum::LengthSpectrum(std::vector<double> lengths,
                               std::vector<long> multiplicities, int genus)
    : genus_(genus) {
  if (lengths.size() != multiplicities.size())
    throw ValidationError("multiplicities", "one multiplicity per length required");
  if (genus < 2) throw ValidationError("genus", "genus must be at least 2");
  std::map<double, long> folded;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0) || !std::isfinite(lengths[i]))
      throw ValidationError("positivity", "length " + std::to_string(i + 1) +
                                              " is not a positive finite number");
    if (multiplicities[i] < 1)
      throw ValidationError("multiplicities", "multiplicity must be a positive integer");
    folded[lengths[i]] += multiplicities[i];
  }
  for (auto& [t, m] : folded) {
    tau_.push_back(t);
    mult_.push_back(m);
  }
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sidecar_of(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension(".json");
  if (!std::filesystem::exists(p))
    throw ParseError(p.string(), 0, "missing sidecar JSON");
  return slurp(p.string());
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  std::size_t used = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    return false;
  }
  return trim(s.substr(used)).empty();
}

// Splits CSV rows; a first row that fails numeric parsing is a header.
template <class Row>
void for_each_row(const std::string& csv, const std::string& name, Row&& row) {
  std::istringstream in(csv);
  std::string line;
  long lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(trim(cell));
    std::vector<double> values;
    bool ok = true;
    for (auto& c : cells) {
      double v;
      if (!parse_double(c, v)) {
        ok = false;
        break;
      }
      values.push_back(v);
    }
    if (!ok) {
      if (first) {
        first = false;
        continue;
      }
      throw ParseError(name, lineno, "non-numeric field in '" + line + "'");
    }
    first = false;
    row(values, lineno);
  }
}

nlohmann::json parse_json(const std::string& text, const std::string& name) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(name, 0, std::string("sidecar: ") + e.what());
  }
}

}  // namespace

Spectrum parse_spectrum(const std::string& csv, const std::string& sidecar_json,
                        const std::string& name) {
  std::vector<double> ev;
  for_each_row(csv, name, [&](const std::vector<double>& v, long lineno) {
    if (v.size() != 1) throw ParseError(name, lineno, "expected one eigenvalue per line");
    ev.push_back(v[0]);
  });
  auto j = parse_json(sidecar_json, name);
  if (!j.is_object() || !j.contains("dimension"))
    throw ValidationError("dimension", "sidecar must give \"dimension\"");
  try {
    int d = j.at("dimension").get<int>();
    double shift = j.value("shift", 0.0);
    std::optional<double> weyl;
    if (j.contains("weyl_constant") && !j["weyl_constant"].is_null())
      weyl = j["weyl_constant"].get<double>();
    std::optional<RootLaw> law;
    if (j.contains("root_law")) {
      auto& r = j["root_law"];
      law = RootLaw{r.value("slope", 1.0), r.value("offset", 0.0), r.value("mult0", 1.0),
                    r.value("mult1", 0.0), r.value("first_level", 1L)};
    }
    return Spectrum(std::move(ev), d, shift, weyl, law);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(name, 0, std::string("sidecar: ") + e.what());
  }
}

LengthSpectrum parse_length_spectrum(const std::string& csv,
                                     const std::string& sidecar_json,
                                     const std::string& name) {
  std::vector<double> len;
  std::vector<long> mult;
  for_each_row(csv, name, [&](const std::vector<double>& v, long lineno) {
    if (v.size() != 2) throw ParseError(name, lineno, "expected 'length,multiplicity'");
    if (v[1] != std::floor(v[1]))
      throw ParseError(name, lineno, "multiplicity must be an integer");
    len.push_back(v[0]);
    mult.push_back(static_cast<long>(v[1]));
  });
  int genus = 2;
  if (!sidecar_json.empty()) {
    auto j = parse_json(sidecar_json, name);
    try {
      genus = j.at("genus").get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(name, 0, std::string("sidecar: ") + e.what());
    }
  }
  return LengthSpectrum(std::move(len), std::move(mult), genus);
}

Spectrum load_spectrum(const std::string& path, FileFormat) {
  return parse_spectrum(slurp(path), sidecar_of(path), path);
}

LengthSpectrum load_length_spectrum(const std::string& path, FileFormat,
                                    std::optional<int> genus_override) {
  std::string side;
  std::filesystem::path p(path);
  p.replace_extension(".json");
  if (std::filesystem::exists(p))
    side = slurp(p.string());
  else if (!genus_override)
    throw ParseError(p.string(), 0, "missing sidecar JSON and no --genus given");
  if (genus_override) side = "{\"genus\": " + std::to_string(*genus_override) + "}";
  return parse_length_spectrum(slurp(path), side, path);
}

}  // namespace resdet
