#pragma once

#include <optional>
#include <string>
#include <vector>

namespace resdet {

// Closed-form continuation of a spectrum past its stored prefix: levels
// j >= first_level have root rho_j = slope*j + offset with multiplicity
// mult0 + mult1*j. The circle is slope=1, offset=0, mult=2 from j=1; the
// shifted sphere operator is slope=1, offset=1/2, mult=1+2j from j=0.
struct RootLaw {
  double slope = 1;
  double offset = 0;
  double mult0 = 1;
  double mult1 = 0;
  long first_level = 1;

  double root(double j) const { return slope * j + offset; }
  double multiplicity(double j) const { return mult0 + mult1 * j; }
};

class Spectrum {
 public:
  Spectrum(std::vector<double> eigenvalues, int dimension, double shift = 0,
           std::optional<double> weyl_constant = std::nullopt,
           std::optional<RootLaw> law = std::nullopt);

  // Nonzero circle spectrum n^2 (n != 0), `levels` levels stored, the rest
  // supplied by the root law.
  static Spectrum circle(long levels);
  // Spectrum of sqrt(Laplacian + 1/4) squared on the round 2-sphere:
  // (j+1/2)^2 with multiplicity 2j+1.
  static Spectrum sphere(long levels);

  const std::vector<double>& eigenvalues() const { return lambda_; }
  const std::vector<double>& roots() const { return rho_; }
  int dimension() const { return dim_; }
  double shift() const { return shift_; }
  const std::optional<double>& weyl_constant() const { return weyl_; }
  const std::optional<RootLaw>& law() const { return law_; }
  std::size_t size() const { return lambda_.size(); }

  // max_n |lambda_n / n^{2/d} - weyl_constant| over the stored prefix.
  std::optional<double> weyl_deviation() const;

 private:
  std::vector<double> lambda_, rho_;
  int dim_;
  double shift_;
  std::optional<double> weyl_;
  std::optional<RootLaw> law_;
};

class LengthSpectrum {
 public:
  // Entries with equal length are folded by adding multiplicities.
  LengthSpectrum(std::vector<double> lengths, std::vector<long> multiplicities,
                 int genus);

  const std::vector<double>& lengths() const { return tau_; }
  const std::vector<long>& multiplicities() const { return mult_; }
  int genus() const { return genus_; }
  bool empty() const { return tau_.empty(); }

 private:
  std::vector<double> tau_;
  std::vector<long> mult_;
  int genus_;
};

enum class FileFormat { csv };

// Reads `path` plus the sidecar `<stem>.json` next to it. Sidecar keys for
// spectra: dimension, shift, weyl_constant (optional), root_law (optional
// object with slope, offset, mult0, mult1, first_level).
Spectrum load_spectrum(const std::string& path, FileFormat format = FileFormat::csv);
// Sidecar key: genus. `genus_override` replaces it when given.
LengthSpectrum load_length_spectrum(const std::string& path,
                                    FileFormat format = FileFormat::csv,
                                    std::optional<int> genus_override = std::nullopt);

Spectrum parse_spectrum(const std::string& csv, const std::string& sidecar_json,
                        const std::string& name = "<memory>");
LengthSpectrum parse_length_spectrum(const std::string& csv,
                                     const std::string& sidecar_json,
                                     const std::string& name = "<memory>");

}  // namespace resdet
