#pragma once

#include <memory>
#include <string>
#include <vector>

#include "veccomp/closed_form.hpp"
#include "veccomp/field_function.hpp"
#include "veccomp/modulation.hpp"
#include "veccomp/types.hpp"

namespace veccomp {

// Uniform runtime view over the three codec families so the simulator and
// CLI can drive any of them interchangeably:
//   table     -- designed constellations with nearest-point decoder tables;
//   pam-affine -- closed-form real constellation for affine transforms;
//   qam-conv  -- closed-form square-grid constellation for convolutions.
class Codec {
 public:
  virtual ~Codec() = default;

  virtual std::string family() const = 0;
  virtual int nodes() const = 0;
  virtual int streams() const = 0;
  virtual int input_cardinality(int node) const = 0;
  // The length-L symbol vector node transmits for input s.
  virtual ComplexVector<double> encode(int node, int s) const = 0;
  // Per-stream function estimates from a combined length-L observation.
  virtual RealVector<double> decode(const ComplexVector<double>& y) const = 0;
  // Ground-truth function value for a full input tuple.
  virtual RealVector<double> evaluate(const std::vector<int>& s) const = 0;

  // Maximum-likelihood recovery of one node's input from a noisy copy of its
  // own symbol vector (used by the orthogonal-access baseline); ties resolve
  // to the lowest input.
  int nearest_input(int node, const ComplexVector<double>& y) const;

  // Mean over nodes of the average symbol-vector energy under uniform
  // inputs; the common normalization constant for SNR-calibrated runs.
  double average_symbol_energy() const;
};

// Construction from design outputs / closed-form specs.
std::unique_ptr<Codec> make_table_codec(DesignedCodec<double> designed);
std::unique_ptr<Codec> make_table_codec(const FunctionTable<double>& table,
                                        const std::vector<Constellation<double>>& designs);
std::unique_ptr<Codec> make_affine_codec(AffineSpec spec);
std::unique_ptr<Codec> make_conv_codec(ConvSpec spec);

// Serialization: family-tagged JSON, bit-exact for all stored reals.
std::string codec_to_json(const Codec& codec);
std::unique_ptr<Codec> codec_from_json(const std::string& text);
void save_codec(const Codec& codec, const std::string& path);
std::unique_ptr<Codec> load_codec(const std::string& path);

}  // namespace veccomp
