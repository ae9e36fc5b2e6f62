#include "veccomp/codec.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace veccomp {

namespace {

using nlohmann::json;

json complex_to_json(const Complex<double>& z) { return json::array({z.real(), z.imag()}); }

Complex<double> complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("codec file: complex values must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

// Designed-constellation codec backed by the per-node encoder matrices and
// per-stream decoder tables.
class TableCodec final : public Codec {
 public:
  explicit TableCodec(DesignedCodec<double> designed) : designed_(std::move(designed)) {}

  std::string family() const override { return "table"; }
  int nodes() const override { return designed_.K; }
  int streams() const override { return designed_.L; }
  int input_cardinality(int node) const override { return designed_.Q[size_t(node)]; }

  ComplexVector<double> encode(int node, int s) const override {
    if (s < 0 || s >= input_cardinality(node))
      throw std::invalid_argument("encode: input symbol out of range");
    return designed_.encode(node, s);
  }

  RealVector<double> decode(const ComplexVector<double>& y) const override {
    return decode_vector(designed_, y);
  }

  // A designed codec decodes its own noiseless superposition exactly, so the
  // function value is recovered without storing the original table.
  RealVector<double> evaluate(const std::vector<int>& s) const override {
    if (int(s.size()) != designed_.K)
      throw std::invalid_argument("evaluate: need one input per node");
    ComplexVector<double> sum = ComplexVector<double>::Zero(designed_.L);
    for (int k = 0; k < designed_.K; ++k) sum += encode(k, s[size_t(k)]);
    return decode(sum);
  }

  const DesignedCodec<double>& designed() const { return designed_; }

 private:
  DesignedCodec<double> designed_;
};

class AffineCodec final : public Codec {
 public:
  explicit AffineCodec(AffineSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

  std::string family() const override { return "pam-affine"; }
  int nodes() const override { return spec_.K; }
  int streams() const override { return spec_.L(); }
  int input_cardinality(int) const override { return spec_.Q; }

  ComplexVector<double> encode(int node, int s) const override {
    ComplexVector<double> x(spec_.L());
    for (int ell = 0; ell < spec_.L(); ++ell)
      x[ell] = pam_encode<double>(spec_.A(ell, node), s, spec_.Q,
                                  spec_.Q_list[size_t(node)]);
    return x;
  }

  RealVector<double> decode(const ComplexVector<double>& y) const override {
    RealVector<double> f(spec_.L());
    for (int ell = 0; ell < spec_.L(); ++ell)
      f[ell] = pam_decode<double>(y[ell].real(), ell, spec_);
    return f;
  }

  RealVector<double> evaluate(const std::vector<int>& s) const override {
    if (int(s.size()) != spec_.K)
      throw std::invalid_argument("evaluate: need one input per node");
    return spec_.evaluate(s);
  }

  const AffineSpec& spec() const { return spec_; }

 private:
  AffineSpec spec_;
};

class ConvCodec final : public Codec {
 public:
  explicit ConvCodec(ConvSpec spec) : spec_(std::move(spec)) {
    if (spec_.L() < 1)
      throw std::invalid_argument("conv codec: kernel shorter than the node count");
  }

  std::string family() const override { return "qam-conv"; }
  int nodes() const override { return spec_.K; }
  int streams() const override { return spec_.L(); }
  int input_cardinality(int) const override { return spec_.Q; }

  ComplexVector<double> encode(int node, int s) const override {
    ComplexVector<double> x(spec_.L());
    for (int ell = 0; ell < spec_.L(); ++ell) x[ell] = conv_encode<double>(spec_, ell, node, s);
    return x;
  }

  RealVector<double> decode(const ComplexVector<double>& y) const override {
    RealVector<double> f(spec_.L());
    for (int ell = 0; ell < spec_.L(); ++ell)
      f[ell] = qam_decode<double>(y[ell], spec_.Q, spec_.K);
    return f;
  }

  RealVector<double> evaluate(const std::vector<int>& s) const override {
    if (int(s.size()) != spec_.K)
      throw std::invalid_argument("evaluate: need one input per node");
    return spec_.evaluate(s);
  }

  const ConvSpec& spec() const { return spec_; }

 private:
  ConvSpec spec_;
};

json table_to_json(const TableCodec& codec) {
  const auto& d = codec.designed();
  json j;
  j["family"] = "table";
  j["K"] = d.K;
  j["L"] = d.L;
  j["Q"] = d.Q;
  json encoders = json::array();
  for (int k = 0; k < d.K; ++k) {
    json rows = json::array();
    for (int q = 0; q < d.Q[size_t(k)]; ++q) {
      json symbol = json::array();
      for (int ell = 0; ell < d.L; ++ell) symbol.push_back(complex_to_json(d.encoders[size_t(k)](q, ell)));
      rows.push_back(std::move(symbol));
    }
    encoders.push_back(std::move(rows));
  }
  j["encoders"] = std::move(encoders);
  json decoders = json::array();
  for (const auto& table : d.decoders) {
    json t;
    t["ell"] = table.ell;
    json points = json::array();
    for (const auto& p : table.points) points.push_back(complex_to_json(p));
    t["points"] = std::move(points);
    t["labels"] = table.labels;
    t["dedup_tol"] = table.dedup_tol;
    decoders.push_back(std::move(t));
  }
  j["decoders"] = std::move(decoders);
  j["eps_star"] = d.eps_star;
  json modes = json::array();
  for (auto m : d.modes) modes.push_back(m == DesignMode::kExact ? "exact" : "inexact");
  j["modes"] = std::move(modes);
  return j;
}

std::unique_ptr<Codec> table_from_json(const json& j) {
  DesignedCodec<double> d;
  d.K = j.at("K").get<int>();
  d.L = j.at("L").get<int>();
  d.Q = j.at("Q").get<std::vector<int>>();
  if (d.K < 1 || d.L < 1 || int(d.Q.size()) != d.K)
    throw std::invalid_argument("codec file: inconsistent table dimensions");
  const auto& encoders = j.at("encoders");
  if (int(encoders.size()) != d.K)
    throw std::invalid_argument("codec file: need one encoder table per node");
  for (int k = 0; k < d.K; ++k) {
    const auto& rows = encoders[size_t(k)];
    if (int(rows.size()) != d.Q[size_t(k)])
      throw std::invalid_argument("codec file: encoder row count mismatch");
    ComplexMatrix<double> e(d.Q[size_t(k)], d.L);
    for (int q = 0; q < d.Q[size_t(k)]; ++q) {
      const auto& symbol = rows[size_t(q)];
      if (int(symbol.size()) != d.L)
        throw std::invalid_argument("codec file: encoder symbol length mismatch");
      for (int ell = 0; ell < d.L; ++ell) e(q, ell) = complex_from_json(symbol[size_t(ell)]);
    }
    d.encoders.push_back(std::move(e));
  }
  const auto& decoders = j.at("decoders");
  if (int(decoders.size()) != d.L)
    throw std::invalid_argument("codec file: need one decoder table per stream");
  for (const auto& t : decoders) {
    StreamCodec<double> table;
    table.ell = t.at("ell").get<int>();
    for (const auto& p : t.at("points")) table.points.push_back(complex_from_json(p));
    table.labels = t.at("labels").get<std::vector<double>>();
    table.dedup_tol = t.at("dedup_tol").get<double>();
    if (table.points.size() != table.labels.size() || table.points.empty())
      throw std::invalid_argument("codec file: decoder points/labels mismatch");
    d.decoders.push_back(std::move(table));
  }
  d.eps_star = j.at("eps_star").get<std::vector<double>>();
  for (const auto& m : j.at("modes"))
    d.modes.push_back(m.get<std::string>() == "exact" ? DesignMode::kExact
                                                      : DesignMode::kInexact);
  if (int(d.eps_star.size()) != d.L || int(d.modes.size()) != d.L)
    throw std::invalid_argument("codec file: per-stream metadata length mismatch");
  return std::make_unique<TableCodec>(std::move(d));
}

json affine_to_json(const AffineCodec& codec) {
  const auto& s = codec.spec();
  json j;
  j["family"] = "pam-affine";
  j["K"] = s.K;
  j["Q"] = s.Q;
  j["coeff_cardinalities"] = s.Q_list;
  json a = json::array();
  for (int ell = 0; ell < s.L(); ++ell) {
    json row = json::array();
    for (int k = 0; k < s.K; ++k) row.push_back(s.A(ell, k));
    a.push_back(std::move(row));
  }
  j["A"] = std::move(a);
  std::vector<std::int64_t> b(size_t(s.L()));
  for (int ell = 0; ell < s.L(); ++ell) b[size_t(ell)] = s.b[ell];
  j["b"] = b;
  return j;
}

std::unique_ptr<Codec> affine_from_json(const json& j) {
  AffineSpec s;
  s.K = j.at("K").get<int>();
  s.Q = j.at("Q").get<int>();
  s.Q_list = j.at("coeff_cardinalities").get<std::vector<int>>();
  const auto& a = j.at("A");
  const auto& b = j.at("b");
  if (a.empty() || a.size() != b.size())
    throw std::invalid_argument("codec file: inconsistent A/b shapes");
  s.A.resize(int(a.size()), s.K);
  s.b.resize(int(b.size()));
  for (int ell = 0; ell < int(a.size()); ++ell) {
    const auto& row = a[size_t(ell)];
    if (int(row.size()) != s.K)
      throw std::invalid_argument("codec file: coefficient row length mismatch");
    for (int k = 0; k < s.K; ++k) s.A(ell, k) = row[size_t(k)].get<int>();
    s.b[ell] = b[size_t(ell)].get<std::int64_t>();
  }
  return std::make_unique<AffineCodec>(std::move(s));
}

json conv_to_json(const ConvCodec& codec) {
  const auto& s = codec.spec();
  json j;
  j["family"] = "qam-conv";
  j["K"] = s.K;
  j["Q"] = s.Q;
  j["kernel"] = s.a;
  return j;
}

std::unique_ptr<Codec> conv_from_json(const json& j) {
  return std::make_unique<ConvCodec>(conv_function_spec(
      j.at("kernel").get<std::vector<int>>(), j.at("K").get<int>(), j.at("Q").get<int>()));
}

}  // namespace

int Codec::nearest_input(int node, const ComplexVector<double>& y) const {
  const int q_count = input_cardinality(node);
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int q = 0; q < q_count; ++q) {
    const double d = (y - encode(node, q)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

double Codec::average_symbol_energy() const {
  double acc = 0.0;
  for (int k = 0; k < nodes(); ++k) {
    double node_acc = 0.0;
    const int q_count = input_cardinality(k);
    for (int q = 0; q < q_count; ++q) node_acc += encode(k, q).squaredNorm();
    acc += node_acc / q_count;
  }
  return acc / nodes();
}

std::unique_ptr<Codec> make_table_codec(DesignedCodec<double> designed) {
  return std::make_unique<TableCodec>(std::move(designed));
}

std::unique_ptr<Codec> make_table_codec(const FunctionTable<double>& table,
                                        const std::vector<Constellation<double>>& designs) {
  return make_table_codec(build_codec(table, designs));
}

std::unique_ptr<Codec> make_affine_codec(AffineSpec spec) {
  return std::make_unique<AffineCodec>(std::move(spec));
}

std::unique_ptr<Codec> make_conv_codec(ConvSpec spec) {
  return std::make_unique<ConvCodec>(std::move(spec));
}

std::string codec_to_json(const Codec& codec) {
  json j;
  if (const auto* t = dynamic_cast<const TableCodec*>(&codec)) {
    j = table_to_json(*t);
  } else if (const auto* a = dynamic_cast<const AffineCodec*>(&codec)) {
    j = affine_to_json(*a);
  } else if (const auto* c = dynamic_cast<const ConvCodec*>(&codec)) {
    j = conv_to_json(*c);
  } else {
    throw std::invalid_argument("codec_to_json: unknown codec implementation");
  }
  return j.dump(2) + "\n";
}

std::unique_ptr<Codec> codec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("codec file: ") + e.what());
  }
  const std::string family = j.at("family").get<std::string>();
  if (family == "table") return table_from_json(j);
  if (family == "pam-affine") return affine_from_json(j);
  if (family == "qam-conv") return conv_from_json(j);
  throw std::invalid_argument("codec file: unknown family '" + family + "'");
}

void save_codec(const Codec& codec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_codec: cannot open '" + path + "' for writing");
  out << codec_to_json(codec);
  if (!out) throw std::runtime_error("save_codec: write to '" + path + "' failed");
}

std::unique_ptr<Codec> load_codec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_codec: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return codec_from_json(buf.str());
}

}  // namespace veccomp
