#include "seqspace/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "seqspace/error.hpp"

namespace seqspace::io {

namespace {

[[noreturn]] void parse_error(const std::string& message) { fail(ErrorKind::parse, message); }

double number(const Json& j, const char* what) {
  if (!j.is_number()) parse_error(std::string(what) + " must be a number");
  return j.get<double>();
}

double field(const Json& spec, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!spec.contains(key)) {
    if (fallback) return *fallback;
    parse_error(std::string("matrix spec is missing \"") + key + "\"");
  }
  return number(spec.at(key), key);
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {number(j[0], "real part"), number(j[1], "imaginary part")};
  if (j.is_object() && j.contains("re")) {
    return {number(j.at("re"), "re"), j.contains("im") ? number(j.at("im"), "im") : 0.0};
  }
  parse_error("expected a number or an [re, im] pair");
}

std::vector<double> real_list(const Json& spec, const char* key) {
  if (!spec.contains(key) || !spec.at(key).is_array()) parse_error(std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& v : spec.at(key)) out.push_back(number(v, key));
  return out;
}

Json optional_index(const std::optional<Index>& v) { return v ? Json(*v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

const char* to_string(Summability s) {
  switch (s) {
    case Summability::summable: return "summable";
    case Summability::divergent: return "divergent";
    case Summability::unknown: return "unknown";
  }
  return "unknown";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string read_argument(const std::string& arg) {
  const auto t = trim(arg);
  if (!t.empty() && (t.front() == '{' || t.front() == '[' || t.front() == '"')) return std::string(t);
  return read_file(arg);
}

MatrixDescriptor matrix_from_json(const Json& spec) {
  Json object = spec;
  if (spec.is_string()) object = Json{{"family", spec.get<std::string>()}};
  if (!object.is_object() || !object.contains("family") || !object.at("family").is_string()) {
    parse_error("matrix spec must be an object with a \"family\" string");
  }
  const std::string family = object.at("family").get<std::string>();
  try {
    if (family == "identity") return MatrixDescriptor::identity();
    if (family == "cesaro") return MatrixDescriptor::cesaro(field(object, "alpha", 1.0));
    if (family == "norlund") return MatrixDescriptor::norlund(real_list(object, "weights"));
    if (family == "riesz") return MatrixDescriptor::riesz(real_list(object, "weights"));
    if (family == "hausdorff") return MatrixDescriptor::hausdorff(real_list(object, "mu"));
    if (family == "hilbert") return MatrixDescriptor::hilbert();
    if (family == "diagonal") {
      if (object.contains("weights")) {
        std::vector<Complex> w;
        if (!object.at("weights").is_array()) parse_error("\"weights\" must be an array");
        for (const auto& v : object.at("weights")) w.push_back(complex_from_json(v));
        return MatrixDescriptor::diagonal(std::move(w));
      }
      if (object.contains("ratio")) {
        const Complex scale = object.contains("scale") ? complex_from_json(object.at("scale")) : Complex(1.0);
        return MatrixDescriptor::geometric_diagonal(scale, field(object, "ratio"));
      }
      if (object.value("factorial", false)) return MatrixDescriptor::inverse_factorial_diagonal();
      parse_error("diagonal spec needs \"weights\", \"ratio\" or \"factorial\": true");
    }
    if (family == "geometric_diagonal") {
      const Complex scale = object.contains("scale") ? complex_from_json(object.at("scale")) : Complex(1.0);
      return MatrixDescriptor::geometric_diagonal(scale, field(object, "ratio"));
    }
    if (family == "inverse_factorial_diagonal") return MatrixDescriptor::inverse_factorial_diagonal();
    if (family == "power_type") {
      return MatrixDescriptor::power_type(field(object, "gamma", 1.0), field(object, "beta"));
    }
    if (family == "cesaro_inverse") return MatrixDescriptor::cesaro_inverse();
    if (family == "remark_counterexample") return MatrixDescriptor::remark_counterexample();
    if (family == "remark_counterexample_inverse") return MatrixDescriptor::remark_counterexample_inverse();
    if (family == "custom") {
      if (!object.contains("entries") || !object.at("entries").is_array()) {
        parse_error("custom spec needs an \"entries\" array");
      }
      std::vector<SparseEntry> entries;
      for (const auto& e : object.at("entries")) {
        if (!e.is_array() || e.size() < 3 || e.size() > 4) parse_error("custom entries are [n, k, re, im]");
        const double n = number(e[0], "row");
        const double k = number(e[1], "column");
        if (n < 1 || k < 1 || n != std::floor(n) || k != std::floor(k)) parse_error("entry indices must be >= 1");
        const double im = e.size() == 4 ? number(e[3], "im") : 0.0;
        entries.push_back({static_cast<Index>(n), static_cast<Index>(k), {number(e[2], "re"), im}});
      }
      return MatrixDescriptor::from_entries(std::move(entries));
    }
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("bad matrix spec: ") + e.what());
  }
  parse_error("unknown matrix family \"" + family + "\"");
}

Json matrix_info(const MatrixDescriptor& m, double p, Index truncation) {
  Json out;
  out["family"] = to_string(m.family());
  out["name"] = m.name();
  Json params = Json::object();
  for (const auto& [k, v] : m.parameters()) params[k] = v;
  out["parameters"] = params;
  out["flags"] = {{"lower_triangular", m.flags().lower_triangular},
                  {"diagonal", m.flags().diagonal},
                  {"row_monotone", m.flags().row_monotone}};
  out["prefix"] = optional_index(m.prefix());
  out["lower_bandwidth"] = optional_index(m.lower_bandwidth());
  out["upper_bandwidth"] = optional_index(m.upper_bandwidth());
  out["first_column_dominated"] = m.first_column_dominated();
  out["p"] = p;
  out["diagonal_summability"] = to_string(m.diagonal_summability(p));
  out["diagonal_tail_closed_form_1"] = optional_number(m.diagonal_tail_closed_form(p, 1));
  out["has_cataloged_inverse"] = m.cataloged_inverse().has_value();

  const Index window = m.prefix() ? std::min(truncation, *m.prefix()) : truncation;
  const auto columns = check_no_vanishing_columns(m, window);
  out["no_vanishing_columns"] = {{"ok", columns.ok}, {"witness", optional_index(columns.witness)}};
  if (m.lower_triangular()) {
    const auto mono = check_row_monotone(m, window);
    Json witness = nullptr;
    if (mono.witness) witness = {mono.witness->first, mono.witness->second};
    out["row_monotone_check"] = {{"ok", mono.ok}, {"witness", witness}};
  }
  if (m.diagonal_summability(p) != Summability::divergent && !m.prefix()) {
    try {
      const auto growth = check_growth_condition(m, p, window);
      out["growth_condition"] = {{"sup_value", growth.sup_value}, {"slope", growth.slope}, {"bounded", growth.bounded}};
    } catch (const Error& e) {
      out["growth_condition"] = {{"error", e.what()}};
    }
  }
  Json block = Json::array();
  const Index corner = std::min<Index>(window, 6);
  for (Index n = 1; n <= corner; ++n) {
    Json row = Json::array();
    for (Index k = 1; k <= corner; ++k) row.push_back(to_json(m.entry(n, k)));
    block.push_back(row);
  }
  out["leading_block"] = block;
  return out;
}

TruncatedSequence sequence_from_json(const Json& data) {
  const Json* values = &data;
  bool finite = true;
  if (data.is_object()) {
    if (!data.contains("values")) parse_error("sequence object needs \"values\"");
    values = &data.at("values");
    if (data.contains("finite_support")) {
      if (!data.at("finite_support").is_boolean()) parse_error("\"finite_support\" must be a boolean");
      finite = data.at("finite_support").get<bool>();
    }
  }
  if (!values->is_array()) parse_error("sequence must be a JSON array");
  std::vector<Complex> out;
  out.reserve(values->size());
  for (const auto& v : *values) out.push_back(complex_from_json(v));
  return TruncatedSequence(std::move(out), finite);
}

TruncatedSequence sequence_from_csv(std::string_view text) {
  std::map<Index, Complex> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row{std::string(t)};
    while (std::getline(row, cell, ',')) cells.emplace_back(trim(cell));
    auto parse_double = [&](const std::string& s, double& v) {
      const auto* end = s.data() + s.size();
      auto [ptr, ec] = std::from_chars(s.data(), end, v);
      return ec == std::errc() && ptr == end;
    };
    double index = 0.0, re = 0.0, im = 0.0;
    if (cells.size() < 2 || !parse_double(cells[0], index)) {
      if (line_no == 1) continue;
      parse_error("CSV line " + std::to_string(line_no) + " is not index,re,im");
    }
    if (!parse_double(cells[1], re) || (cells.size() > 2 && !parse_double(cells[2], im)) || cells.size() > 3) {
      parse_error("CSV line " + std::to_string(line_no) + " is not index,re,im");
    }
    if (index < 1 || index != std::floor(index)) parse_error("CSV indices must be integers >= 1");
    entries[static_cast<Index>(index)] = {re, im};
  }
  const Index size = entries.empty() ? 0 : entries.rbegin()->first;
  std::vector<Complex> values(size);
  for (const auto& [k, v] : entries) values[k - 1] = v;
  return TruncatedSequence(std::move(values));
}

TruncatedSequence sequence_from_text(std::string_view text) {
  const auto t = trim(text);
  if (!t.empty() && (t.front() == '[' || t.front() == '{')) return sequence_from_json(parse_json(t));
  return sequence_from_csv(t);
}

Json to_json(Complex value) {
  if (value.imag() == 0.0) return value.real();
  return Json::array({value.real(), value.imag()});
}

Json to_json(const TruncatedSequence& x) {
  Json out = Json::array();
  for (const Complex& v : x.values()) out.push_back(Json::array({v.real(), v.imag()}));
  return out;
}

Json to_json(const Check& check) {
  return {{"name", check.name},
          {"lhs", check.lhs},
          {"rhs", check.rhs},
          {"slack", check.slack},
          {"tolerance", check.tolerance},
          {"pass", check.pass}};
}

Json to_json(const std::vector<Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back(to_json(c));
  return out;
}

Json to_json(const NormReport& report) {
  Json out = {{"value", report.value}, {"truncation", report.truncation}, {"sound", report.sound}};
  if (report.tail_bound) out["tail_bound"] = *report.tail_bound;
  return out;
}

Json to_json(const Partition& partition) {
  return {{"breakpoints", partition.breakpoints},
          {"infinite_tail", partition.final_block_infinite},
          {"truncation", partition.truncation}};
}

Json to_json(const FactorizationCertificate& cert) {
  Json out;
  out["mode"] = cert.mode;
  out["pass"] = cert.pass();
  out["y"] = to_json(cert.y);
  out["z"] = to_json(cert.z);
  Json norms = Json::object();
  for (const auto& [k, v] : cert.norms) norms[k] = v;
  out["norms"] = norms;
  out["checks"] = to_json(cert.checks);
  if (cert.partition) out["partition"] = to_json(*cert.partition);
  if (!cert.b.empty()) out["b"] = cert.b;
  if (cert.tail_bound) out["tail_bound"] = *cert.tail_bound;
  return out;
}

Json to_json(const ModulusEstimate& estimate) {
  return {{"epsilon", estimate.epsilon},
          {"constraint", to_string(estimate.constraint)},
          {"pair_count", estimate.pair_count},
          {"delta_sample", estimate.delta_sample},
          {"beta_sample", estimate.beta_sample},
          {"delta_max", estimate.delta_max},
          {"delta_mean", estimate.delta_mean},
          {"distance_error", estimate.distance_error},
          {"estimate_kind", "upper"}};
}

Json to_json(const UniformWitness& witness) {
  return {{"norm_x0", witness.norm_x},
          {"norm_y0", witness.norm_y},
          {"distance", witness.distance},
          {"sup_alpha_value", witness.sup_alpha_value},
          {"analytic_bound", witness.analytic_bound},
          {"bound_ok", witness.bound_ok},
          {"checks", to_json(witness.checks)}};
}

Json to_json(const DualCheckReport& report) {
  Json out = {{"pairing_value", to_json(report.pairing_value)},
              {"pairing_abs", report.pairing_abs},
              {"rhs_bound", report.rhs_bound},
              {"slack", report.slack},
              {"ok", report.ok}};
  if (report.partial_dual_norm) out["partial_dual_norm"] = *report.partial_dual_norm;
  return out;
}

Json to_json(const ColumnGrowth& growth) {
  return {{"columns", growth.columns},
          {"column_q_sums", growth.column_q_sums},
          {"truncations", growth.truncations},
          {"first_column_sums", growth.first_column_sums},
          {"growth_slope", growth.growth_slope}};
}

Json to_json(const MembershipDiagnostic& diagnostic) {
  return {{"truncations", diagnostic.truncations},
          {"norms_at_n", diagnostic.norms_at_n},
          {"verdict", to_string(diagnostic.verdict)},
          {"kind", "heuristic"}};
}

}  // namespace seqspace::io
