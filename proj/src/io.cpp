#include "mirror/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace mirror::io {
namespace {

std::string format_number(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const Json& arr, const char* name) {
  if (!arr.is_array()) throw std::invalid_argument(std::string("chain json: '") + name + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  return v;
}

}  // namespace

Json to_json(const ChainSpecd& spec) {
  Json family;
  family["kind"] = family_name(spec.family);
  if (const auto* hahn = std::get_if<Hahn>(&spec.family)) {
    family["p"] = hahn->p;
    family["q"] = hahn->q;
  }
  Json doc;
  doc["n_sites"] = spec.n_sites();
  doc["couplings"] = vector_to_json(spec.couplings);
  doc["fields"] = vector_to_json(spec.fields);
  doc["family"] = family;
  doc["predicted_period"] = spec.predicted_period ? Json(*spec.predicted_period) : Json(nullptr);
  return doc;
}

ChainSpecd chain_from_json(const Json& doc) {
  const Eigen::VectorXd couplings = vector_from_json(doc.at("couplings"), "couplings");
  const Eigen::VectorXd fields = vector_from_json(doc.at("fields"), "fields");
  if (doc.contains("n_sites") && doc.at("n_sites").get<long>() != fields.size())
    throw std::invalid_argument("chain json: n_sites disagrees with fields");

  ChainSpecd spec = custom_chain<double>(couplings, fields);
  const Json& family = doc.at("family");
  const std::string kind = family.at("kind").get<std::string>();
  if (kind == "custom") {
    if (doc.contains("predicted_period") && !doc.at("predicted_period").is_null())
      spec.predicted_period = doc.at("predicted_period").get<double>();
    return spec;
  }

  const int n = static_cast<int>(couplings.size());
  ChainSpecd expected;
  if (kind == "krawtchouk") {
    expected = krawtchouk_chain<double>(n);
  } else if (kind == "hahn") {
    expected = hahn_chain<double>(n, family.at("p").get<int>(), family.at("q").get<int>());
  } else {
    throw std::invalid_argument("chain json: unknown family kind '" + kind + "'");
  }
  const double scale = std::max(1.0, expected.fields.cwiseAbs().maxCoeff() + expected.couplings.cwiseAbs().maxCoeff());
  if ((expected.couplings - couplings).cwiseAbs().maxCoeff() > 1e-12 * scale ||
      (expected.fields - fields).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("chain json: couplings/fields do not match the " + kind + " family");
  return expected;
}

Json to_json(const MirrorCertificate<double>& cert) {
  Json phases = Json::array();
  for (std::size_t m = 0; m < cert.per_sector_phase.size(); ++m)
    phases.push_back(Json{{"m", m}, {"re", cert.per_sector_phase[m].real()}, {"im", cert.per_sector_phase[m].imag()}});
  Json doc;
  doc["time"] = cert.time;
  doc["phases"] = phases;
  doc["max_deviation"] = cert.max_deviation;
  doc["pass"] = cert.passed();
  return doc;
}

Json to_json(const EquivalenceReport<double>& report) {
  Json doc;
  doc["max_entry_difference"] = report.max_entry_difference;
  doc["scale"] = report.scale;
  doc["shift"] = report.shift;
  doc["pass"] = report.pass;
  return doc;
}

Json to_json(const ReversalPlan& plan) {
  Json steps = Json::array();
  for (const auto& [start, end] : plan.steps) steps.push_back(Json::array({start, end}));
  Json doc;
  doc["n_sites"] = plan.n_sites;
  doc["steps"] = steps;
  return doc;
}

ReversalPlan plan_from_json(const Json& doc) {
  ReversalPlan plan{doc.at("n_sites").get<int>(), {}};
  for (const auto& step : doc.at("steps")) {
    if (!step.is_array() || step.size() != 2) throw std::invalid_argument("plan json: steps are [start, end] pairs");
    plan.steps.emplace_back(step[0].get<int>(), step[1].get<int>());
  }
  compose_plan(plan);  // validates segments
  return plan;
}

ChainSpecd read_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open chain file '" + path + "'");
  return chain_from_json(Json::parse(in));
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::vector<double> TimeGrid::points() const {
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> t(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = start + static_cast<double>(i) * step;
  return t;
}

TimeGrid parse_time_grid(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  std::vector<double> values;
  while (std::getline(ss, part, ':')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("time grid: '" + text + "' is not start:stop:step");
    }
    if (used != part.size()) throw std::invalid_argument("time grid: '" + text + "' is not start:stop:step");
    values.push_back(v);
  }
  if (values.size() != 3) throw std::invalid_argument("time grid: '" + text + "' is not start:stop:step");
  TimeGrid grid{values[0], values[1], values[2]};
  if (!(grid.step > 0) || !(grid.stop >= grid.start) || !std::isfinite(grid.stop) || !std::isfinite(grid.start))
    throw std::invalid_argument("time grid: need step > 0 and stop >= start");
  return grid;
}

std::string fidelity_csv(const Eigensystemd& es, const TimeGrid& grid) {
  std::string out = "t,fidelity\n";
  for (double t : grid.points()) out += format_number(t, 12) + "," + format_number(transfer_fidelity(es, t), 12) + "\n";
  return out;
}

std::string table_csv(const EigenfunctionTabled& table) {
  std::string out = "k,l,phi\n";
  for (Eigen::Index k = 0; k < table.values.rows(); ++k)
    for (Eigen::Index l = 0; l < table.values.cols(); ++l)
      out += std::to_string(k) + "," + std::to_string(l) + "," + format_number(table.values(k, l), 17) + "\n";
  return out;
}

}  // namespace mirror::io
