#include "rsda/serialization.hpp"

#include "rsda/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace rsda {

using nlohmann::json;

namespace {

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

Vector vector_from(const json& j, const char* field) {
  if (!j.is_array()) {
    throw ValidationError(std::string("rule JSON: '") + field + "' must be an array");
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ValidationError(std::string("rule JSON: '") + field + "' has a non-numeric entry");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw ValidationError(std::string("rule JSON: missing field '") + name + "'");
  }
  return j.at(name);
}

json linear_json(const LinearRule& rule) {
  return json{{"kind", "linear"}, {"omega", vector_json(rule.omega())}, {"nu", vector_json(rule.nu())}};
}

LinearRule linear_from(const json& j) {
  if (field(j, "kind") != "linear") {
    throw ValidationError("rule JSON: inner rule must have kind 'linear'");
  }
  return LinearRule(vector_from(field(j, "omega"), "omega"), vector_from(field(j, "nu"), "nu"));
}

json rule_json(const AnyRule& rule) {
  if (const auto* linear = std::get_if<LinearRule>(&rule)) {
    return linear_json(*linear);
  }
  const auto& rs = std::get<RSRule>(rule);
  json columns = json::array();
  for (Eigen::Index c = 0; c < rs.basis.rank(); ++c) {
    columns.push_back(vector_json(rs.basis.columns.col(c)));
  }
  json basis{{"columns", columns},
             {"rho", rs.basis.rho},
             {"kind", std::string(to_string(rs.basis.kind))},
             {"eigenvalues", vector_json(rs.basis.eigenvalues)}};
  return json{{"kind", "rs"}, {"basis", basis}, {"inner", linear_json(rs.inner)}};
}

json optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string rotation_name(RotationMode mode) {
  switch (mode) {
    case RotationMode::none:
      return "none";
    case RotationMode::full:
      return "full";
    case RotationMode::economy:
      return "economy";
    case RotationMode::oracle:
      return "oracle";
  }
  return "none";
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string rule_to_json(const AnyRule& rule) { return rule_json(rule).dump(2) + "\n"; }

AnyRule rule_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("rule JSON: ") + e.what());
  }
  try {
    const auto& kind = field(j, "kind");
    if (kind == "linear") {
      return linear_from(j);
    }
    if (kind != "rs") {
      throw ValidationError("rule JSON: unknown kind");
    }
    const json& b = field(j, "basis");
    const json& cols = field(b, "columns");
    if (!cols.is_array() || cols.empty()) {
      throw ValidationError("rule JSON: basis columns must be a non-empty array");
    }
    RotationBasis basis;
    const Vector first = vector_from(cols[0], "columns");
    basis.columns.resize(first.size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const Vector col = vector_from(cols[c], "columns");
      if (col.size() != first.size()) {
        throw ValidationError("rule JSON: basis columns differ in length");
      }
      basis.columns.col(static_cast<Eigen::Index>(c)) = col;
    }
    const json& rho = field(b, "rho");
    if (!rho.is_number()) {
      throw ValidationError("rule JSON: basis rho must be a number");
    }
    basis.rho = rho.get<double>();
    basis.kind = basis_kind_from_string(field(b, "kind").get<std::string>());
    if (b.contains("eigenvalues")) {
      basis.eigenvalues = vector_from(b.at("eigenvalues"), "eigenvalues");
    }
    basis.validate();
    return RSRule(std::move(basis), linear_from(field(j, "inner")));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("rule JSON: ") + e.what());
  }
}

std::string result_to_json(const ExperimentResult& result) {
  const ExperimentSpec& s = result.spec;
  json methods = json::array();
  for (const auto& m : s.methods) {
    methods.push_back(m.name);
  }
  json rho = s.rho.fixed ? json(*s.rho.fixed) : json("cv");
  json spec{{"model", s.model.name()},
            {"p", s.model.p},
            {"target_error", s.model.target_error},
            {"sparsity", s.model.sparsity},
            {"n1", s.n1},
            {"n2", s.n2},
            {"n_test1", s.test1()},
            {"n_test2", s.test2()},
            {"methods", methods},
            {"replicates", s.replicates},
            {"master_seed", s.master_seed},
            {"rho", rho},
            {"rho_grid", s.rho.grid},
            {"cv_folds", s.cv_folds},
            {"redraw_model", s.redraw_model}};
  json out{{"spec", spec}, {"bayes_error", optional_number(result.bayes_error)}};
  json per_method = json::array();
  for (std::size_t k = 0; k < result.methods.size(); ++k) {
    const MethodResult& m = result.methods[k];
    const MethodSpec& ms = s.methods[k];
    json errors = json::array();
    for (const auto& e : m.errors) {
      errors.push_back(optional_number(e));
    }
    json entry{{"name", m.name},
               {"base", std::string(to_string(ms.base))},
               {"rotation", rotation_name(ms.rotation)},
               {"mean", number_or_null(m.mean)},
               {"std", number_or_null(m.std)},
               {"failures", m.failure_count},
               {"errors", errors},
               {"failure_messages", m.failures}};
    if (!m.selected_rho.empty()) {
      json rhos = json::array();
      for (const auto& r : m.selected_rho) {
        rhos.push_back(optional_number(r));
      }
      entry["selected_rho"] = rhos;
    }
    per_method.push_back(entry);
  }
  out["methods"] = per_method;
  return out.dump(2) + "\n";
}

std::string result_to_long_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "method,replicate,error\n";
  for (const auto& m : result.methods) {
    for (std::size_t i = 0; i < m.errors.size(); ++i) {
      out << m.name << ',' << i << ',';
      if (m.errors[i]) {
        out << format_double(*m.errors[i]);
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "grid,method,mean,std\n";
  for (const auto& r : rows) {
    out << format_double(r.grid) << ',' << r.method << ',' << format_double(r.mean) << ','
        << format_double(r.std) << '\n';
  }
  return out.str();
}

}  // namespace rsda
