#include "momentflow/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace momentflow {

std::string format_double(double x) {
  if (!std::isfinite(x)) throw std::logic_error("report: non-finite numeric field");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void dump_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_value(std::string& out, const OrderedJson& j, int indent, int depth) {
  const std::string pad(indent * (depth + 1), ' ');
  const std::string closing_pad(indent * depth, ' ');
  switch (j.type()) {
    case OrderedJson::value_t::null: out += "null"; break;
    case OrderedJson::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case OrderedJson::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      break;
    case OrderedJson::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      break;
    case OrderedJson::value_t::number_float: out += format_double(j.get<double>()); break;
    case OrderedJson::value_t::string: dump_string(out, j.get<std::string>()); break;
    case OrderedJson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[";
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ",";
        first = false;
        out += "\n" + pad;
        dump_value(out, item, indent, depth + 1);
      }
      out += "\n" + closing_pad + "]";
      break;
    }
    case OrderedJson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",";
        first = false;
        out += "\n" + pad;
        dump_string(out, it.key());
        out += ": ";
        dump_value(out, it.value(), indent, depth + 1);
      }
      out += "\n" + closing_pad + "}";
      break;
    }
    default: throw std::logic_error("report: unsupported JSON value type");
  }
}

OrderedJson vec_json(const Vec& v) {
  OrderedJson a = OrderedJson::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

OrderedJson dbl_vec_json(const std::vector<double>& v) {
  OrderedJson a = OrderedJson::array();
  for (double x : v) a.push_back(x);
  return a;
}

OrderedJson int_vec_json(const std::vector<int>& v) {
  OrderedJson a = OrderedJson::array();
  for (int x : v) a.push_back(x);
  return a;
}

}  // namespace

std::string dump_json(const OrderedJson& j, int indent) {
  std::string out;
  dump_value(out, j, indent, 0);
  return out;
}

std::vector<std::pair<std::string, std::string>> flatten_json(const OrderedJson& j) {
  std::vector<std::pair<std::string, std::string>> cells;
  std::function<void(const OrderedJson&, const std::string&)> walk =
      [&](const OrderedJson& node, const std::string& path) {
        switch (node.type()) {
          case OrderedJson::value_t::object:
            for (auto it = node.begin(); it != node.end(); ++it)
              walk(it.value(), path.empty() ? it.key() : path + "." + it.key());
            break;
          case OrderedJson::value_t::array: {
            std::string joined;
            bool scalar_only = true;
            for (const auto& item : node) {
              if (item.is_structured()) {
                scalar_only = false;
                break;
              }
            }
            if (scalar_only) {
              bool first = true;
              for (const auto& item : node) {
                if (!first) joined += ";";
                first = false;
                if (item.is_number_float())
                  joined += format_double(item.get<double>());
                else if (item.is_string())
                  joined += item.get<std::string>();
                else
                  joined += item.dump();
              }
              cells.emplace_back(path, joined);
            } else {
              size_t idx = 0;
              for (const auto& item : node) walk(item, path + "[" + std::to_string(idx++) + "]");
            }
            break;
          }
          case OrderedJson::value_t::number_float:
            cells.emplace_back(path, format_double(node.get<double>()));
            break;
          case OrderedJson::value_t::string:
            cells.emplace_back(path, node.get<std::string>());
            break;
          case OrderedJson::value_t::null: cells.emplace_back(path, ""); break;
          default: cells.emplace_back(path, node.dump()); break;
        }
      };
  walk(j, "");
  return cells;
}

std::string to_csv(const std::vector<OrderedJson>& rows) {
  if (rows.empty()) return "";
  auto escape = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += "\"\"";
      else q += c;
    }
    q += "\"";
    return q;
  };
  const auto head_cells = flatten_json(rows.front());
  std::string out;
  for (size_t i = 0; i < head_cells.size(); ++i) {
    if (i) out += ",";
    out += escape(head_cells[i].first);
  }
  out += "\n";
  for (const auto& row : rows) {
    const auto cells = flatten_json(row);
    for (size_t i = 0; i < head_cells.size(); ++i) {
      if (i) out += ",";
      const auto& key = head_cells[i].first;
      auto it = std::find_if(cells.begin(), cells.end(),
                             [&](const auto& kv) { return kv.first == key; });
      out += escape(it != cells.end() ? it->second : "");
    }
    out += "\n";
  }
  return out;
}

OrderedJson to_json(const CriticalCertificate& c) {
  OrderedJson j;
  j["residual"] = c.residual;
  j["lambda"] = c.lambda;
  j["spectrum"] = vec_json(c.spectrum);
  j["f_value"] = c.f_value;
  j["critical_value_bucket"] = c.critical_value_bucket;
  return j;
}

OrderedJson to_json(const AlgebraInvariants& inv) {
  OrderedJson j;
  j["lower_central_dims"] = int_vec_json(inv.lower_central_dims);
  j["derived_dims"] = int_vec_json(inv.derived_dims);
  j["center_dim"] = inv.center_dim;
  j["derivation_dim"] = inv.derivation_dim;
  j["killing_signature"] =
      OrderedJson::array({inv.killing_signature[0], inv.killing_signature[1],
                          inv.killing_signature[2]});
  j["jacobi_defect"] = inv.jacobi_defect;
  j["nilpotent"] = inv.nilpotent;
  j["solvable"] = inv.solvable();
  return j;
}

OrderedJson to_json(const MomentValue& mv) {
  OrderedJson j;
  j["vector_norm_sq"] = mv.vector_norm_sq;
  if (mv.f_value) j["f_value"] = *mv.f_value;
  OrderedJson rows = OrderedJson::array();
  for (Index r = 0; r < mv.matrix.rows(); ++r) {
    OrderedJson row = OrderedJson::array();
    for (Index c = 0; c < mv.matrix.cols(); ++c) {
      const Complex z = mv.matrix(r, c);
      if (mv.matrix.imag().isZero(0.0))
        row.push_back(z.real());
      else
        row.push_back(OrderedJson::array({z.real(), z.imag()}));
    }
    rows.push_back(row);
  }
  j["matrix"] = rows;
  return j;
}

OrderedJson to_json(const FlowResult& r, bool include_history) {
  OrderedJson j;
  j["status"] = to_string(r.status);
  j["elapsed_flow_time"] = r.elapsed_flow_time;
  j["accepted_steps"] = r.accepted_steps;
  j["certificate"] = to_json(r.certificate);
  j["max_f_increase"] = r.max_f_increase;
  j["max_sphere_violation"] = r.max_sphere_violation;
  j["max_normsq_increase"] = r.max_normsq_increase;
  j["norm_ratio"] = r.norm_ratio;
  if (r.null_cone_indicator) j["null_cone_indicator"] = true;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  if (include_history) {
    j["time_history"] = dbl_vec_json(r.time_history);
    j["f_history"] = dbl_vec_json(r.f_history);
    j["gradnorm_history"] = dbl_vec_json(r.gradnorm_history);
    j["normsq_history"] = dbl_vec_json(r.normsq_history);
  }
  return j;
}

OrderedJson to_json(const DistinguishedVerdict& v) {
  OrderedJson j;
  j["verdict"] = to_string(v.verdict);
  j["flow_status"] = to_string(v.flow_status);
  j["certificate"] = to_json(v.certificate);
  j["invariants_match_start"] = v.invariants_match_start;
  return j;
}

OrderedJson to_json(const ComplexDistinguishedVerdict& v) {
  OrderedJson j;
  j["verdict"] = to_string(v.verdict);
  j["flow_status"] = to_string(v.flow_status);
  j["certificate"] = to_json(v.certificate);
  j["invariants_match_start"] = v.invariants_match_start;
  return j;
}

OrderedJson to_json(const NilsolitonData& d) {
  OrderedJson j;
  j["soliton_constant"] = d.soliton_constant;
  OrderedJson rows = OrderedJson::array();
  for (Index r = 0; r < d.derivation.rows(); ++r) {
    OrderedJson row = OrderedJson::array();
    for (Index c = 0; c < d.derivation.cols(); ++c) row.push_back(d.derivation(r, c));
    rows.push_back(row);
  }
  j["derivation"] = rows;
  j["derivation_eigenvalues"] = vec_json(d.derivation_eigenvalues);
  if (d.eigenvalue_type) {
    OrderedJson t = OrderedJson::array();
    for (long p : *d.eigenvalue_type) t.push_back(p);
    j["eigenvalue_type"] = t;
  }
  return j;
}

OrderedJson to_json(const KOrbitSignature& s) {
  OrderedJson j;
  j["spectrum"] = vec_json(s.spectrum);
  j["f_value"] = s.f;
  if (s.algebra) j["invariants"] = to_json(*s.algebra);
  return j;
}

OrderedJson to_json(const RealComplexReport& r) {
  OrderedJson j;
  j["real_locus_error"] = r.real_locus_error;
  j["real"] = to_json(r.real);
  j["complex_embedded"] = to_json(r.complex_embedded);
  j["complex_perturbed"] = to_json(r.complex_perturbed);
  j["mu_star_value"] = r.mu_star_value;
  j["verdicts_agree"] = r.verdicts_agree;
  j["perturb_seed"] = r.perturb_seed;
  return j;
}

OrderedJson to_json(const ClosedOrbitReport& r) {
  OrderedJson j;
  j["verdict"] = to_string(r.verdict);
  j["final_moment_over_norm_sq"] = r.final_moment_over_norm_sq;
  j["norm_ratio"] = r.norm_ratio;
  j["flow"] = to_json(r.flow);
  return j;
}

OrderedJson to_json(const RealFormsReport& r) {
  OrderedJson j;
  j["certified_real_forms"] = r.certified_real_forms;
  if (!r.warning.empty()) j["warning"] = r.warning;
  j["path"] = r.nilpotent_path ? "distinguished" : "kempf_ness_sl";
  if (r.distinguished_1) j["first"] = to_json(*r.distinguished_1);
  if (r.distinguished_2) j["second"] = to_json(*r.distinguished_2);
  if (r.closed_1) j["first"] = to_json(*r.closed_1);
  if (r.closed_2) j["second"] = to_json(*r.closed_2);
  j["verdicts_agree"] = r.verdicts_agree;
  return j;
}

OrderedJson to_json(const FlowConfig& cfg) {
  OrderedJson j;
  j["tol_grad"] = cfg.tol_grad;
  j["tol_residual"] = cfg.tol_residual;
  j["max_flow_time"] = cfg.max_flow_time;
  j["rk_rel_tol"] = cfg.rk_rel_tol;
  j["rk_abs_tol"] = cfg.rk_abs_tol;
  j["max_steps"] = cfg.max_steps;
  j["record_stride"] = cfg.record_stride;
  j["field_scale"] = cfg.field_scale;
  return j;
}

}  // namespace momentflow
