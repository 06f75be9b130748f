#include "nring/report_io.hpp"

#include <cmath>
#include <cstdio>

namespace nring {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ojson to_json(const element& e) {
  ojson arr = ojson::array();
  for (double c : e.coords()) arr.push_back(c);
  return arr;
}

ojson to_json(const schedule& s) {
  return ojson{{"kind", to_string(s.kind)},
               {"s", s.s},
               {"m_max", s.m_max},
               {"tol", s.tol}};
}

ojson to_json(const iterate_record& r) {
  ojson j{{"m", r.m}, {"value", to_json(r.value)}};
  if (r.step_norm)
    j["step_norm"] = *r.step_norm;
  else
    j["step_norm"] = nullptr;
  return j;
}

ojson to_json(const iteration_trace& t) {
  ojson j;
  j["point"] = to_json(t.point);
  j["schedule"] = to_json(t.sched);
  j["verdict"] = to_string(t.verdict);
  ojson its = ojson::array();
  for (const auto& r : t.iterates) its.push_back(to_json(r));
  j["iterates"] = std::move(its);
  j["limit"] = t.limit ? to_json(*t.limit) : ojson(nullptr);
  j["residual_bound"] = t.residual ? ojson(*t.residual) : ojson(nullptr);
  if (t.growth)
    j["growth"] = ojson{{"m", t.growth->m}, {"value_norm", t.growth->value_norm}};
  else
    j["growth"] = nullptr;
  return j;
}

ojson to_json(const defect_report& r) {
  ojson j;
  j["functional"] = r.functional;
  j["sup"] = r.sup;
  j["bound"] = r.bound ? ojson(*r.bound) : ojson(nullptr);
  j["tolerance"] = r.tolerance;
  j["satisfied"] = r.satisfied;
  j["samples"] = r.samples;
  ojson params = ojson::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = std::move(params);
  ojson wit = ojson::array();
  for (const auto& e : r.witness) wit.push_back(to_json(e));
  j["witness"] = std::move(wit);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string csv_header() {
  return "functional,n,p,q,eps,delta,sup,bound,satisfied,witness";
}

namespace {

std::string param_or(const defect_report& r, const char* key) {
  auto it = r.params.find(key);
  return it == r.params.end() ? std::string() : format_double(it->second);
}

}  // namespace

std::string csv_row(const defect_report& r) {
  std::string witness;
  for (std::size_t t = 0; t < r.witness.size(); ++t) {
    if (t) witness += '|';
    const auto& c = r.witness[t].coords();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) witness += ' ';
      witness += format_double(c[i]);
    }
  }
  std::string row = r.functional;
  row += ',' + param_or(r, "n");
  row += ',' + param_or(r, "p");
  row += ',' + param_or(r, "q");
  row += ',' + param_or(r, "eps");
  row += ',' + param_or(r, "delta");
  row += ',' + format_double(r.sup);
  row += ',';
  row += r.bound ? format_double(*r.bound) : std::string();
  row += ',';
  row += r.satisfied ? "true" : "false";
  row += ',' + witness;
  return row;
}

std::string trace_csv(const iteration_trace& t) {
  std::string text = "m,step_norm,value_norm,value\n";
  for (const auto& r : t.iterates) {
    text += std::to_string(r.m);
    text += ',';
    if (r.step_norm) text += format_double(*r.step_norm);
    text += ',' + format_double(norm(r.value));
    text += ',';
    const auto& c = r.value.coords();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) text += ' ';
      text += format_double(c[i]);
    }
    text += '\n';
  }
  return text;
}

}  // namespace nring
